#include "sgw/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "sgw/coherence.hpp"
#include "sgw/errors.hpp"
#include "sgw/grid.hpp"
#include "sgw/io.hpp"
#include "sgw/marginals.hpp"
#include "sgw/params.hpp"
#include "sgw/pde.hpp"

namespace sgw::cli {

namespace fs = std::filesystem;

double parse_time(std::string_view text) {
  struct Suffix {
    std::string_view s;
    double per_second;
  };
  static constexpr Suffix kSuffixes[] = {{"ns", 1e9}, {"us", 1e6}, {"ms", 1e3}, {"s", 1.0}};
  double per_second = 1.0;
  std::string_view num = text;
  for (const auto& sfx : kSuffixes) {
    if (num.size() > sfx.s.size() && num.substr(num.size() - sfx.s.size()) == sfx.s) {
      num.remove_suffix(sfx.s.size());
      per_second = sfx.per_second;
      break;
    }
  }
  double v = 0.0;
  const auto res = std::from_chars(num.data(), num.data() + num.size(), v);
  if (num.empty() || res.ec != std::errc() || res.ptr != num.data() + num.size() || !std::isfinite(v) || v < 0.0)
    throw InvalidParameter("bad time '" + std::string(text) + "'");
  // dividing keeps exact decimal inputs such as 50us correctly rounded
  return v / per_second;
}

std::vector<double> parse_time_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(',', start);
    const auto item = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    out.push_back(parse_time(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

namespace {

// Argument problems found after CLI11 parsing; reported with exit status 1.
struct ArgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<double> parse_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size())
      throw ArgError(std::string("bad number in ") + what + ": '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ArgError(std::string(what) + " is empty");
  return out;
}

std::vector<double> times_arg(const std::string& text) {
  try {
    return parse_time_list(text);
  } catch (const InvalidParameter& e) {
    throw ArgError(e.what());
  }
}

double time_arg(const std::string& text) {
  try {
    return parse_time(text);
  } catch (const InvalidParameter& e) {
    throw ArgError(e.what());
  }
}

ExperimentParams load_config(const std::string& config, double gamma_override) {
  ExperimentParams p = config.empty() || config == "silver-sg" ? ExperimentParams::silver_sg() : load_scenario(config);
  if (gamma_override >= 0.0) p = p.with_gamma(gamma_override);
  return p;
}

std::string index_name(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03zu.%s", stem, i, ext);
  return buf;
}

struct Shared {
  std::string config;
  double gamma = -1.0;
  std::string out_dir = ".";
};

void add_config(CLI::App* sub, Shared& s) {
  sub->add_option("--config", s.config, "scenario JSON file, or silver-sg for the built-in preset");
  sub->add_option("--gamma", s.gamma, "override the damping rate, 1/s")->check(CLI::NonNegativeNumber);
}

int cmd_derive(const Shared& s, const std::string& times, std::ostream& out) {
  const auto ts = times_arg(times);
  const Model m(load_config(s.config, s.gamma));
  out << "lambda_J_per_T " << io::format_double(m.lambda()) << "\n";
  out << "D_kg2m2_per_s3 " << io::format_double(m.D()) << "\n";
  out << "gamma_per_s " << io::format_double(m.gamma()) << "\n";
  if (m.gamma() > 0.0) out << "D_over_gamma " << io::format_double(m.D() / m.gamma()) << "\n";
  out << "force_N " << io::format_double(m.force()) << "\n";
  out << "diffusion_ratio " << io::format_double(diffusion_ratio(m)) << "\n";
  out << "t_s,tau,regime\n";
  for (double t : ts) {
    out << io::format_double(t) << ',' << io::format_double(tau(t, m.gamma())) << ','
        << to_string(regime(m, t).regime) << "\n";
  }
  return 0;
}

int cmd_evolve(const Shared& s, const std::string& times, const std::string& kind_s, const std::string& fmt_s,
               unsigned n, double n_sigmas, const std::string& zr, const std::string& pr, std::ostream& out) {
  const Model m(load_config(s.config, s.gamma));
  FieldKind kind;
  GridFormat fmt;
  try {
    kind = parse_field_kind(kind_s);
    fmt = parse_grid_format(fmt_s);
  } catch (const InvalidParameter& e) {
    throw ArgError(e.what());
  }
  if (zr.empty() != pr.empty()) throw ArgError("--z-range and --p-range go together");
  const auto ts = times_arg(times);
  const char* ext = fmt == GridFormat::csv ? "csv" : "bin";
  std::vector<std::vector<double>> index;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    PhaseSpaceGrid grid;
    if (!zr.empty()) {
      const auto z = parse_numbers(zr, "--z-range");
      const auto p = parse_numbers(pr, "--p-range");
      if (z.size() != 2 || p.size() != 2) throw ArgError("ranges take two values: min,max");
      grid = {z[0], z[1], p[0], p[1], n, n};
    } else {
      grid = auto_window(ts[i], m, n_sigmas, n, n);
    }
    const WignerField f = sample(kind, ts[i], grid, m);
    const fs::path path = fs::path(s.out_dir) / index_name("field", i, ext);
    export_field(f, path, fmt);
    const auto peaks = find_local_maxima(f);
    out << path.string() << " t=" << num(ts[i]) << " max=" << num(f.max()) << " peaks=" << peaks.size();
    for (const auto& pk : peaks) out << " (" << num(pk.z) << "," << num(pk.p) << ")";
    out << "\n";
    index.push_back({static_cast<double>(i), ts[i], grid.z_min, grid.z_max, grid.p_min, grid.p_max});
  }
  io::write_table(fs::path(s.out_dir) / "fields.csv", {"index", "t", "z_min", "z_max", "p_min", "p_max"}, index);
  return 0;
}

int cmd_marginals(const Shared& s, const std::string& t_max_s, unsigned points, const std::string& gammas_s,
                  std::ostream& out) {
  const ExperimentParams base = load_config(s.config, s.gamma);
  const double t_max = time_arg(t_max_s);
  if (!(t_max > 0.0)) throw ArgError("--t-max must be positive");
  if (points < 2) throw ArgError("--points must be at least 2");
  const std::vector<double> gammas = gammas_s.empty() ? std::vector<double>{base.gamma()} : parse_numbers(gammas_s, "--gammas");
  std::vector<std::vector<double>> rows;
  for (double g : gammas) {
    if (!(g >= 0.0)) throw ArgError("gammas must be >= 0");
    const Model m(base.with_gamma(g));
    for (unsigned k = 0; k < points; ++k) {
      const double t = t_max * k / (points - 1);
      const auto mo = moments(m, t);
      rows.push_back({g, t, mo.z_c, mo.p_c, mo.sigma_z, mo.sigma_p});
    }
    const auto end = moments(m, t_max);
    out << "gamma=" << num(g) << " z_c=" << num(end.z_c) << " p_c=" << num(end.p_c) << " sigma_z="
        << num(end.sigma_z) << " sigma_p=" << num(end.sigma_p) << "\n";
  }
  const fs::path path = fs::path(s.out_dir) / "marginals.csv";
  io::write_table(path, {"gamma", "t", "z_c", "p_c", "sigma_z", "sigma_p"}, rows);
  out << path.string() << "\n";
  return 0;
}

void print_fit(const PowerLawFit& fit, std::ostream& out) {
  out << "a = " << num(fit.a) << " +- " << num(fit.stderr_a) << " (units of " << num(fit.time_unit) << " s)\n";
  out << "b = " << num(fit.b) << " +- " << num(fit.stderr_b) << "\n";
  out << "rms log residual = " << num(fit.residual) << " over " << fit.n << " points\n";
}

int cmd_coherence(const Shared& s, const std::string& gammas_s, const std::string& method_s, bool spin,
                  std::ostream& out) {
  const Model base(load_config(s.config, s.gamma));
  CoherenceOptions opts;
  if (method_s == "analytic") opts.method = DeltaMethod::analytic;
  else if (method_s == "quadrature") opts.method = DeltaMethod::quadrature;
  else throw ArgError("--method must be analytic or quadrature");
  opts.spin_prefactor = spin;
  const auto gammas = parse_numbers(gammas_s, "--gammas");
  const ScanResult scan = scan_and_fit(base, gammas, opts);
  out << "gamma,t_d,t_venugopalan\n";
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const auto& p = scan.points[i];
    write_curve(p.curve, fs::path(s.out_dir) / index_name("delta", i, "csv"));
    out << num(p.gamma) << ',' << num(p.t_d) << ',' << num(p.venugopalan) << "\n";
  }
  write_td_table(scan, fs::path(s.out_dir) / "td_table.csv");
  write_fit(scan.fit, fs::path(s.out_dir) / "fit.json");
  print_fit(scan.fit, out);
  if (scan.flagged) out << "warning: fit residual exceeds 0.05\n";
  return 0;
}

int cmd_fit(const std::string& in, double unit, std::ostream& out) {
  const auto [g, td] = read_td_table(in);
  print_fit(fit_power_law(g, td, unit), out);
  return 0;
}

int cmd_oracle(bool nondim, const Shared& s, unsigned n, double gamma, double D, double f_diag, double f_off,
               const std::string& t_s, const std::string& scheme_s, std::ostream& out) {
  if (!nondim) throw ArgError("the PDE oracle runs only in nondimensional mode; pass --nondim");
  simd::FluxScheme scheme;
  if (scheme_s == "van-leer") scheme = simd::FluxScheme::van_leer;
  else if (scheme_s == "upwind") scheme = simd::FluxScheme::upwind1;
  else throw ArgError("--scheme must be van-leer or upwind");
  if (n < 16) throw ArgError("--n must be at least 16");
  const double t_end = time_arg(t_s);
  const Model diag = Model::nondimensional(gamma, D, f_diag);
  const Model off = Model::nondimensional(gamma, D, f_off);

  std::string csv = "component,n,l2_error,steps,max_mass_drift,max_leak\n";
  out << "component n l2_error ratio steps seconds\n";
  for (Component c : {Component::diag_plus, Component::offdiag}) {
    const Model& m = c == Component::offdiag ? off : diag;
    double prev = 0.0;
    for (unsigned res : {n / 2, n}) {
      const OracleResult r = oracle_compare(m, c, t_end, res, scheme);
      out << to_string(c) << ' ' << res << ' ' << num(r.l2_error) << ' '
          << (prev > 0.0 ? num(prev / r.l2_error) : std::string("-")) << ' ' << r.report.steps << ' '
          << num(r.seconds) << "\n";
      csv += std::string(to_string(c)) + ',' + std::to_string(res) + ',' + io::format_double(r.l2_error) + ',' +
             std::to_string(r.report.steps) + ',' + io::format_double(r.report.max_mass_drift) + ',' +
             io::format_double(r.report.max_leak) + "\n";
      prev = r.l2_error;
    }
  }
  io::atomic_write(fs::path(s.out_dir) / "oracle.csv", csv);
  return 0;
}

int cmd_estimate(const std::string& vacuum, std::ostream& out) {
  const VacuumScenario v = vacuum.empty() ? VacuumScenario{} : load_vacuum(vacuum);
  const DampingEstimate e = estimate_damping(v.vacuum, v.atom_mass);
  out << "mu_kg_per_s " << io::format_double(e.viscosity) << "\n";
  out << "gamma_per_s " << io::format_double(e.gamma) << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-matrix Wigner function of a damped Stern-Gerlach beam"};
  app.name("sgw");
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all");

  Shared sh;
  std::string times = "0,50us,100us,200us,400us", kind = "trace", fmt = "csv", zr, pr, t_max = "400us",
              gammas, method = "analytic", in, vacuum, oracle_t = "1", scheme = "van-leer";
  unsigned n = 201, points = 401, oracle_n = 256;
  double n_sigmas = 5.0, unit = 1e-6, o_gamma = 0.1, o_D = 0.05, o_fd = 1.0, o_fo = 2.5;
  bool spin = false, nondim = false;

  auto* derive = app.add_subcommand("derive", "print lambda, D and the tau table");
  add_config(derive, sh);
  derive->add_option("--times", times, "comma-separated times (s, ms, us, ns suffixes)");

  auto* evolve = app.add_subcommand("evolve", "sample closed-form fields at given times");
  add_config(evolve, sh);
  evolve->add_option("--times", times, "comma-separated times")->required();
  evolve->add_option("--kind", kind, "trace, diag+, diag-, offdiag-re, offdiag-im or offdiag-abs");
  evolve->add_option("--out", sh.out_dir, "output directory")->required();
  evolve->add_option("--format", fmt, "csv or grid-bin");
  evolve->add_option("--n", n, "nodes per axis")->check(CLI::Range(8u, 100000u));
  evolve->add_option("--sigmas", n_sigmas, "automatic window half-width in widths")->check(CLI::Range(3.0, 1e3));
  evolve->add_option("--z-range", zr, "fixed window z_min,z_max in m");
  evolve->add_option("--p-range", pr, "fixed window p_min,p_max in kg m/s");

  auto* marg = app.add_subcommand("marginals", "centers and widths of the marginals over time");
  add_config(marg, sh);
  marg->add_option("--t-max", t_max, "final time")->required();
  marg->add_option("--points", points, "samples per curve");
  marg->add_option("--gammas", gammas, "comma-separated damping rates, 1/s");
  marg->add_option("--out", sh.out_dir, "output directory")->required();

  auto* coh = app.add_subcommand("coherence", "coherence curves, decoherence times and their fit");
  add_config(coh, sh);
  coh->add_option("--gammas", gammas, "comma-separated damping rates, 1/s")->required();
  coh->add_option("--out", sh.out_dir, "output directory")->required();
  coh->add_option("--method", method, "analytic or quadrature");
  coh->add_flag("--spin-prefactor", spin, "scale the curves by |a b*|");

  auto* fit = app.add_subcommand("fit", "power-law fit of a t_d table");
  fit->add_option("--in", in, "table with gamma and t_d columns")->required();
  fit->add_option("--unit", unit, "seconds per reported unit of a")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle-compare", "finite-difference check of the closed forms");
  oracle->add_flag("--nondim", nondim, "reduced units hbar = m = sigma = 1 (required)");
  oracle->add_option("--out", sh.out_dir, "output directory")->required();
  oracle->add_option("--n", oracle_n, "finest nodes per axis; the half resolution also runs");
  oracle->add_option("--gamma", o_gamma, "damping rate")->check(CLI::PositiveNumber);
  oracle->add_option("--D", o_D, "momentum diffusion")->check(CLI::NonNegativeNumber);
  oracle->add_option("--force", o_fd, "force of the diagonal run");
  oracle->add_option("--offdiag-force", o_fo, "force of the off-diagonal run");
  oracle->add_option("--t", oracle_t, "final time");
  oracle->add_option("--scheme", scheme, "van-leer or upwind");

  auto* est = app.add_subcommand("estimate-gamma", "damping rate from residual-gas kinetics");
  est->add_option("--vacuum", vacuum, "vacuum JSON file (defaults to the built-in estimate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*derive) return cmd_derive(sh, times, out);
    if (*evolve) return cmd_evolve(sh, times, kind, fmt, n, n_sigmas, zr, pr, out);
    if (*marg) return cmd_marginals(sh, t_max, points, gammas, out);
    if (*coh) return cmd_coherence(sh, gammas, method, spin, out);
    if (*fit) return cmd_fit(in, unit, out);
    if (*oracle) return cmd_oracle(nondim, sh, oracle_n, o_gamma, o_D, o_fd, o_fo, oracle_t, scheme, out);
    if (*est) return cmd_estimate(vacuum, out);
  } catch (const ArgError& e) {
    err << "sgw: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "sgw: " << e.name() << ": " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace sgw::cli
