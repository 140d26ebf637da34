#include "sgw/coherence.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "sgw/closedform.hpp"
#include "sgw/errors.hpp"
#include "sgw/io.hpp"
#include "sgw/parallel.hpp"
#include "sgw/quadrature.hpp"

namespace sgw {

namespace {

void require_positive_definite(const GaussianForm& q) {
  const double det = 4.0 * q.qzz * q.qpp - q.qzp * q.qzp;
  if (!(q.qzz > 0.0) || !(det > 0.0) || !std::isfinite(det))
    throw NotPositiveDefinite("real part of the off-diagonal exponent is not positive definite");
}

OffDiagForm checked_form(const Model& model, double t) {
  try {
    OffDiagForm o = offdiag_form(model, t);
    require_positive_definite(o.modulus);
    return o;
  } catch (const DegenerateQuadratic& e) {
    throw NotPositiveDefinite(e.what());
  }
}

// ln |W+-| straight from the coefficients: the real part of
// c1 - X^2 / (4 c3 hbar^2 K) + (z + i c4)^2 / (4 c3) - ln(2 pi hbar sqrt K).
double literal_log_abs(const OffDiagCoeffs& c, double hbar, double z, double p) {
  using Cx = std::complex<double>;
  const double K = c.K();
  const Cx X(-2.0 * c.c2 * c.c3 * hbar + c.c4 * c.c5 * hbar, -c.c5 * z * hbar + 2.0 * c.c3 * p);
  const Cx zc(z, c.c4);
  const Cx ex = c.c1 - X * X / (4.0 * c.c3 * hbar * hbar * K) + zc * zc / (4.0 * c.c3);
  return ex.real() - std::log(2.0 * std::numbers::pi * hbar * std::sqrt(K));
}

double quadrature_delta(const Model& model, const OffDiagForm& o, double t) {
  const OffDiagCoeffs c = offdiag_coeffs(model, model.gamma() * t);
  if (!(c.K() > 0.0) || !(c.c3 < 0.0)) throw NotPositiveDefinite("K or c3 has the wrong sign");
  const GaussianForm& q = o.modulus;
  const double det = 4.0 * q.qzz * q.qpp - q.qzp * q.qzp;
  const double sz = std::sqrt(2.0 * q.qpp / det);
  const double sp = 1.0 / std::sqrt(2.0 * q.qpp);
  const double hbar = model.hbar();
  // Rounding in the raw coefficients puts ~1e-11 relative noise on the
  // integrand once delta is small; a tighter target only burns evaluations.
  constexpr double kRelTol = 1e-8;
  return quad::integrate_2d(
      [&](double z, double p) { return std::exp(literal_log_abs(c, hbar, z, p)); }, -10.0 * sz, 10.0 * sz,
      [&](double z) {
        const double mid = -q.qzp / (2.0 * q.qpp) * z;
        return std::pair{mid - 10.0 * sp, mid + 10.0 * sp};
      },
      kRelTol);
}

}  // namespace

double log_delta(const Model& model, double t) { return checked_form(model, t).log_delta; }

double delta(const Model& model, double t, DeltaMethod method) {
  const OffDiagForm o = checked_form(model, t);
  if (method == DeltaMethod::analytic) return std::exp(o.log_delta);
  return quadrature_delta(model, o, t);
}

double decoherence_time(const std::function<double(double)>& delta_fn, double t_lo, double t_hi) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || !std::isfinite(t_hi))
    throw BracketInvalid("bracket must satisfy 0 < t_lo < t_hi");
  const double target = delta_fn(0.0) / std::numbers::e;
  const double f_lo = delta_fn(t_lo) - target;
  const double f_hi = delta_fn(t_hi) - target;
  if (!(f_lo > 0.0) || !(f_hi < 0.0))
    throw BracketInvalid("delta(" + io::format_double(t_lo) + ") = " + io::format_double(f_lo + target) +
                         ", delta(" + io::format_double(t_hi) + ") = " + io::format_double(f_hi + target) +
                         ", need them on either side of " + io::format_double(target));
  double lo = std::log(t_lo);
  double hi = std::log(t_hi);
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = delta_fn(std::exp(mid)) - target;
    if (f == 0.0) break;
    if (f > 0.0) lo = mid; else hi = mid;
    if (std::expm1(hi - lo) <= 1e-4 && std::abs(f) <= 1e-6) break;
  }
  return std::exp(mid);
}

double decoherence_time(const Model& model, double t_lo, double t_hi) {
  return decoherence_time([&](double t) { return delta(model, t); }, t_lo, t_hi);
}

namespace {

double grid_time(int k, int per_decade, double t_min) {
  return t_min * std::pow(10.0, static_cast<double>(k) / per_decade);
}

int grid_points(const CoherenceOptions& o) {
  return static_cast<int>(std::lround(std::log10(o.t_max / o.t_min) * o.per_decade));
}

}  // namespace

std::pair<double, double> find_bracket(const Model& model) {
  const CoherenceOptions o;
  const double ln_target = -1.0;
  double prev = o.t_min;
  if (log_delta(model, prev) <= ln_target)
    throw BracketInvalid("delta already below 1/e at " + io::format_double(prev) + " s");
  for (int k = 1, n = grid_points(o); k <= n; ++k) {
    const double t = grid_time(k, o.per_decade, o.t_min);
    if (log_delta(model, t) < ln_target) return {prev, t};
    prev = t;
  }
  throw BracketInvalid("delta stays above 1/e up to " + io::format_double(o.t_max) + " s");
}

double decoherence_time(const Model& model) {
  const auto [lo, hi] = find_bracket(model);
  return decoherence_time(model, lo, hi);
}

double venugopalan_time(const Model& model) {
  const double h = model.hbar(), m = model.mass(), g = model.gamma(), f = model.force();
  return std::cbrt(3.0 * h * h * m * m * g * g / (4.0 * model.D() * f * f));
}

CoherenceCurve coherence_curve(const Model& model, const CoherenceOptions& opts) {
  if (!(opts.t_min > 0.0) || !(opts.t_max > opts.t_min) || opts.per_decade < 1)
    throw InvalidParameter("curve needs 0 < t_min < t_max and per_decade >= 1");
  const double scale = opts.spin_prefactor ? std::abs(model.params().spin_a() * std::conj(model.params().spin_b()))
                                           : 1.0;
  CoherenceCurve curve{model.gamma(), {}};
  curve.samples.push_back({0.0, scale * delta(model, 0.0, opts.method)});
  const double stop = std::log(opts.floor);
  for (int k = 0, n = grid_points(opts); k <= n; ++k) {
    const double t = grid_time(k, opts.per_decade, opts.t_min);
    const double ld = log_delta(model, t);
    const double d = opts.method == DeltaMethod::analytic ? std::exp(ld) : delta(model, t, opts.method);
    curve.samples.push_back({t, scale * d});
    if (ld < stop) break;
  }
  return curve;
}

PowerLawFit fit_power_law(const std::vector<double>& gammas, const std::vector<double>& t_d, double time_unit) {
  if (gammas.size() != t_d.size()) throw InvalidParameter("gamma and t_d lists differ in length");
  if (gammas.size() < 4) throw InsufficientData("power-law fit needs at least 4 points");
  const std::size_t n = gammas.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(gammas[i] > 0.0) || !(t_d[i] > 0.0)) throw InvalidParameter("fit inputs must be positive");
    x[i] = std::log(gammas[i]);
    y[i] = std::log(t_d[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientData("all gamma values coincide");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ssr += r * r;
  }
  const double s2 = ssr / static_cast<double>(n - 2);
  double sx2 = 0.0;
  for (double xi : x) sx2 += xi * xi;

  PowerLawFit fit;
  fit.b = slope;
  fit.a = std::exp(intercept) / time_unit;
  fit.stderr_b = std::sqrt(s2 / sxx);
  fit.stderr_a = fit.a * std::sqrt(s2 * sx2 / (n * sxx));
  fit.residual = std::sqrt(ssr / n);
  fit.n = n;
  fit.time_unit = time_unit;
  return fit;
}

ScanResult scan_and_fit(const Model& base, const std::vector<double>& gammas, const CoherenceOptions& opts) {
  if (gammas.size() < 4) throw InsufficientData("scan needs at least 4 gamma values");
  double lo = HUGE_VAL, hi = 0.0;
  for (double g : gammas) {
    if (!(g > 0.0) || !std::isfinite(g)) throw InvalidParameter("scan gammas must be positive");
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  if (std::log10(hi / lo) < 4.0 - 1e-12) throw InsufficientData("scan gammas must span at least 4 decades");

  ScanResult out;
  out.points.resize(gammas.size());
  parallel_for(gammas.size(), [&](std::size_t i) {
    const Model m = base.with_gamma(gammas[i]);
    out.points[i] = {gammas[i], decoherence_time(m), venugopalan_time(m), coherence_curve(m, opts)};
  });
  std::vector<double> td;
  for (const auto& p : out.points) td.push_back(p.t_d);
  out.fit = fit_power_law(gammas, td);
  out.flagged = !(out.fit.residual < 0.05);
  return out;
}

void write_curve(const CoherenceCurve& curve, const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.samples.size());
  for (const auto& s : curve.samples) rows.push_back({s.t, s.delta});
  io::write_table(path, {"t", "delta"}, rows);
}

void write_td_table(const ScanResult& scan, const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : scan.points) rows.push_back({p.gamma, p.t_d, p.venugopalan});
  io::write_table(path, {"gamma", "t_d", "t_venugopalan"}, rows);
}

std::pair<std::vector<double>, std::vector<double>> read_td_table(const std::filesystem::path& path) {
  const io::Table t = io::read_table(path);
  const std::size_t cg = t.column("gamma");
  const std::size_t ct = t.column("t_d");
  std::vector<double> g, td;
  for (const auto& row : t.rows) {
    g.push_back(row[cg]);
    td.push_back(row[ct]);
  }
  return {g, td};
}

void write_fit(const PowerLawFit& fit, const std::filesystem::path& path) {
  nlohmann::json j = {{"a", fit.a},       {"b", fit.b},   {"stderr_a", fit.stderr_a}, {"stderr_b", fit.stderr_b},
                      {"residual", fit.residual}, {"n", fit.n}, {"time_unit_s", fit.time_unit}};
  io::atomic_write(path, j.dump(2) + "\n");
}

}  // namespace sgw
