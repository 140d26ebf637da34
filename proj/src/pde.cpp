#include "sgw/pde.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sgw/closedform.hpp"
#include "sgw/errors.hpp"

namespace sgw {

std::string_view to_string(Component comp) {
  switch (comp) {
    case Component::diag_plus: return "diag+";
    case Component::diag_minus: return "diag-";
    case Component::offdiag: return "offdiag";
  }
  return "?";
}

namespace {

double force_sign(Component comp) {
  switch (comp) {
    case Component::diag_plus: return 1.0;
    case Component::diag_minus: return -1.0;
    case Component::offdiag: return 0.0;
  }
  return 0.0;
}

Branch branch_of(Component comp) { return comp == Component::diag_minus ? Branch::minus : Branch::plus; }

double max_abs(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

// Largest |velocity| over the p faces, including the two outer faces.
double max_p_velocity(const Model& model, Component comp, const PhaseSpaceGrid& g) {
  const double f = force_sign(comp) * model.force();
  const double lo = g.p_min - 0.5 * g.dp();
  const double hi = g.p_max + 0.5 * g.dp();
  return max_abs(f - model.gamma() * lo, f - model.gamma() * hi);
}

double phase_rate(const Model& model, const PhaseSpaceGrid& g) {
  const double lb = model.lambda() * model.params().B0();
  return 2.0 * max_abs(lb + model.force() * g.z_min, lb + model.force() * g.z_max) / model.hbar();
}

}  // namespace

PdeConfig oracle_config(const Model& model, Component comp, double t_end, std::uint32_t n, double safety) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidParameter("t_end must be finite and >= 0");
  if (!(safety > 0.0 && safety <= 1.0)) throw InvalidParameter("safety factor must lie in (0, 1]");
  PdeConfig cfg;
  const GaussianMoments m1 = moments(model, t_end, branch_of(comp));
  // standard deviations; the moments are e-folding widths
  const double sz = std::max(model.sigma(), m1.sigma_z) * M_SQRT1_2;
  const double sp = std::max(model.hbar() / model.sigma(), m1.sigma_p) * M_SQRT1_2;
  const double zc = comp == Component::offdiag ? 0.0 : std::abs(m1.z_c);
  const double pc = comp == Component::offdiag ? 0.0 : std::abs(m1.p_c);
  const double hz = zc + cfg.boundary_sigmas * sz;
  const double hp = pc + cfg.boundary_sigmas * sp;
  cfg.grid = {-hz, hz, -hp, hp, n, n};
  cfg.grid.validate();

  const auto& g = cfg.grid;
  double dt = 0.9 * g.dz() * model.mass() / max_abs(g.p_min, g.p_max);
  const double vp = max_p_velocity(model, comp, g);
  if (vp > 0.0) dt = std::min(dt, 0.9 * g.dp() / vp);
  if (!cfg.implicit_diffusion && model.D() > 0.0) dt = std::min(dt, 0.45 * g.dp() * g.dp() / model.D());
  if (comp == Component::offdiag) {
    const double w = phase_rate(model, g);
    if (w > 0.0) dt = std::min(dt, 0.1 / w);
  }
  dt *= safety;
  if (t_end > 0.0) dt = t_end / std::ceil(t_end / dt);
  cfg.dt = dt;
  return cfg;
}

PdeField::PdeField(const PhaseSpaceGrid& grid, bool complex)
    : grid_(grid), stride_(std::size_t{grid.n_z} + 4) {
  grid_.validate();
  const std::size_t total = stride_ * (std::size_t{grid.n_p} + 4);
  re_.assign(total, 0.0);
  if (complex) im_.assign(total, 0.0);
}

PdeField PdeField::initial(const PhaseSpaceGrid& grid, const Model& model, bool complex) {
  PdeField f(grid, complex);
  for (std::size_t j = 0; j < grid.n_p; ++j) {
    double* row = f.re_row(static_cast<long>(j));
    for (std::size_t i = 0; i < grid.n_z; ++i) row[i] = initial_wigner(model, grid.z(i), grid.p(j));
  }
  return f;
}

double PdeField::abs(std::size_t i_z, std::size_t j_p) const noexcept {
  return is_complex() ? std::hypot(re(i_z, j_p), im(i_z, j_p)) : std::abs(re(i_z, j_p));
}

double PdeField::mass() const noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < grid_.n_p; ++j) {
    const double* row = re_row(static_cast<long>(j));
    for (std::size_t i = 0; i < grid_.n_z; ++i) s += row[i];
  }
  return s * grid_.dz() * grid_.dp();
}

double PdeField::abs_mass() const noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < grid_.n_p; ++j)
    for (std::size_t i = 0; i < grid_.n_z; ++i) s += abs(i, j);
  return s * grid_.dz() * grid_.dp();
}

double PdeField::boundary_mass(std::size_t band) const noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < grid_.n_p; ++j)
    for (std::size_t i = 0; i < grid_.n_z; ++i) {
      const bool edge = i < band || j < band || i + band >= grid_.n_z || j + band >= grid_.n_p;
      if (edge) s += abs(i, j);
    }
  return s * grid_.dz() * grid_.dp();
}

bool PdeField::all_finite() const noexcept {
  for (double v : re_)
    if (!std::isfinite(v)) return false;
  for (double v : im_)
    if (!std::isfinite(v)) return false;
  return true;
}

WignerField PdeField::to_field(FieldKind kind, double t) const {
  WignerField out{grid_, kind, std::vector<double>(grid_.size()), t};
  for (std::size_t i = 0; i < grid_.n_z; ++i)
    for (std::size_t j = 0; j < grid_.n_p; ++j) {
      double v = re(i, j);
      if (kind == FieldKind::offdiag_im) v = im(i, j);
      if (kind == FieldKind::offdiag_abs) v = abs(i, j);
      out.values[i * grid_.n_p + j] = v;
    }
  return out;
}

void PdeField::conjugate() noexcept {
  for (double& v : im_) v = -v;
}

PdeSolver::PdeSolver(const Model& model, PdeConfig config, Component comp, int phase_sign,
                     const simd::Kernels& kernels)
    : model_(model), cfg_(std::move(config)), comp_(comp), phase_sign_(phase_sign >= 0 ? 1 : -1), k_(kernels) {
  cfg_.grid.validate();
  const std::size_t nz = cfg_.grid.n_z, np = cfg_.grid.n_p;
  flux_.resize((np + 1) * nz);
  rhs_.resize(np * nz);
  dbuf_.resize(np * nz);
  cs_.resize(nz);
  sn_.resize(nz);
}

void PdeSolver::check_stability(double dt) const {
  const auto& g = cfg_.grid;
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("time step must be positive");
  const double cz = max_abs(g.p_min, g.p_max) / model_.mass() * dt;
  if (cz > 0.9 * g.dz())
    throw CflViolation("z advection: (p_max/m) dt = " + std::to_string(cz) + " exceeds 0.9 dz = " +
                       std::to_string(0.9 * g.dz()));
  const double cp = max_p_velocity(model_, comp_, g) * dt;
  if (cp > 0.9 * g.dp())
    throw CflViolation("p advection: |v_p| dt = " + std::to_string(cp) + " exceeds 0.9 dp = " +
                       std::to_string(0.9 * g.dp()));
  if (!cfg_.implicit_diffusion && model_.D() * dt > 0.45 * g.dp() * g.dp())
    throw CflViolation("explicit diffusion: D dt exceeds 0.45 dp^2");
  if (comp_ == Component::offdiag && phase_rate(model_, g) * dt > 0.1)
    throw PhaseUnderResolved("phase advance per step " + std::to_string(phase_rate(model_, g) * dt) +
                             " rad exceeds 0.1");
}

void PdeSolver::advect_z(PdeField& f, double dt, bool imag) {
  const auto& g = cfg_.grid;
  const std::size_t nz = g.n_z;
  const double lam = dt / g.dz();
  for (long j = 0; j < static_cast<long>(g.n_p); ++j) {
    const double u = g.p(static_cast<std::size_t>(j)) / model_.mass();
    if (u == 0.0) continue;
    double* r = row_of(f, j, imag);
    // face k sits between cells k - 1 and k
    if (u > 0.0)
      k_.face_flux(r - 2, r - 1, r, flux_.data(), nz + 1, u, u * lam, cfg_.scheme);
    else
      k_.face_flux(r + 1, r, r - 1, flux_.data(), nz + 1, u, u * lam, cfg_.scheme);
    k_.flux_difference(r, flux_.data(), flux_.data() + 1, nz, lam);
  }
}

void PdeSolver::advect_p(PdeField& f, double dt, bool imag) {
  const auto& g = cfg_.grid;
  const std::size_t nz = g.n_z;
  const long np = g.n_p;
  const double lam = dt / g.dp();
  const double force = force_sign(comp_) * model_.force();
  for (long k = 0; k <= np; ++k) {
    const double p_face = g.p_min + (static_cast<double>(k) - 0.5) * g.dp();
    const double v = force - model_.gamma() * p_face;
    double* out = flux_.data() + k * nz;
    if (v >= 0.0)
      k_.face_flux(row_of(f, k - 2, imag), row_of(f, k - 1, imag), row_of(f, k, imag), out, nz, v, v * lam,
                   cfg_.scheme);
    else
      k_.face_flux(row_of(f, k + 1, imag), row_of(f, k, imag), row_of(f, k - 1, imag), out, nz, v, v * lam,
                   cfg_.scheme);
  }
  for (long j = 0; j < np; ++j)
    k_.flux_difference(row_of(f, j, imag), flux_.data() + j * nz, flux_.data() + (j + 1) * nz, nz, lam);
}

void PdeSolver::diffuse_p(PdeField& f, double dt, bool imag) {
  const auto& g = cfg_.grid;
  const double D = model_.D();
  if (D == 0.0) return;
  const std::size_t nz = g.n_z;
  const long np = g.n_p;
  const double r = D * dt / (g.dp() * g.dp());

  if (!cfg_.implicit_diffusion) {
    for (long j = 0; j < np; ++j)
      k_.cn_rhs(row_of(f, j - 1, imag), row_of(f, j, imag), row_of(f, j + 1, imag), rhs_.data() + j * nz, nz, r);
    for (long j = 0; j < np; ++j) std::copy_n(rhs_.data() + j * nz, nz, row_of(f, j, imag));
    return;
  }

  // (1 + r) x_j - r/2 (x_{j-1} + x_{j+1}) = rhs_j, with zero ghost rows.
  for (long j = 0; j < np; ++j)
    k_.cn_rhs(row_of(f, j - 1, imag), row_of(f, j, imag), row_of(f, j + 1, imag), rhs_.data() + j * nz, nz,
              0.5 * r);
  const double b = 1.0 + r;
  const double a = -0.5 * r;
  std::vector<double> cp(np);
  double prev_cp = 0.0;
  for (long j = 0; j < np; ++j) {
    const double inv = 1.0 / (b - a * prev_cp);
    cp[j] = a * inv;
    const double* prev = j == 0 ? row_of(f, -1, imag) : dbuf_.data() + (j - 1) * nz;
    k_.thomas_forward(rhs_.data() + j * nz, prev, dbuf_.data() + j * nz, nz, -a, inv);
    prev_cp = cp[j];
  }
  for (long j = np - 1; j >= 0; --j)
    k_.thomas_backward(dbuf_.data() + j * nz, row_of(f, j + 1, imag), row_of(f, j, imag), nz, cp[j]);
}

void PdeSolver::rotate(PdeField& f, double dt) {
  const auto& g = cfg_.grid;
  if (dt != rot_dt_) {
    const double lb = model_.lambda() * model_.params().B0();
    for (std::size_t i = 0; i < g.n_z; ++i) {
      const double th = phase_sign_ * 2.0 * (lb + model_.force() * g.z(i)) * dt / model_.hbar();
      cs_[i] = std::cos(th);
      sn_[i] = std::sin(th);
    }
    rot_dt_ = dt;
  }
  for (long j = 0; j < static_cast<long>(g.n_p); ++j)
    k_.phase_rotate(f.re_row(j), f.im_row(j), cs_.data(), sn_.data(), g.n_z);
}

void PdeSolver::step(PdeField& f, double dt) {
  if (!(f.grid() == cfg_.grid)) throw InvalidParameter("field grid differs from the solver grid");
  if ((comp_ == Component::offdiag) != f.is_complex())
    throw InvalidParameter("off-diagonal evolution needs a complex field and vice versa");
  check_stability(dt);
  const double h = 0.5 * dt;
  const int parts = f.is_complex() ? 2 : 1;
  for (int c = 0; c < parts; ++c) {
    advect_z(f, h, c == 1);
    advect_p(f, h, c == 1);
    diffuse_p(f, dt, c == 1);
  }
  if (comp_ == Component::offdiag) rotate(f, dt);
  for (int c = 0; c < parts; ++c) {
    advect_p(f, h, c == 1);
    advect_z(f, h, c == 1);
  }
  if (!f.all_finite()) throw NonFiniteField("field has a non-finite node after a step");
}

EvolveReport PdeSolver::evolve(PdeField& f, double t_end) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidParameter("t_end must be finite and >= 0");
  EvolveReport rep;
  rep.initial_mass = f.mass();
  const double abs0 = f.abs_mass();
  auto audit = [&](std::size_t step, double t) {
    AuditRecord a{step, t, f.mass(), f.abs_mass(), f.boundary_mass(cfg_.leak_band)};
    if (!f.is_complex() && rep.initial_mass != 0.0)
      rep.max_mass_drift = std::max(rep.max_mass_drift, std::abs(a.mass - rep.initial_mass) / std::abs(rep.initial_mass));
    const double leak = abs0 > 0.0 ? a.boundary_mass / abs0 : 0.0;
    rep.max_leak = std::max(rep.max_leak, leak);
    rep.audits.push_back(a);
    if (leak > cfg_.leak_tolerance)
      throw BoundaryLeak("boundary band holds " + std::to_string(leak) + " of the initial mass at t = " +
                         std::to_string(t));
  };
  audit(0, 0.0);
  if (t_end == 0.0) return rep;

  const double dt = cfg_.dt;
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt * (1.0 - 1e-12)));
  const std::size_t every = std::max<std::size_t>(1, cfg_.audit_every);
  double t = 0.0;
  for (std::size_t s = 1; s <= steps; ++s) {
    const double h = s == steps ? t_end - t : dt;
    step(f, h);
    t = s == steps ? t_end : t + dt;
    if (s % every == 0 || s == steps) audit(s, t);
  }
  rep.steps = steps;
  rep.t = t;
  return rep;
}

void step_diag(PdeField& field, Branch branch, const Model& model, const PdeConfig& config, double dt) {
  PdeSolver(model, config, branch == Branch::plus ? Component::diag_plus : Component::diag_minus).step(field, dt);
}

void step_offdiag(PdeField& field, const Model& model, const PdeConfig& config, double dt) {
  PdeSolver(model, config, Component::offdiag).step(field, dt);
}

double relative_l2(const PdeField& field, const Model& model, Component comp, double t) {
  const auto& g = field.grid();
  GaussianForm ref;
  if (comp == Component::offdiag)
    ref = offdiag_form(model, t).modulus;
  else
    ref = diag_form(model, t, branch_of(comp)).gauss;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < g.n_z; ++i)
    for (std::size_t j = 0; j < g.n_p; ++j) {
      const double r = ref(g.z(i), g.p(j));
      const double v = comp == Component::offdiag ? field.abs(i, j) : field.re(i, j);
      num += (v - r) * (v - r);
      den += r * r;
    }
  return std::sqrt(num / den);
}

OracleResult oracle_compare(const Model& model, Component comp, double t_end, std::uint32_t n,
                            simd::FluxScheme scheme) {
  const auto start = std::chrono::steady_clock::now();
  PdeConfig cfg = oracle_config(model, comp, t_end, n);
  cfg.scheme = scheme;
  PdeField field = PdeField::initial(cfg.grid, model, comp == Component::offdiag);
  PdeSolver solver(model, cfg, comp);
  OracleResult out{comp, n, t_end, 0.0, 0.0, solver.evolve(field, t_end)};
  out.l2_error = relative_l2(field, model, comp, t_end);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace sgw
