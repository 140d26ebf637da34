#include "sgw/marginals.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sgw/errors.hpp"
#include "terms.hpp"

namespace sgw {

GaussianMoments moments(const Model& model, double t, Branch branch) {
  if (!(t >= 0.0)) throw InvalidParameter("time must be >= 0");
  const detail::TimeTerms tt(t, model.gamma());
  const double m = model.mass();
  const double s = model.sigma();
  const double h = model.hbar();
  const double D = model.D();
  const double sgn = sign_of(branch);

  const double sz2 = 2.0 * D * tt.wz / (m * m) + (h * tt.em1 / (m * s)) * (h * tt.em1 / (m * s)) + s * s;
  const double sp2 = 2.0 * D * tt.em2 + h * h * tt.e2 / (s * s);
  return {sgn * model.force() * tt.zc / m, sgn * model.force() * tt.em1, std::sqrt(sz2),
          std::sqrt(sp2), branch};
}

namespace {

double gaussian_pdf(double x, double center, double width) {
  const double u = (x - center) / width;
  return std::exp(-u * u) / (std::sqrt(std::numbers::pi) * width);
}

}  // namespace

double position_pdf(const Model& model, double z, double t, Branch branch) {
  const auto g = moments(model, t, branch);
  return gaussian_pdf(z, g.z_c, g.sigma_z);
}

double momentum_pdf(const Model& model, double p, double t, Branch branch) {
  const auto g = moments(model, t, branch);
  return gaussian_pdf(p, g.p_c, g.sigma_p);
}

double sigma_p_infinity(const Model& model) {
  return std::sqrt(4.0 * model.mass() * model.consts().k_B * model.params().temperature());
}

double diffusion_ratio(const Model& model) {
  const double s = model.sigma();
  const double h = model.hbar();
  return 4.0 * model.mass() * model.consts().k_B * model.params().temperature() * s * s / (h * h);
}

std::vector<CenterSample> classical_centers_ode(const Model& model, double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidParameter("t_end must be >= 0");
  const double gamma = model.gamma();
  if (gamma * dt > 0.1) throw StepTooLarge("gamma * dt = " + std::to_string(gamma * dt) + " exceeds 0.1");
  const double m = model.mass();
  const double force = model.force();

  auto rhs = [&](double /*z*/, double p, double& dz, double& dp) {
    dz = p / m;
    dp = force - gamma * p;
  };

  std::vector<CenterSample> out;
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
  out.reserve(steps + 1);
  double z = 0.0, p = 0.0, t = 0.0;
  out.push_back({t, z, p});
  for (std::size_t i = 0; i < steps; ++i) {
    const double h = std::min(dt, t_end - t);
    double k1z, k1p, k2z, k2p, k3z, k3p, k4z, k4p;
    rhs(z, p, k1z, k1p);
    rhs(z + 0.5 * h * k1z, p + 0.5 * h * k1p, k2z, k2p);
    rhs(z + 0.5 * h * k2z, p + 0.5 * h * k2p, k3z, k3p);
    rhs(z + h * k3z, p + h * k3p, k4z, k4p);
    z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    t = (i + 1 == steps) ? t_end : t + h;
    out.push_back({t, z, p});
  }
  return out;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::small_tau: return "small-tau";
    case Regime::crossover: return "crossover";
    case Regime::large_tau: return "large-tau";
  }
  return "unknown";
}

RegimeReport regime(const Model& model, double t) {
  const double tau_value = tau(t, model.gamma());
  const double m = model.mass();
  const double s = model.sigma();
  const double h = model.hbar();
  const double force = model.force();
  const double gamma = model.gamma();

  RegimeReport r{};
  r.tau = tau_value;
  r.regime = tau_value < kSmallTau   ? Regime::small_tau
             : tau_value > kLargeTau ? Regime::large_tau
                                     : Regime::crossover;

  r.small_tau = {force * t * t / (2.0 * m), s + h * h * t * t / (2.0 * m * m * s * s * s), force * t,
                 h / s + h / s * (diffusion_ratio(model) - 1.0) * tau_value};

  if (gamma > 0.0) {
    const double kT = model.consts().k_B * model.params().temperature();
    r.large_tau = {force * t / (gamma * m), std::sqrt(8.0 * kT * t / (gamma * m)), force / gamma,
                   sigma_p_infinity(model)};
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.large_tau = {nan, nan, nan, nan};
  }
  return r;
}

}  // namespace sgw
