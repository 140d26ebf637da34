#include "sgw/params.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "sgw/errors.hpp"

namespace sgw {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }
bool finite_nonnegative(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void PhysicalConstants::validate() const {
  require(finite_positive(hbar) && finite_positive(k_B) && finite_positive(mu_B),
          "physical constants must be finite and strictly positive");
}

ExperimentParams::ExperimentParams(const ExperimentSpec& spec) : s_(spec) {
  require(finite_positive(s_.mass), "mass must be > 0");
  require(finite_positive(s_.sigma), "sigma must be > 0");
  require(std::isfinite(s_.g_s), "g_s must be finite");
  require(finite_nonnegative(s_.temperature), "temperature must be >= 0");
  require(finite_nonnegative(s_.gamma), "gamma must be >= 0");
  require(finite_nonnegative(s_.eta), "eta must be >= 0");
  require(finite_nonnegative(s_.B0), "B0 must be >= 0");

  const double norm2 = std::norm(s_.spin_a) + std::norm(s_.spin_b);
  require(std::isfinite(norm2) && norm2 > 0.0, "spin amplitudes must not both vanish");
  if (std::abs(norm2 - 1.0) > 1e-15) {
    const double inv = 1.0 / std::sqrt(norm2);
    s_.spin_a *= inv;
    s_.spin_b *= inv;
  }
}

ExperimentParams ExperimentParams::silver_sg(double gamma) {
  ExperimentSpec s;
  s.gamma = gamma;
  return ExperimentParams(s);
}

ExperimentParams ExperimentParams::with_gamma(double gamma) const {
  ExperimentSpec s = s_;
  s.gamma = gamma;
  return ExperimentParams(s);
}

ExperimentParams ExperimentParams::with_B0(double B0) const {
  ExperimentSpec s = s_;
  s.B0 = B0;
  return ExperimentParams(s);
}

ExperimentParams ExperimentParams::with_temperature(double temperature) const {
  ExperimentSpec s = s_;
  s.temperature = temperature;
  return ExperimentParams(s);
}

ExperimentParams ExperimentParams::with_spin(std::complex<double> a,
                                             std::complex<double> b) const {
  ExperimentSpec s = s_;
  s.spin_a = a;
  s.spin_b = b;
  return ExperimentParams(s);
}

DerivedParams derive(const ExperimentParams& params, const PhysicalConstants& consts) {
  return {params.g_s() * consts.mu_B / 2.0,
          2.0 * params.mass() * params.gamma() * consts.k_B * params.temperature()};
}

double tau(double t, double gamma) {
  require(t >= 0.0, "time must be >= 0");
  return gamma * t;
}

Model::Model(ExperimentParams params, PhysicalConstants consts)
    : p_(std::move(params)), c_(consts), d_{} {
  c_.validate();
  d_ = derive(p_, c_);
}

Model Model::nondimensional(double gamma, double D, double force, double B0) {
  require(finite_nonnegative(D), "D must be >= 0");
  require(gamma > 0.0 || D == 0.0, "D > 0 needs gamma > 0");
  ExperimentSpec s;
  s.mass = 1.0;
  s.sigma = 1.0;
  s.g_s = 2.0;
  s.B0 = B0;
  s.eta = force;
  s.gamma = gamma;
  s.temperature = gamma > 0.0 ? D / (2.0 * gamma) : 0.0;
  return Model(ExperimentParams(s), PhysicalConstants::nondimensional());
}

void VacuumParams::validate() const {
  require(finite_positive(atom_radius) && finite_positive(number_density) &&
              finite_positive(molecular_mass) && finite_positive(mean_speed) &&
              finite_positive(mean_free_path),
          "vacuum parameters must be strictly positive");
}

DampingEstimate estimate_damping(const VacuumParams& vac, double atom_mass) {
  vac.validate();
  require(finite_positive(atom_mass), "atom mass must be > 0");
  // Stokes drag 6 pi R mu' with the gas viscosity mu' = 0.499 n M v l.
  const double mu = 2.994 * std::numbers::pi * vac.atom_radius * vac.number_density *
                    vac.molecular_mass * vac.mean_speed * vac.mean_free_path;
  return {mu, mu / (2.0 * atom_mass)};
}

double estimate_gamma(const VacuumParams& vac, double atom_mass) {
  return estimate_damping(vac, atom_mass).gamma;
}

namespace {

double number_or(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw InvalidParameter(std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParameter(path.string() + ": " + e.what());
  }
}

}  // namespace

ExperimentParams scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidParameter("scenario config must be a JSON object");
  const ExperimentSpec base;
  ExperimentSpec s;
  s.mass = number_or(j, "mass_kg", base.mass);
  s.g_s = number_or(j, "g_s", base.g_s);
  s.B0 = number_or(j, "B0_T", base.B0);
  s.eta = number_or(j, "eta_T_per_m", base.eta);
  s.sigma = number_or(j, "sigma_m", base.sigma);
  s.temperature = number_or(j, "T_K", base.temperature);
  s.gamma = number_or(j, "gamma_per_s", base.gamma);
  s.spin_a = {number_or(j, "spin_a_re", base.spin_a.real()),
              number_or(j, "spin_a_im", base.spin_a.imag())};
  s.spin_b = {number_or(j, "spin_b_re", base.spin_b.real()),
              number_or(j, "spin_b_im", base.spin_b.imag())};
  return ExperimentParams(s);
}

ExperimentParams load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json(path));
}

nlohmann::json scenario_to_json(const ExperimentParams& p) {
  return {{"mass_kg", p.mass()},           {"g_s", p.g_s()},
          {"B0_T", p.B0()},                {"eta_T_per_m", p.eta()},
          {"sigma_m", p.sigma()},          {"T_K", p.temperature()},
          {"gamma_per_s", p.gamma()},      {"spin_a_re", p.spin_a().real()},
          {"spin_a_im", p.spin_a().imag()}, {"spin_b_re", p.spin_b().real()},
          {"spin_b_im", p.spin_b().imag()}};
}

VacuumScenario vacuum_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidParameter("vacuum config must be a JSON object");
  VacuumScenario out;
  out.vacuum.atom_radius = number_or(j, "atom_radius_m", out.vacuum.atom_radius);
  out.vacuum.number_density = number_or(j, "number_density_per_m3", out.vacuum.number_density);
  out.vacuum.molecular_mass = number_or(j, "molecular_mass_kg", out.vacuum.molecular_mass);
  out.vacuum.mean_speed = number_or(j, "mean_speed_m_per_s", out.vacuum.mean_speed);
  out.vacuum.mean_free_path = number_or(j, "mean_free_path_m", out.vacuum.mean_free_path);
  out.atom_mass = number_or(j, "atom_mass_kg", out.atom_mass);
  out.vacuum.validate();
  return out;
}

VacuumScenario load_vacuum(const std::filesystem::path& path) {
  return vacuum_from_json(read_json(path));
}

}  // namespace sgw
