#pragma once

#include <complex>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace sgw {

struct PhysicalConstants {
  double hbar = 1.054571817e-34;  // J s
  double k_B = 1.380649e-23;      // J/K
  double mu_B = 9.2740100783e-24; // J/T

  static PhysicalConstants codata() { return {}; }
  /// hbar = k_B = mu_B = 1, for runs in reduced units.
  static PhysicalConstants nondimensional() { return {1.0, 1.0, 1.0}; }

  void validate() const;
};

/// Plain bag of inputs; `ExperimentParams` validates it.
struct ExperimentSpec {
  double mass = 1.8e-25;      // kg
  double g_s = 2.0;
  double B0 = 5.0;            // T
  double eta = 1000.0;        // T/m
  double sigma = 1e-5;        // m
  double temperature = 300.0; // K
  double gamma = 1.0;         // 1/s
  std::complex<double> spin_a{M_SQRT1_2, 0.0};
  std::complex<double> spin_b{M_SQRT1_2, 0.0};
};

/// Validated, immutable experiment description. Spin amplitudes are
/// normalized on construction.
class ExperimentParams {
 public:
  explicit ExperimentParams(const ExperimentSpec& spec);

  /// Silver atoms in the |S_x = +hbar/2> state through a 5 T, 1000 T/m magnet at 300 K.
  static ExperimentParams silver_sg(double gamma = 1.0);

  double mass() const noexcept { return s_.mass; }
  double g_s() const noexcept { return s_.g_s; }
  double B0() const noexcept { return s_.B0; }
  double eta() const noexcept { return s_.eta; }
  double sigma() const noexcept { return s_.sigma; }
  double temperature() const noexcept { return s_.temperature; }
  double gamma() const noexcept { return s_.gamma; }
  std::complex<double> spin_a() const noexcept { return s_.spin_a; }
  std::complex<double> spin_b() const noexcept { return s_.spin_b; }
  const ExperimentSpec& spec() const noexcept { return s_; }

  ExperimentParams with_gamma(double gamma) const;
  ExperimentParams with_B0(double B0) const;
  ExperimentParams with_temperature(double temperature) const;
  ExperimentParams with_spin(std::complex<double> a, std::complex<double> b) const;

 private:
  ExperimentSpec s_;
};

struct DerivedParams {
  double lambda;  // g_s mu_B / 2, J/T
  double D;       // 2 m gamma k_B T, kg^2 m^2 / s^3
};

DerivedParams derive(const ExperimentParams& params, const PhysicalConstants& consts);

/// Dimensionless time gamma * t.
double tau(double t, double gamma);

/// Beam speed and tube length of the silver preset; only used for the default horizon.
inline constexpr double kSilverBeamSpeed = 500.0;  // m/s
inline constexpr double kSilverTubeLength = 0.2;   // m
inline constexpr double kSilverFlightTime = kSilverTubeLength / kSilverBeamSpeed;

/// Parameters + constants + derived quantities; what every evaluator consumes.
class Model {
 public:
  explicit Model(ExperimentParams params,
                 PhysicalConstants consts = PhysicalConstants::codata());

  /// Reduced-unit model with hbar = m = sigma = k_B = mu_B = 1 and g_s = 2, so
  /// lambda = 1 and eta equals the force. The temperature is chosen to give `D`.
  static Model nondimensional(double gamma, double D, double force, double B0 = 0.0);

  const ExperimentParams& params() const noexcept { return p_; }
  const PhysicalConstants& consts() const noexcept { return c_; }
  const DerivedParams& derived() const noexcept { return d_; }

  double hbar() const noexcept { return c_.hbar; }
  double mass() const noexcept { return p_.mass(); }
  double sigma() const noexcept { return p_.sigma(); }
  double gamma() const noexcept { return p_.gamma(); }
  double lambda() const noexcept { return d_.lambda; }
  double D() const noexcept { return d_.D; }
  /// Spin-dependent force magnitude eta * lambda.
  double force() const noexcept { return p_.eta() * d_.lambda; }

  Model with_params(ExperimentParams params) const { return Model(std::move(params), c_); }
  Model with_gamma(double gamma) const { return with_params(p_.with_gamma(gamma)); }

 private:
  ExperimentParams p_;
  PhysicalConstants c_;
  DerivedParams d_;
};

struct VacuumParams {
  double atom_radius = 144e-12;      // m
  double number_density = 1e16;      // 1/m^3 (1e10 cm^-3)
  double molecular_mass = 4.65e-26;  // kg (N2)
  double mean_speed = 500.0;         // m/s
  double mean_free_path = 100.0;     // m (1e4 cm)

  void validate() const;
};

struct DampingEstimate {
  double viscosity;  // mu, kg/s
  double gamma;      // 1/s
};

/// Kinetic-theory viscosity of the residual gas and the damping rate mu / 2m.
DampingEstimate estimate_damping(const VacuumParams& vac, double atom_mass);
double estimate_gamma(const VacuumParams& vac, double atom_mass);

// Scenario files: flat JSON objects with SI keys; missing keys keep the silver preset.
ExperimentParams scenario_from_json(const nlohmann::json& j);
ExperimentParams load_scenario(const std::filesystem::path& path);
nlohmann::json scenario_to_json(const ExperimentParams& params);

struct VacuumScenario {
  VacuumParams vacuum;
  double atom_mass = 1.8e-25;
};
VacuumScenario vacuum_from_json(const nlohmann::json& j);
VacuumScenario load_vacuum(const std::filesystem::path& path);

}  // namespace sgw
