#pragma once

#include <string_view>
#include <vector>

#include "sgw/params.hpp"

namespace sgw {

/// Spin branch: plus is the W++ component (upper signs), minus is W--.
enum class Branch { plus, minus };

constexpr double sign_of(Branch b) noexcept { return b == Branch::plus ? 1.0 : -1.0; }

/// Centers and widths of one diagonal Gaussian. Centers carry the branch sign.
/// Widths follow the exp(-x^2 / sigma^2) convention of the initial state.
struct GaussianMoments {
  double z_c;
  double p_c;
  double sigma_z;
  double sigma_p;
  Branch branch;
};

/// Valid for every gamma >= 0, including the undamped limit.
GaussianMoments moments(const Model& model, double t, Branch branch = Branch::plus);

double position_pdf(const Model& model, double z, double t, Branch branch);
double momentum_pdf(const Model& model, double p, double t, Branch branch);

/// Asymptotic momentum width sqrt(2D / gamma) = sqrt(4 m k_B T).
double sigma_p_infinity(const Model& model);

/// 2 D sigma^2 / (gamma hbar^2), which does not depend on gamma.
double diffusion_ratio(const Model& model);

struct CenterSample {
  double t;
  double z_c;
  double p_c;
};

/// RK4 on dz/dt = p/m, dp/dt = eta*lambda - gamma*p from rest. The last sample
/// lands exactly on t_end (the final step is shortened if needed).
/// Throws StepTooLarge when gamma * dt > 0.1.
std::vector<CenterSample> classical_centers_ode(const Model& model, double t_end, double dt);

enum class Regime { small_tau, crossover, large_tau };
std::string_view to_string(Regime r);

struct Approximation {
  double z_c;
  double sigma_z;
  double p_c;
  double sigma_p;
};

struct RegimeReport {
  Regime regime;
  double tau;
  Approximation small_tau;  // gamma t << 1 expansions
  Approximation large_tau;  // gamma t >> 1 limits
  /// The expansion matching the regime; crossover picks the nearer side.
  const Approximation& approx() const noexcept {
    if (regime == Regime::large_tau || (regime == Regime::crossover && tau > 1.0)) return large_tau;
    return small_tau;
  }
};

inline constexpr double kSmallTau = 0.01;
inline constexpr double kLargeTau = 100.0;

RegimeReport regime(const Model& model, double t);

}  // namespace sgw
