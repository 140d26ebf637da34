#pragma once

#include <cstdint>
#include <vector>

#include "sgw/grid.hpp"
#include "sgw/marginals.hpp"
#include "sgw/params.hpp"
#include "sgw/simd/kernels.hpp"

namespace sgw {

/// Which equation a solver integrates.
enum class Component { diag_plus, diag_minus, offdiag };

struct PdeConfig {
  PhaseSpaceGrid grid;
  double dt = 1e-3;
  simd::FluxScheme scheme = simd::FluxScheme::van_leer;
  /// Crank-Nicolson in p when true, forward Euler (D dt <= 0.45 dp^2) otherwise.
  bool implicit_diffusion = true;
  /// Zero-value margin around the solution centers, in standard deviations of
  /// the widest marginal over [0, t_end].
  double boundary_sigmas = 8.0;
  std::size_t audit_every = 10;
  /// Cells per edge that count as boundary for the leak monitor.
  std::size_t leak_band = 4;
  double leak_tolerance = 1e-6;
};

/// Grid covering the closed-form support at t = 0 and t_end plus the
/// boundary margin, with n x n nodes, and the largest stable dt (scaled by
/// `safety`) that divides t_end evenly.
PdeConfig oracle_config(const Model& model, Component comp, double t_end, std::uint32_t n, double safety = 0.9);

/// Field on the grid stored by rows of constant p with two zero ghost cells
/// on every side. Off-diagonal fields carry an imaginary part.
class PdeField {
 public:
  PdeField(const PhaseSpaceGrid& grid, bool complex);

  static PdeField initial(const PhaseSpaceGrid& grid, const Model& model, bool complex);

  const PhaseSpaceGrid& grid() const noexcept { return grid_; }
  bool is_complex() const noexcept { return !im_.empty(); }
  std::size_t stride() const noexcept { return stride_; }

  /// Row j (-2 <= j < n_p + 2) of the real / imaginary part, pointing at z index 0.
  double* re_row(long j) noexcept { return re_.data() + (j + 2) * stride_ + 2; }
  double* im_row(long j) noexcept { return im_.data() + (j + 2) * stride_ + 2; }
  const double* re_row(long j) const noexcept { return re_.data() + (j + 2) * stride_ + 2; }
  const double* im_row(long j) const noexcept { return im_.data() + (j + 2) * stride_ + 2; }

  double re(std::size_t i_z, std::size_t j_p) const noexcept { return re_row(static_cast<long>(j_p))[i_z]; }
  double im(std::size_t i_z, std::size_t j_p) const noexcept {
    return is_complex() ? im_row(static_cast<long>(j_p))[i_z] : 0.0;
  }
  double abs(std::size_t i_z, std::size_t j_p) const noexcept;

  /// Sum of the real part times dz dp, and of the modulus times dz dp.
  double mass() const noexcept;
  double abs_mass() const noexcept;
  /// Modulus mass in the outer `band` cells of each edge.
  double boundary_mass(std::size_t band) const noexcept;
  bool all_finite() const noexcept;

  /// Copy to the export layout.
  WignerField to_field(FieldKind kind, double t) const;

  void conjugate() noexcept;
  bool operator==(const PdeField& other) const = default;

 private:
  PhaseSpaceGrid grid_;
  std::size_t stride_;
  std::vector<double> re_, im_;
};

struct AuditRecord {
  std::size_t step;
  double t;
  double mass;
  double abs_mass;
  double boundary_mass;
};

struct EvolveReport {
  std::size_t steps = 0;
  double t = 0.0;
  double initial_mass = 0.0;
  double max_mass_drift = 0.0;  // relative to the initial mass
  double max_leak = 0.0;        // boundary mass relative to the initial modulus mass
  std::vector<AuditRecord> audits;
};

/// Split-step integrator for one component. Each step is
/// Az(dt/2) Ap(dt/2) [Dp(dt) R(dt)] Ap(dt/2) Az(dt/2): conservative
/// flux-form advection in z with velocity p/m and in p with velocity
/// +-F - gamma p (diagonal) or -gamma p (off-diagonal), diffusion D d2/dp2,
/// and for the off-diagonal part the exact rotation by
/// exp(i s 2 (lambda B0 + F z) dt / hbar), s = phase_sign.
class PdeSolver {
 public:
  PdeSolver(const Model& model, PdeConfig config, Component comp, int phase_sign = +1,
            const simd::Kernels& kernels = simd::kernels());

  const PdeConfig& config() const noexcept { return cfg_; }

  /// Throws CflViolation, PhaseUnderResolved or InvalidParameter.
  void check_stability(double dt) const;

  /// One step; throws NonFiniteField if any node is no longer finite.
  void step(PdeField& field, double dt);

  /// Steps of config().dt (the last one shortened) up to t_end, auditing every
  /// audit_every steps and at the end. Throws BoundaryLeak when the boundary
  /// band holds more than leak_tolerance of the initial mass.
  EvolveReport evolve(PdeField& field, double t_end);

 private:
  void advect_z(PdeField& f, double dt, bool imag);
  void advect_p(PdeField& f, double dt, bool imag);
  void diffuse_p(PdeField& f, double dt, bool imag);
  void rotate(PdeField& f, double dt);
  double* row_of(PdeField& f, long j, bool imag) { return imag ? f.im_row(j) : f.re_row(j); }

  Model model_;
  PdeConfig cfg_;
  Component comp_;
  int phase_sign_;
  const simd::Kernels& k_;
  std::vector<double> flux_, rhs_, dbuf_, cs_, sn_;
  double rot_dt_ = -1.0;
};

/// Single steps with fresh solvers; convenient but slower than a reused PdeSolver.
void step_diag(PdeField& field, Branch branch, const Model& model, const PdeConfig& config, double dt);
void step_offdiag(PdeField& field, const Model& model, const PdeConfig& config, double dt);

struct OracleResult {
  Component comp;
  std::uint32_t n;
  double t_end;
  double l2_error;  // relative, against the closed form on the grid nodes
  double seconds;
  EvolveReport report;
};

/// Evolves the initial Gaussian to t_end on an n x n oracle grid and compares
/// with the closed form (the diagonal component, or the modulus of the
/// off-diagonal one).
OracleResult oracle_compare(const Model& model, Component comp, double t_end, std::uint32_t n,
                            simd::FluxScheme scheme = simd::FluxScheme::van_leer);

/// Relative L2 distance between a numerical field and closed-form values on its nodes.
double relative_l2(const PdeField& field, const Model& model, Component comp, double t);

std::string_view to_string(Component comp);

}  // namespace sgw
