#pragma once

#include <complex>

#include "sgw/marginals.hpp"
#include "sgw/params.hpp"

namespace sgw {

/// exp(-sigma^2 p^2 / hbar^2 - z^2 / sigma^2) / (pi hbar)
double initial_wigner(double z, double p, double sigma, double hbar);
double initial_wigner(const Model& model, double z, double p);

/// Numerator and denominator of the diagonal exponent, W = gamma^2 m sigma / (pi sqrt(G)) e^(-F/G).
struct DiagKernel {
  double F;
  double G;
  double z_prime;  // z -/+ z_c
  double p_prime;  // p -/+ p_c
};

/// tau = gamma t. Throws GammaZero when gamma == 0.
DiagKernel diag_kernel(const Model& model, double z, double p, double tau, Branch branch);

/// Positive Gaussian exp(log_norm - Q(z - z0, p - p0)) with
/// Q(dz, dp) = qzz dz^2 + qzp dz dp + qpp dp^2.
struct GaussianForm {
  double z0 = 0.0;
  double p0 = 0.0;
  double qzz = 0.0;
  double qzp = 0.0;
  double qpp = 0.0;
  double log_norm = 0.0;

  double exponent(double z, double p) const noexcept {
    const double dz = z - z0;
    const double dp = p - p0;
    return log_norm - (qzz * dz * dz + qzp * dz * dp + qpp * dp * dp);
  }
  double operator()(double z, double p) const noexcept;
  /// Integral over the plane, exp(log_norm) * 2 pi / sqrt(4 qzz qpp - qzp^2).
  double integral() const noexcept;
};

/// Diagonal component at one time; cheap to evaluate at many points.
struct DiagForm {
  GaussianForm gauss;
  Branch branch;
  double t;

  double operator()(double z, double p) const noexcept { return gauss(z, p); }
};

DiagForm diag_form(const Model& model, double t, Branch branch);
double w_diag(const Model& model, double z, double p, double t, Branch branch);

/// Auxiliary coefficients of the off-diagonal solution. With the characteristic
/// function chi(k, s) = exp(c1 + c2 s + c3 k^2 + c4 k + c5 k s - c6 s^2).
struct OffDiagCoeffs {
  double c1, c2, c3, c4, c5, c6;

  /// -4 c3 c6 - c5^2; strictly positive for a normalizable solution.
  double K() const noexcept { return -4.0 * c3 * c6 - c5 * c5; }
};

OffDiagCoeffs offdiag_coeffs(const Model& model, double tau);

/// Off-diagonal component at one time. The modulus is a centered Gaussian with
/// the same covariance as the diagonal components and total mass exp(log_delta);
/// the phase is linear in (z, p).
struct OffDiagForm {
  GaussianForm modulus;
  double log_delta = 0.0;
  double phase0 = 0.0;  // 2 B0 lambda t / hbar
  double k_z = 0.0;     // phase gradient along z
  double k_p = 0.0;     // phase gradient along p
  double t = 0.0;

  double phase(double z, double p) const noexcept { return phase0 + k_z * z + k_p * p; }
  std::complex<double> operator()(double z, double p) const {
    return std::polar(modulus(z, p), phase(z, p));
  }
};

OffDiagForm offdiag_form(const Model& model, double t);
std::complex<double> w_offdiag(const Model& model, double z, double p, double t);

/// Natural log of |W_od| at a point; finite where the modulus underflows.
double log_abs_offdiag(const Model& model, double z, double p, double t);

/// One phase-space point of the 2x2 matrix. The lower-left entry is the
/// conjugate of w_pm by construction.
struct WignerMatrixSample {
  double w_pp;
  double w_mm;
  std::complex<double> w_pm;

  std::complex<double> w_mp() const noexcept { return std::conj(w_pm); }
  double trace() const noexcept { return w_pp + w_mm; }
};

WignerMatrixSample wigner_matrix(const Model& model, double z, double p, double t);

/// All three components at one time, sharing the per-time setup.
struct MatrixForm {
  DiagForm plus;
  DiagForm minus;
  OffDiagForm off;
  std::complex<double> a;
  std::complex<double> b;

  WignerMatrixSample operator()(double z, double p) const;
};

MatrixForm matrix_form(const Model& model, double t);

}  // namespace sgw
