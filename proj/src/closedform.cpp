#include "sgw/closedform.hpp"

#include <cmath>
#include <numbers>

#include "sgw/errors.hpp"
#include "terms.hpp"

namespace sgw {

using detail::tpow;
using detail::TimeTerms;

double initial_wigner(double z, double p, double sigma, double hbar) {
  const double u = sigma * p / hbar;
  const double v = z / sigma;
  return std::exp(-u * u - v * v) / (std::numbers::pi * hbar);
}

double initial_wigner(const Model& model, double z, double p) {
  return initial_wigner(z, p, model.sigma(), model.hbar());
}

double GaussianForm::operator()(double z, double p) const noexcept { return std::exp(exponent(z, p)); }

double GaussianForm::integral() const noexcept {
  return std::exp(log_norm) * 2.0 * std::numbers::pi / std::sqrt(4.0 * qzz * qpp - qzp * qzp);
}

namespace {

void require_damping(const Model& model) {
  if (model.gamma() == 0.0) throw GammaZero("closed form needs gamma > 0");
}

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameter("time must be finite and >= 0");
}

// F and G divided by gamma^4: F~ = azz z'^2 + azp z'p' + app p'^2.
struct DiagPieces {
  double azz, azp, app, g;
};

DiagPieces diag_pieces(const Model& model, const TimeTerms& tt) {
  const double m = model.mass();
  const double s = model.sigma();
  const double h = model.hbar();
  const double D = model.D();
  const double s2 = s * s;
  DiagPieces d;
  d.azz = 2.0 * D * s2 * m * m * tt.em2 + h * h * m * m * tt.e2;
  d.azp = -4.0 * D * s2 * m * tt.em1 * tt.em1 - 2.0 * h * h * m * tt.e1 * tt.em1;
  d.app = 2.0 * D * s2 * tt.wz + m * m * s2 * s2 + h * h * tt.em1 * tt.em1;
  d.g = 8.0 * D * D * s2 * tt.em1 * tt.gd + 2.0 * D * (m * m * s2 * s2 * tt.em2 + h * h * tt.gq) +
        m * m * s2 * tt.e2 * h * h;
  return d;
}

GaussianForm diag_gauss(const Model& model, const TimeTerms& tt, const DiagPieces& d, Branch branch) {
  const double sgn = sign_of(branch);
  GaussianForm g;
  g.z0 = sgn * model.force() * tt.zc / model.mass();
  g.p0 = sgn * model.force() * tt.em1;
  g.qzz = d.azz / d.g;
  g.qzp = d.azp / d.g;
  g.qpp = d.app / d.g;
  g.log_norm = std::log(model.mass() * model.sigma() / (std::numbers::pi * std::sqrt(d.g)));
  return g;
}

}  // namespace

DiagKernel diag_kernel(const Model& model, double z, double p, double tau, Branch branch) {
  require_damping(model);
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidParameter("tau must be finite and >= 0");
  const double gamma = model.gamma();
  const TimeTerms tt(tau / gamma, gamma);
  const DiagPieces d = diag_pieces(model, tt);
  const double sgn = sign_of(branch);
  const double zp = z - sgn * model.force() * tt.zc / model.mass();
  const double pp = p - sgn * model.force() * tt.em1;
  const double g2 = gamma * gamma;
  const double g4 = g2 * g2;
  return {g4 * (d.azz * zp * zp + d.azp * zp * pp + d.app * pp * pp), g4 * d.g, zp, pp};
}

DiagForm diag_form(const Model& model, double t, Branch branch) {
  require_damping(model);
  require_time(t);
  const TimeTerms tt(t, model.gamma());
  return {diag_gauss(model, tt, diag_pieces(model, tt), branch), branch, t};
}

double w_diag(const Model& model, double z, double p, double t, Branch branch) {
  return diag_form(model, t, branch)(z, p);
}

OffDiagCoeffs offdiag_coeffs(const Model& model, double tau) {
  require_damping(model);
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidParameter("tau must be finite and >= 0");
  const double gamma = model.gamma();
  const double t = tau / gamma;
  const TimeTerms tt(t, gamma);
  const double m = model.mass();
  const double s = model.sigma();
  const double h = model.hbar();
  const double D = model.D();
  const double f = model.force();
  const double s2 = s * s;
  const double h2 = h * h;

  OffDiagCoeffs c;
  c.c1 = f * f *
         (s2 * D * tpow(combos::c1_diffusion(), t, gamma, 5) - 3.0 * m * m * s2 * s2 * t * t -
          3.0 * h2 * tt.zc * tt.zc) /
         (3.0 * m * m * s2 * h2);
  c.c2 = f * (h2 * tpow(combos::c2_quantum(), t, gamma, 2) - 2.0 * D * s2 * tpow(combos::c2_diffusion(), t, gamma, 3)) /
         (h2 * m * s2);
  c.c3 = (s2 * D * tpow(combos::c3_diffusion(), t, gamma, 3) - m * m * s2 * s2 - h2 * tt.em1 * tt.em1) /
         (4.0 * m * m * s2);
  c.c4 = f * (-h2 * tt.em1 * tt.zc - 2.0 * D * s2 * tt.zc * tt.zc - m * m * s2 * s2 * t) / (m * m * s2 * h);
  c.c5 = -tt.em1 * (tt.e1 * h2 + 2.0 * D * s2 * tt.em1) / (2.0 * m * s2 * h);
  c.c6 = (tt.e2 * h2 + 2.0 * D * s2 * tt.em2) / (4.0 * s2 * h2);
  return c;
}

OffDiagForm offdiag_form(const Model& model, double t) {
  require_damping(model);
  require_time(t);
  const double gamma = model.gamma();
  const TimeTerms tt(t, gamma);
  const DiagPieces d = diag_pieces(model, tt);
  if (!(d.g > 0.0) || !std::isfinite(d.g)) throw DegenerateQuadratic("4 C3 C6 - C5^2 vanishes");

  const double m = model.mass();
  const double s = model.sigma();
  const double h = model.hbar();
  const double D = model.D();
  const double f = model.force();
  const double s2 = s * s;
  const double h2 = h * h;

  OffDiagForm o;
  o.t = t;
  // Every bracket below is a sum of same-signed terms, so none of them cancels.
  const double decay = -D * h2 * m * m * s2 * tpow(combos::coh_d1(), t, gamma, 5) +
                       2.0 * D * D *
                           (m * m * s2 * s2 * tpow(combos::coh_d2a(), t, gamma, 6) +
                            h2 * tpow(combos::coh_d2b(), t, gamma, 8)) +
                       4.0 * D * D * D * s2 * t * tt.gd * tpow(combos::coh_d3(), t, gamma, 5);
  o.log_delta = 2.0 * f * f * decay / (3.0 * h2 * m * m * d.g);

  const double kp_sum = 4.0 * D * D * s2 * tt.gd * tt.gd +
                        2.0 * D * m * m * s2 * s2 * tpow(combos::kp_diffusion(), t, gamma, 3) +
                        D * h2 * tpow(combos::kp_mixed(), t, gamma, 5) +
                        h2 * m * m * s2 * tpow(combos::kp_quantum(), t, gamma, 2);
  o.k_p = -2.0 * f * kp_sum / (h * m * d.g);

  const double kz_sum = 4.0 * D * D * s2 * t * tt.em1 * tt.gd + 2.0 * D * m * m * s2 * s2 * t * tt.em2 -
                        D * h2 * tpow(combos::kz_mixed(), t, gamma, 4) + h2 * m * m * s2 * tt.e2 * t;
  o.k_z = 2.0 * f * kz_sum / (h * d.g);

  o.phase0 = 2.0 * model.params().B0() * model.lambda() * t / h;

  o.modulus = diag_gauss(model, tt, d, Branch::plus);
  o.modulus.z0 = 0.0;
  o.modulus.p0 = 0.0;
  o.modulus.log_norm += o.log_delta;
  return o;
}

std::complex<double> w_offdiag(const Model& model, double z, double p, double t) {
  return offdiag_form(model, t)(z, p);
}

double log_abs_offdiag(const Model& model, double z, double p, double t) {
  return offdiag_form(model, t).modulus.exponent(z, p);
}

WignerMatrixSample MatrixForm::operator()(double z, double p) const {
  return {std::norm(a) * plus(z, p), std::norm(b) * minus(z, p), a * std::conj(b) * off(z, p)};
}

MatrixForm matrix_form(const Model& model, double t) {
  return {diag_form(model, t, Branch::plus), diag_form(model, t, Branch::minus), offdiag_form(model, t),
          model.params().spin_a(), model.params().spin_b()};
}

WignerMatrixSample wigner_matrix(const Model& model, double z, double p, double t) {
  return matrix_form(model, t)(z, p);
}

}  // namespace sgw
