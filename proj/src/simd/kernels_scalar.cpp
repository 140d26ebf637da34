#include <bit>
#include <cmath>

#include "exp_common.hpp"
#include "sgw/simd/kernels.hpp"

namespace sgw::simd {

namespace {

double pow2(double k) {
  return std::bit_cast<double>((static_cast<long long>(k) + 1023) << 52);
}

double abs_of(double x) { return std::bit_cast<double>(std::bit_cast<unsigned long long>(x) & 0x7fffffffffffffffULL); }

void exp_quadratic_row(double* out, std::size_t n, double d0, double dd, double a, double b, double c,
                       bool accumulate) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = d0 + static_cast<double>(i) * dd;
    const double v = reference_exp(a + d * (b + c * d));
    out[i] = (accumulate ? out[i] : 0.0) + v;
  }
}

void face_flux(const double* qa, const double* qb, const double* qc, double* out, std::size_t n, double vel,
               double courant, FluxScheme scheme) {
  if (scheme == FluxScheme::upwind1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = vel * qb[i];
    return;
  }
  const double half_c = 0.5 * (1.0 - abs_of(courant));
  for (std::size_t i = 0; i < n; ++i) {
    const double dl = qb[i] - qa[i];
    const double dr = qc[i] - qb[i];
    const double num = dl * abs_of(dr) + abs_of(dl) * dr;
    const double den = abs_of(dl) + abs_of(dr);
    const double s = den > 0.0 ? num / den : 0.0;
    out[i] = vel * (qb[i] + half_c * s);
  }
}

void flux_difference(double* q, const double* left, const double* right, std::size_t n, double lam) {
  for (std::size_t i = 0; i < n; ++i) q[i] -= lam * (right[i] - left[i]);
}

void cn_rhs(const double* qm, const double* q0, const double* qp, double* out, std::size_t n, double half_r) {
  for (std::size_t i = 0; i < n; ++i) out[i] = q0[i] + half_r * ((qm[i] + qp[i]) - 2.0 * q0[i]);
}

void thomas_forward(const double* rhs, const double* prev, double* out, std::size_t n, double alpha,
                    double inv) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (rhs[i] + alpha * prev[i]) * inv;
}

void thomas_backward(const double* d, const double* next, double* out, std::size_t n, double cp) {
  for (std::size_t i = 0; i < n; ++i) out[i] = d[i] - cp * next[i];
}

void phase_rotate(double* re, double* im, const double* cs, const double* sn, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = re[i] * cs[i] - im[i] * sn[i];
    const double m = re[i] * sn[i] + im[i] * cs[i];
    re[i] = r;
    im[i] = m;
  }
}

}  // namespace

double reference_exp(double x) noexcept {
  using namespace expk;
  double xc = x < kMaxArg ? x : kMaxArg;
  xc = xc > kMinArg ? xc : kMinArg;
  const double kd = (xc * kLog2e + kShifter) - kShifter;
  const double k1 = std::floor(kd * 0.5);
  const double k2 = kd - k1;
  const double r = (xc - kd * kLn2Hi) - kd * kLn2Lo;
  double p = kCoeff[0];
  for (int i = 1; i < 12; ++i) p = p * r + kCoeff[i];
  p = p * r + 1.0;
  p = p * r + 1.0;
  double y = (p * pow2(k1)) * pow2(k2);
  if (x < kMinArg) y = 0.0;
  if (x > kMaxArg) y = HUGE_VAL;
  if (x != x) y = x;
  return y;
}

extern const Kernels kScalarKernels = {
    Isa::scalar,    exp_quadratic_row, face_flux,       flux_difference,
    cn_rhs,         thomas_forward,    thomas_backward, phase_rotate,
};

}  // namespace sgw::simd
