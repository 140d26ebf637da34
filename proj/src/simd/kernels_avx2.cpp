#include <immintrin.h>

#include <cmath>

#include "exp_common.hpp"
#include "sgw/simd/kernels.hpp"

namespace sgw::simd {

namespace {

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline __m256d vpow2(__m256d k) {
  // k is integral; recover it as int64 through the shifter and build the exponent field.
  const __m256i bits = _mm256_castpd_si256(_mm256_add_pd(k, _mm256_set1_pd(expk::kShifter)));
  const __m256i ki = _mm256_sub_epi64(bits, _mm256_set1_epi64x(expk::kShifterBits));
  return _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(ki, _mm256_set1_epi64x(1023)), 52));
}

inline __m256d vexp(__m256d x) {
  using namespace expk;
  __m256d xc = _mm256_min_pd(x, _mm256_set1_pd(kMaxArg));
  xc = _mm256_max_pd(xc, _mm256_set1_pd(kMinArg));
  const __m256d shifter = _mm256_set1_pd(kShifter);
  const __m256d kd = _mm256_sub_pd(_mm256_add_pd(_mm256_mul_pd(xc, _mm256_set1_pd(kLog2e)), shifter), shifter);
  const __m256d k1 = _mm256_floor_pd(_mm256_mul_pd(kd, _mm256_set1_pd(0.5)));
  const __m256d k2 = _mm256_sub_pd(kd, k1);
  const __m256d r = _mm256_sub_pd(_mm256_sub_pd(xc, _mm256_mul_pd(kd, _mm256_set1_pd(kLn2Hi))),
                                  _mm256_mul_pd(kd, _mm256_set1_pd(kLn2Lo)));
  __m256d p = _mm256_set1_pd(kCoeff[0]);
  for (int i = 1; i < 12; ++i) p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(kCoeff[i]));
  const __m256d one = _mm256_set1_pd(1.0);
  p = _mm256_add_pd(_mm256_mul_pd(p, r), one);
  p = _mm256_add_pd(_mm256_mul_pd(p, r), one);
  __m256d y = _mm256_mul_pd(_mm256_mul_pd(p, vpow2(k1)), vpow2(k2));
  y = _mm256_blendv_pd(y, _mm256_setzero_pd(), _mm256_cmp_pd(x, _mm256_set1_pd(kMinArg), _CMP_LT_OQ));
  y = _mm256_blendv_pd(y, _mm256_set1_pd(HUGE_VAL), _mm256_cmp_pd(x, _mm256_set1_pd(kMaxArg), _CMP_GT_OQ));
  y = _mm256_blendv_pd(y, x, _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
  return y;
}

void exp_quadratic_row(double* out, std::size_t n, double d0, double dd, double a, double b, double c,
                       bool accumulate) {
  const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b), vc = _mm256_set1_pd(c);
  const __m256d vd0 = _mm256_set1_pd(d0), vdd = _mm256_set1_pd(dd);
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_add_pd(vd0, _mm256_mul_pd(idx, vdd));
    const __m256d e = _mm256_add_pd(va, _mm256_mul_pd(d, _mm256_add_pd(vb, _mm256_mul_pd(vc, d))));
    __m256d v = vexp(e);
    if (accumulate) v = _mm256_add_pd(_mm256_loadu_pd(out + i), v);
    _mm256_storeu_pd(out + i, v);
    idx = _mm256_add_pd(idx, four);
  }
  for (; i < n; ++i) {
    const double d = d0 + static_cast<double>(i) * dd;
    const double v = reference_exp(a + d * (b + c * d));
    out[i] = (accumulate ? out[i] : 0.0) + v;
  }
}

void face_flux(const double* qa, const double* qb, const double* qc, double* out, std::size_t n, double vel,
               double courant, FluxScheme scheme) {
  const __m256d vv = _mm256_set1_pd(vel);
  std::size_t i = 0;
  if (scheme == FluxScheme::upwind1) {
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(vv, _mm256_loadu_pd(qb + i)));
    for (; i < n; ++i) out[i] = vel * qb[i];
    return;
  }
  const double half_c = 0.5 * (1.0 - std::fabs(courant));
  const __m256d vh = _mm256_set1_pd(half_c);
  const __m256d zero = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(qa + i), b = _mm256_loadu_pd(qb + i), c = _mm256_loadu_pd(qc + i);
    const __m256d dl = _mm256_sub_pd(b, a);
    const __m256d dr = _mm256_sub_pd(c, b);
    const __m256d num = _mm256_add_pd(_mm256_mul_pd(dl, vabs(dr)), _mm256_mul_pd(vabs(dl), dr));
    const __m256d den = _mm256_add_pd(vabs(dl), vabs(dr));
    const __m256d s = _mm256_blendv_pd(zero, _mm256_div_pd(num, den), _mm256_cmp_pd(den, zero, _CMP_GT_OQ));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vv, _mm256_add_pd(b, _mm256_mul_pd(vh, s))));
  }
  for (; i < n; ++i) {
    const double dl = qb[i] - qa[i];
    const double dr = qc[i] - qb[i];
    const double num = dl * std::fabs(dr) + std::fabs(dl) * dr;
    const double den = std::fabs(dl) + std::fabs(dr);
    const double s = den > 0.0 ? num / den : 0.0;
    out[i] = vel * (qb[i] + half_c * s);
  }
}

void flux_difference(double* q, const double* left, const double* right, std::size_t n, double lam) {
  const __m256d vl = _mm256_set1_pd(lam);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(right + i), _mm256_loadu_pd(left + i));
    _mm256_storeu_pd(q + i, _mm256_sub_pd(_mm256_loadu_pd(q + i), _mm256_mul_pd(vl, d)));
  }
  for (; i < n; ++i) q[i] -= lam * (right[i] - left[i]);
}

void cn_rhs(const double* qm, const double* q0, const double* qp, double* out, std::size_t n, double half_r) {
  const __m256d vh = _mm256_set1_pd(half_r), two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = _mm256_loadu_pd(q0 + i);
    const __m256d lap = _mm256_sub_pd(_mm256_add_pd(_mm256_loadu_pd(qm + i), _mm256_loadu_pd(qp + i)),
                                      _mm256_mul_pd(two, c));
    _mm256_storeu_pd(out + i, _mm256_add_pd(c, _mm256_mul_pd(vh, lap)));
  }
  for (; i < n; ++i) out[i] = q0[i] + half_r * ((qm[i] + qp[i]) - 2.0 * q0[i]);
}

void thomas_forward(const double* rhs, const double* prev, double* out, std::size_t n, double alpha,
                    double inv) {
  const __m256d va = _mm256_set1_pd(alpha), vi = _mm256_set1_pd(inv);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_add_pd(_mm256_loadu_pd(rhs + i), _mm256_mul_pd(va, _mm256_loadu_pd(prev + i)));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(s, vi));
  }
  for (; i < n; ++i) out[i] = (rhs[i] + alpha * prev[i]) * inv;
}

void thomas_backward(const double* d, const double* next, double* out, std::size_t n, double cp) {
  const __m256d vc = _mm256_set1_pd(cp);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(d + i), _mm256_mul_pd(vc, _mm256_loadu_pd(next + i))));
  for (; i < n; ++i) out[i] = d[i] - cp * next[i];
}

void phase_rotate(double* re, double* im, const double* cs, const double* sn, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(re + i), m = _mm256_loadu_pd(im + i);
    const __m256d c = _mm256_loadu_pd(cs + i), s = _mm256_loadu_pd(sn + i);
    _mm256_storeu_pd(re + i, _mm256_sub_pd(_mm256_mul_pd(r, c), _mm256_mul_pd(m, s)));
    _mm256_storeu_pd(im + i, _mm256_add_pd(_mm256_mul_pd(r, s), _mm256_mul_pd(m, c)));
  }
  for (; i < n; ++i) {
    const double r = re[i] * cs[i] - im[i] * sn[i];
    const double m = re[i] * sn[i] + im[i] * cs[i];
    re[i] = r;
    im[i] = m;
  }
}

}  // namespace

extern const Kernels kAvx2Kernels = {
    Isa::avx2,      exp_quadratic_row, face_flux,       flux_difference,
    cn_rhs,         thomas_forward,    thomas_backward, phase_rotate,
};

}  // namespace sgw::simd
