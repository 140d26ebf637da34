#pragma once

#include <cstddef>
#include <string_view>

namespace sgw::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Advection face reconstruction.
enum class FluxScheme { upwind1, van_leer };

// Row kernels over n contiguous doubles. All variants perform the same
// floating-point operations in the same order (no contraction into FMA), so
// results are bit-identical across instruction sets.
struct Kernels {
  Isa isa;

  /// out[i] = (accumulate ? out[i] : 0) + exp(a + d * (b + c * d)), d = d0 + i * dd.
  void (*exp_quadratic_row)(double* out, std::size_t n, double d0, double dd, double a, double b,
                            double c, bool accumulate);

  /// Face flux from the upstream-far (qa), upwind (qb) and downwind (qc) cells:
  /// out = vel * (qb + (1 - |courant|) / 2 * vanleer(qb - qa, qc - qb)),
  /// or vel * qb for the first-order scheme. Choosing which neighbour plays
  /// qa / qc by the sign of vel covers both directions.
  void (*face_flux)(const double* qa, const double* qb, const double* qc, double* out, std::size_t n,
                    double vel, double courant, FluxScheme scheme);

  /// q[i] -= lam * (right[i] - left[i])
  void (*flux_difference)(double* q, const double* left, const double* right, std::size_t n, double lam);

  /// out = q0 + half_r * ((qm + qp) - 2 q0)
  void (*cn_rhs)(const double* qm, const double* q0, const double* qp, double* out, std::size_t n,
                 double half_r);

  /// Thomas forward sweep row: out = (rhs + alpha * prev) * inv
  void (*thomas_forward)(const double* rhs, const double* prev, double* out, std::size_t n, double alpha,
                         double inv);

  /// Thomas back substitution row: out = d - cp * next
  void (*thomas_backward)(const double* d, const double* next, double* out, std::size_t n, double cp);

  /// (re, im) <- (re, im) * (cs + i sn), elementwise.
  void (*phase_rotate)(double* re, double* im, const double* cs, const double* sn, std::size_t n);
};

bool isa_available(Isa isa) noexcept;

/// Table for a specific instruction set; throws InvalidParameter if it is not
/// built in or not supported by this CPU.
const Kernels& kernels_for(Isa isa);

/// The widest available table. SGW_SIMD=scalar|avx2 in the environment
/// overrides the choice (an unavailable request falls back to scalar).
const Kernels& kernels();

/// Scalar exp sharing the vector kernels' algorithm (for tests).
double reference_exp(double x) noexcept;

}  // namespace sgw::simd
