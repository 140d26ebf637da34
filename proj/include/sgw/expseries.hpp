#pragma once

#include <array>
#include <initializer_list>
#include <vector>

namespace sgw {

/// One term poly(tau) * exp(-rate * tau) with small integer coefficients.
struct ExpTerm {
  int rate;                      // 0, 1 or 2 in practice
  std::array<long long, 5> poly; // poly[i] multiplies tau^i
};

/// Sum of polynomial-times-exponential terms in tau.
///
/// Most combinations that appear in the Wigner solution vanish to high order
/// at tau = 0 (e.g. 2 tau + 4 e^-tau - e^-2tau - 3 = 2/3 tau^3 + ...), so
/// evaluating them literally loses every significant digit when tau is small.
/// Below `kSeriesLimit` the value comes from the Taylor expansion, whose
/// coefficients are formed from exact integer numerators (leading orders that
/// cancel are exactly zero); above it the literal expression is used.
///
/// `scaled(tau, k)` returns f(tau) / tau^k and stays finite at tau = 0 as long
/// as k does not exceed the leading order. The solution is written in terms of
/// these ratios so that no negative power of gamma ever appears.
class ExpPoly {
 public:
  static constexpr double kSeriesLimit = 1.0;
  static constexpr int kTerms = 48;

  ExpPoly(std::initializer_list<ExpTerm> terms);

  double operator()(double tau) const { return scaled(tau, 0); }
  double scaled(double tau, int k) const;

  /// Literal evaluation (no series), for tests and large tau.
  double direct(double tau) const;

  /// Index of the first nonzero Taylor coefficient.
  int leading_order() const noexcept { return leading_; }
  double coefficient(int n) const { return coeffs_.at(static_cast<std::size_t>(n)); }

 private:
  std::vector<ExpTerm> terms_;
  std::vector<double> coeffs_;
  int leading_ = kTerms;
};

/// The tau-combinations shared by the diagonal, off-diagonal and marginal formulas.
namespace combos {

const ExpPoly& one_minus_exp();      // 1 - e^-tau
const ExpPoly& one_minus_exp2();     // 1 - e^-2tau
const ExpPoly& center_shape();       // tau + e^-tau - 1
const ExpPoly& width_shape();        // 2 tau + 4 e^-tau - e^-2tau - 3
const ExpPoly& g_drift();            // (1 + e^-tau) tau - 2 (1 - e^-tau)
const ExpPoly& g_quantum();          // e^-2tau (2 tau + 3) - 4 e^-tau + 1
const ExpPoly& c1_diffusion();       // -2(2tau^3 - 6tau^2 + 6tau + 3) + 6 e^-2tau + 24 tau e^-tau
const ExpPoly& c2_quantum();         // e^-tau - tau e^-tau - e^-2tau
const ExpPoly& c2_diffusion();       // 1 - 2 tau e^-tau - e^-2tau
const ExpPoly& c3_diffusion();       // 2 e^-2tau - 8 e^-tau - (4 tau - 6)

// Pieces of the coherence exponent and of the off-diagonal phase gradients.
// Each of these keeps one sign for all tau > 0.
const ExpPoly& coh_d1();   // 3/10 tau^5 + ...
const ExpPoly& coh_d2a();  // -4/15 tau^6 + ...
const ExpPoly& coh_d2b();  // -1/80 tau^8 + ...
const ExpPoly& coh_d3();   // -1/60 tau^5 + ...
const ExpPoly& kp_quantum();   // e^-tau - e^-2tau - tau e^-2tau
const ExpPoly& kp_diffusion(); // (1 + e^-2tau) tau - (1 - e^-2tau)
const ExpPoly& kp_mixed();     // 1/6 tau^5 + ...
const ExpPoly& kz_mixed();     // -5/6 tau^4 + ...

}  // namespace combos

}  // namespace sgw
