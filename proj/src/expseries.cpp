#include "sgw/expseries.hpp"

#include <cassert>
#include <cmath>

namespace sgw {

ExpPoly::ExpPoly(std::initializer_list<ExpTerm> terms) : terms_(terms) {
  coeffs_.resize(kTerms);
  double factorial = 1.0;
  for (int n = 0; n < kTerms; ++n) {
    if (n > 0) factorial *= n;
    // n! * [tau^n] = sum poly[i] (-rate)^(n-i) n!/(n-i)!, an exact integer.
    __int128 numerator = 0;
    for (const auto& term : terms_) {
      for (int i = 0; i < 5 && i <= n; ++i) {
        if (term.poly[static_cast<std::size_t>(i)] == 0) continue;
        __int128 falling = 1;
        for (int j = 0; j < i; ++j) falling *= (n - j);
        __int128 power = 1;
        for (int j = 0; j < n - i; ++j) power *= -term.rate;
        numerator += term.poly[static_cast<std::size_t>(i)] * falling * power;
      }
    }
    coeffs_[static_cast<std::size_t>(n)] = static_cast<double>(numerator) / factorial;
    if (numerator != 0 && leading_ == kTerms) leading_ = n;
  }
}

double ExpPoly::direct(double tau) const {
  double sum = 0.0;
  for (const auto& term : terms_) {
    double p = 0.0;
    for (int i = 4; i >= 0; --i) p = p * tau + static_cast<double>(term.poly[static_cast<std::size_t>(i)]);
    sum += term.rate == 0 ? p : p * std::exp(-term.rate * tau);
  }
  return sum;
}

double ExpPoly::scaled(double tau, int k) const {
  assert(k >= 0 && k <= leading_);
  if (tau >= kSeriesLimit) return direct(tau) / std::pow(tau, k);
  double acc = 0.0;
  for (int n = kTerms - 1; n >= k; --n) acc = acc * tau + coeffs_[static_cast<std::size_t>(n)];
  return acc;
}

namespace combos {

// clang-format off
const ExpPoly& one_minus_exp() {
  static const ExpPoly f{{0, {1, 0, 0, 0, 0}}, {1, {-1, 0, 0, 0, 0}}};
  return f;
}
const ExpPoly& one_minus_exp2() {
  static const ExpPoly f{{0, {1, 0, 0, 0, 0}}, {2, {-1, 0, 0, 0, 0}}};
  return f;
}
const ExpPoly& center_shape() {
  static const ExpPoly f{{0, {-1, 1, 0, 0, 0}}, {1, {1, 0, 0, 0, 0}}};
  return f;
}
const ExpPoly& width_shape() {
  static const ExpPoly f{{0, {-3, 2, 0, 0, 0}}, {1, {4, 0, 0, 0, 0}}, {2, {-1, 0, 0, 0, 0}}};
  return f;
}
const ExpPoly& g_drift() {
  static const ExpPoly f{{0, {-2, 1, 0, 0, 0}}, {1, {2, 1, 0, 0, 0}}};
  return f;
}
const ExpPoly& g_quantum() {
  static const ExpPoly f{{0, {1, 0, 0, 0, 0}}, {1, {-4, 0, 0, 0, 0}}, {2, {3, 2, 0, 0, 0}}};
  return f;
}
const ExpPoly& c1_diffusion() {
  static const ExpPoly f{{0, {-6, -12, 12, -4, 0}}, {1, {0, 24, 0, 0, 0}}, {2, {6, 0, 0, 0, 0}}};
  return f;
}
const ExpPoly& c2_quantum() {
  static const ExpPoly f{{1, {1, -1, 0, 0, 0}}, {2, {-1, 0, 0, 0, 0}}};
  return f;
}
const ExpPoly& c2_diffusion() {
  static const ExpPoly f{{0, {1, 0, 0, 0, 0}}, {1, {0, -2, 0, 0, 0}}, {2, {-1, 0, 0, 0, 0}}};
  return f;
}
const ExpPoly& c3_diffusion() {
  static const ExpPoly f{{0, {6, -4, 0, 0, 0}}, {1, {-8, 0, 0, 0, 0}}, {2, {2, 0, 0, 0, 0}}};
  return f;
}
const ExpPoly& coh_d1() {
  static const ExpPoly f{{0, {3, 0, 0, 0, 0}}, {1, {0, -12, 0, 0, 0}}, {2, {-3, 6, 6, 2, 0}}};
  return f;
}
const ExpPoly& coh_d2a() {
  static const ExpPoly f{{0, {0, -6, 6, -2, 0}}, {2, {0, 6, 6, 2, 0}}};
  return f;
}
const ExpPoly& coh_d2b() {
  static const ExpPoly f{{0, {12, -24, 12, -2, 0}}, {1, {-24, 24, 12, -4, 0}}, {2, {12, 0, -12, -6, -1}}};
  return f;
}
const ExpPoly& coh_d3() {
  static const ExpPoly f{{0, {-12, 6, -1, 0, 0}}, {1, {12, 6, 1, 0, 0}}};
  return f;
}
const ExpPoly& kp_quantum() {
  static const ExpPoly f{{1, {1, 0, 0, 0, 0}}, {2, {-1, -1, 0, 0, 0}}};
  return f;
}
const ExpPoly& kp_diffusion() {
  static const ExpPoly f{{0, {-1, 1, 0, 0, 0}}, {2, {1, 1, 0, 0, 0}}};
  return f;
}
const ExpPoly& kp_mixed() {
  static const ExpPoly f{{0, {-4, 2, 0, 0, 0}}, {1, {8, 4, -2, 0, 0}}, {2, {-4, -6, -2, 0, 0}}};
  return f;
}
const ExpPoly& kz_mixed() {
  static const ExpPoly f{{0, {2, -2, 0, 0, 0}}, {1, {-4, 4, 0, 0, 0}}, {2, {2, -2, -2, 0, 0}}};
  return f;
}
// clang-format on

}  // namespace combos

}  // namespace sgw
