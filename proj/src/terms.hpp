#pragma once

#include <cmath>

#include "sgw/expseries.hpp"

namespace sgw::detail {

// f(gamma t) / gamma^k. Below the series limit this is t^k * (f(tau) / tau^k),
// finite as gamma -> 0; above it the literal quotient keeps saturated values
// (e.g. (1 - e^-tau) / gamma) exactly monotone in t.
inline double tpow(const ExpPoly& f, double t, double gamma, int k) {
  const double tau = gamma * t;
  if (tau < ExpPoly::kSeriesLimit) return f.scaled(tau, k) * std::pow(t, k);
  return f.direct(tau) / std::pow(gamma, k);
}

// Every time-dependent combination of the solution, evaluated once per t.
struct TimeTerms {
  double t, tau, e1, e2;
  double em1;  // (1 - e^-tau) / gamma
  double em2;  // (1 - e^-2tau) / gamma
  double zc;   // (tau + e^-tau - 1) / gamma^2
  double wz;   // width_shape / gamma^3
  double gd;   // g_drift / gamma^3
  double gq;   // g_quantum / gamma^3

  TimeTerms(double t_, double gamma) : t(t_), tau(gamma * t_) {
    e1 = std::exp(-tau);
    e2 = std::exp(-2.0 * tau);
    em1 = tpow(combos::one_minus_exp(), t, gamma, 1);
    em2 = tpow(combos::one_minus_exp2(), t, gamma, 1);
    zc = tpow(combos::center_shape(), t, gamma, 2);
    wz = tpow(combos::width_shape(), t, gamma, 3);
    gd = tpow(combos::g_drift(), t, gamma, 3);
    gq = tpow(combos::g_quantum(), t, gamma, 3);
  }
};

}  // namespace sgw::detail
