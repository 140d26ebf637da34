#pragma once

#include <functional>

namespace sgw::quad {

/// Adaptive 15-point Gauss-Kronrod on [a, b], pre-split into `panels` equal
/// pieces so that narrow features are not stepped over by the first rule.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, int panels = 16);

/// Iterated integral over x in [x0, x1] of the inner integral over y in
/// [y_lo(x), y_hi(x)]. Passing the window per x keeps sheared integrands
/// (strongly correlated Gaussians) inside a tight inner interval.
double integrate_2d(const std::function<double(double, double)>& f, double x0, double x1,
                    const std::function<std::pair<double, double>(double)>& y_window,
                    double rel_tol = 1e-10, int panels = 16);

}  // namespace sgw::quad
