#include "sgw/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sgw/errors.hpp"

namespace sgw::quad {

namespace {

// 2^12 subintervals per panel is far past what a smooth integrand needs; the
// cap bounds the work when rounding noise keeps the error estimate above tol.
constexpr unsigned kMaxDepth = 12;

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, int panels) {
  if (!(b > a)) return 0.0;
  if (panels < 1) throw InvalidParameter("panels must be >= 1");
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  // Integrate over a unit-width variable per panel; the rule's termination
  // test misbehaves when the interval itself is tiny (momenta are ~1e-25).
  const double w = (b - a) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * w;
    auto g = [&](double u) { return f(lo + u * w); };
    sum += GK::integrate(g, 0.0, 1.0, kMaxDepth, rel_tol);
  }
  return sum * w;
}

double integrate_2d(const std::function<double(double, double)>& f, double x0, double x1,
                    const std::function<std::pair<double, double>(double)>& y_window, double rel_tol,
                    int panels) {
  auto inner = [&](double x) {
    const auto [lo, hi] = y_window(x);
    return integrate([&](double y) { return f(x, y); }, lo, hi, rel_tol, panels);
  };
  return integrate(inner, x0, x1, rel_tol, panels);
}

}  // namespace sgw::quad
