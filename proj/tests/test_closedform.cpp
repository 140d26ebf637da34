#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "literal_oracle.hpp"
#include "sgw/closedform.hpp"
#include "sgw/errors.hpp"
#include "sgw/quadrature.hpp"

using namespace sgw;

namespace {

struct OdeRow {
  int which;
  double t, z, p, wpp, wmm, re, im;
};

const OdeRow kOdeRows[] = {
#include "oracle/ode_reference.inc"
};

Model ode_case(int which) {
  // hbar, m, sigma, gamma, D, force, B0, lambda as in ode_reference.py
  struct Raw {
    double hbar, m, sigma, gamma, D, force, B0, lambda;
  };
  const Raw raw[] = {{1, 1, 1, 0.1, 0.05, 1, 0, 1},
                     {0.7, 1.3, 0.8, 0.9, 0.21, 1.7, 0.4, 0.6},
                     {1, 1, 1, 2.5, 0.3, 2.5, 0.25, 1}};
  const Raw& r = raw[which];
  ExperimentSpec s;
  s.mass = r.m;
  s.sigma = r.sigma;
  s.gamma = r.gamma;
  s.B0 = r.B0;
  s.g_s = 2.0 * r.lambda;  // mu_B = 1, so lambda = g_s / 2
  s.eta = r.force / r.lambda;
  s.temperature = r.D / (2.0 * r.m * r.gamma);
  return Model(ExperimentParams(s), PhysicalConstants{r.hbar, 1.0, 1.0});
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

double rel(const oracle::Real& want, double got) {
  return std::abs(got - want.convert_to<double>()) / std::abs(want.convert_to<double>());
}

}  // namespace

TEST_CASE("initial Wigner function") {
  CHECK(initial_wigner(0.0, 0.0, 1.0, 1.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
  const double hbar = 1.054571817e-34;
  CHECK(initial_wigner(1e-5, 0.0, 1e-5, hbar) ==
        doctest::Approx(std::exp(-1.0) / (std::numbers::pi * hbar)).epsilon(1e-14));

  // 2D trapezoid over +-8 sigma
  const int n = 801;
  const double L = 8.0, h = 2.0 * L / (n - 1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double w = (i == 0 || i == n - 1 ? 0.5 : 1.0) * (j == 0 || j == n - 1 ? 0.5 : 1.0);
      sum += w * initial_wigner(-L + i * h, -L + j * h, 1.0, 1.0);
    }
  CHECK(std::abs(sum * h * h - 1.0) < 1e-8);
}

TEST_CASE("closed forms match the moment-ODE reference") {
  for (const auto& r : kOdeRows) {
    const Model model = ode_case(r.which);
    CAPTURE(r.which);
    CAPTURE(r.t);
    CAPTURE(r.z);
    CAPTURE(r.p);
    CHECK(rel(w_diag(model, r.z, r.p, r.t, Branch::plus), r.wpp) < 1e-12);
    CHECK(rel(w_diag(model, r.z, r.p, r.t, Branch::minus), r.wmm) < 1e-12);
    const auto od = w_offdiag(model, r.z, r.p, r.t);
    const double scale = std::hypot(r.re, r.im);
    CHECK(std::abs(od.real() - r.re) < 1e-12 * scale);
    CHECK(std::abs(od.imag() - r.im) < 1e-12 * scale);
  }
}

TEST_CASE("diagonal kernel at t = 0 and at the center") {
  const Model model(ExperimentParams::silver_sg(1.0));
  const auto k0 = diag_kernel(model, 3e-6, 2e-30, 0.0, Branch::plus);
  const double w0 = model.gamma() * model.gamma() * model.mass() * model.sigma() /
                    (std::numbers::pi * std::sqrt(k0.G)) * std::exp(-k0.F / k0.G);
  CHECK(rel(w0, initial_wigner(model, 3e-6, 2e-30)) < 1e-13);

  const double t = 2e-4;
  const auto g = moments(model, t, Branch::plus);
  const auto kc = diag_kernel(model, g.z_c, g.p_c, model.gamma() * t, Branch::plus);
  CHECK(kc.F == 0.0);
  CHECK(w_diag(model, g.z_c, g.p_c, t, Branch::plus) ==
        doctest::Approx(model.mass() * model.sigma() / (std::numbers::pi * std::sqrt(kc.G))).epsilon(1e-13));
}

TEST_CASE("G at tiny tau against 200-digit evaluation") {
  const Model model(ExperimentParams::silver_sg(1.0));
  const auto q = oracle::Params::from(model);
  const double tau = 1e-6;
  CHECK(rel(oracle::G(q, oracle::Real(tau)), diag_kernel(model, 0, 0, tau, Branch::plus).G) < 1e-10);
}

TEST_CASE("C1 and C2 vanish at tau = 0; C1 survives cancellation at tau = 0.01") {
  const Model model(ExperimentParams::silver_sg(1.0));
  const auto c0 = offdiag_coeffs(model, 0.0);
  CHECK(c0.c1 == 0.0);
  CHECK(c0.c2 == 0.0);
  const auto q = oracle::Params::from(model);
  CHECK(rel(oracle::C(q, oracle::Real(0.01)).c1, offdiag_coeffs(model, 0.01).c1) < 1e-9);
}

TEST_CASE("F, G and C1..C6 hold 1e-8 against the 200-digit oracle") {
  for (double gamma : {1.0, 1e4, 1e10}) {
    const Model model(ExperimentParams::silver_sg(gamma));
    const auto q = oracle::Params::from(model);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double tau = std::pow(10.0, -8.0 + 9.0 * i / 99.0);
      const oracle::Real T(tau);
      const auto c = offdiag_coeffs(model, tau);
      const auto o = oracle::C(q, T);
      worst = std::max({worst, rel(o.c1, c.c1), rel(o.c2, c.c2), rel(o.c3, c.c3), rel(o.c4, c.c4),
                        rel(o.c5, c.c5), rel(o.c6, c.c6)});

      const auto g = moments(model, tau / gamma, Branch::plus);
      for (auto [u, v] : {std::pair{1.0, 0.0}, {0.0, 1.0}, {0.7, -0.4}}) {
        const double zp = u * g.sigma_z, pp = v * g.sigma_p;
        const auto k = diag_kernel(model, g.z_c + zp, g.p_c + pp, tau, Branch::plus);
        worst = std::max({worst, rel(oracle::G(q, T), k.G),
                          rel(oracle::F(q, oracle::Real(k.z_prime), oracle::Real(k.p_prime), T), k.F)});
      }
    }
    CAPTURE(gamma);
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("off-diagonal value against the literal solution at 200 digits") {
  for (double gamma : {1.0, 1e4, 1e8}) {
    const Model model(ExperimentParams::silver_sg(gamma));
    const auto q = oracle::Params::from(model);
    for (double t : {1e-9, 1e-8, 3e-8}) {
      const auto form = offdiag_form(model, t);
      const auto g = moments(model, t);
      for (auto [u, v] : {std::pair{0.0, 0.0}, {0.5, -0.3}, {-1.2, 0.9}}) {
        const double z = u * g.sigma_z, p = v * g.sigma_p;
        const auto [lm, ph] = oracle::log_offdiag(q, oracle::Real(z), oracle::Real(p), oracle::Real(t));
        CAPTURE(gamma);
        CAPTURE(t);
        CHECK(std::abs(form.modulus.exponent(z, p) - lm.convert_to<double>()) <
              1e-9 * std::max(1.0, std::abs(lm.convert_to<double>())));
        const double ph_ref = ph.convert_to<double>();
        CHECK(std::abs(form.phase(z, p) - ph_ref) < 1e-12 * std::max(1.0, std::abs(ph_ref)));
      }
      const double ld = oracle::log_delta(q, oracle::Real(t)).convert_to<double>();
      CHECK(std::abs(form.log_delta - ld) < 1e-9 * std::max(1e-300, std::abs(ld)));
    }
  }
}

TEST_CASE("t = 0 reduces to the initial Gaussian on a 101 x 101 grid") {
  const Model model(ExperimentParams::silver_sg(1e3));
  const double s = model.sigma(), sp = model.hbar() / s;
  const auto dp = diag_form(model, 0.0, Branch::plus);
  const auto dm = diag_form(model, 0.0, Branch::minus);
  const auto od = offdiag_form(model, 0.0);
  const double peak = initial_wigner(model, 0.0, 0.0);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j) {
      const double z = -4 * s + 0.08 * s * i, p = -4 * sp + 0.08 * sp * j;
      const double wi = initial_wigner(model, z, p);
      worst = std::max({worst, std::abs(dp(z, p) - wi), std::abs(dm(z, p) - wi), std::abs(od(z, p) - wi)});
    }
  CHECK(worst < 1e-12 * peak);
}

TEST_CASE("Hermiticity is exact") {
  const Model model(ExperimentParams::silver_sg(1e4).with_spin({0.6, 0.1}, {0.3, -0.7}));
  for (double t : {0.0, 1e-8, 1e-6}) {
    const auto w = wigner_matrix(model, 2e-6, -1e-29, t);
    CHECK(w.w_mp().real() == w.w_pm.real());
    CHECK(w.w_mp().imag() == -w.w_pm.imag());
  }
}

TEST_CASE("spin amplitudes") {
  const Model up(ExperimentParams::silver_sg(1.0).with_spin(1.0, 0.0));
  const auto w = wigner_matrix(up, 1e-4, 1e-21, 1e-4);
  CHECK(w.w_mm == 0.0);
  CHECK(w.w_pm == std::complex<double>(0.0, 0.0));

  const Model x(ExperimentParams::silver_sg(1.0));
  for (double t : {0.0, 1e-5, 2e-4}) {
    const auto s = wigner_matrix(x, 0.0, 0.0, t);
    CHECK(s.w_pp == s.w_mm);
  }
}

TEST_CASE("zero damping is rejected") {
  const Model model(ExperimentParams::silver_sg(0.0));
  CHECK_THROWS_AS(diag_kernel(model, 0, 0, 0, Branch::plus), GammaZero);
  CHECK_THROWS_AS(w_diag(model, 0, 0, 1e-6, Branch::plus), GammaZero);
  CHECK_THROWS_AS(offdiag_coeffs(model, 0), GammaZero);
  CHECK_THROWS_AS(w_offdiag(model, 0, 0, 1e-6), GammaZero);
}

TEST_CASE("|W_od| at the origin decreases with t for gamma = 1e10") {
  const Model model(ExperimentParams::silver_sg(1e10));
  double prev = log_abs_offdiag(model, 0, 0, 0.0);
  for (int i = 0; i <= 80; ++i) {
    const double t = std::pow(10.0, -12.0 + 8.4 * i / 80.0);
    const double cur = log_abs_offdiag(model, 0, 0, t);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("Re W_od oscillates faster as t grows") {
  const Model model(ExperimentParams::silver_sg(1.0));
  auto sign_changes = [&](double t) {
    const auto form = offdiag_form(model, t);
    int changes = 0;
    double prev = form(-model.sigma(), 0.0).real();
    for (int i = 1; i <= 20000; ++i) {
      const double z = -model.sigma() + 2.0 * model.sigma() * i / 20000.0;
      const double cur = form(z, 0.0).real();
      if ((cur > 0) != (prev > 0)) ++changes;
      prev = cur;
    }
    return changes;
  };
  const int a = sign_changes(1e-8), b = sign_changes(2e-8), c = sign_changes(4e-8);
  CHECK(a > 2);
  CHECK(b > a);
  CHECK(c > b);
}

TEST_CASE("trace normalization by quadrature") {
  for (double gamma : {1.0, 1e3, 1e10}) {
    const Model model(ExperimentParams::silver_sg(gamma));
    for (double t : {0.0, 1e-4, 2e-4, 4e-4}) {
      double total = 0.0;
      for (Branch b : {Branch::plus, Branch::minus}) {
        const auto form = diag_form(model, t, b);
        const auto g = moments(model, t, b);
        const auto& q = form.gauss;
        const double cond = 1.0 / std::sqrt(q.qpp);
        const double weight = b == Branch::plus ? std::norm(model.params().spin_a()) : std::norm(model.params().spin_b());
        total += weight * quad::integrate_2d(
                              [&](double z, double p) { return form(z, p); }, g.z_c - 12 * g.sigma_z,
                              g.z_c + 12 * g.sigma_z,
                              [&](double z) {
                                const double mid = q.p0 - q.qzp / (2 * q.qpp) * (z - q.z0);
                                return std::pair{mid - 12 * cond, mid + 12 * cond};
                              });
      }
      CAPTURE(gamma);
      CAPTURE(t);
      CHECK(std::abs(total - 1.0) < 1e-6);
    }
  }
}
