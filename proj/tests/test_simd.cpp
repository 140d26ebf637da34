#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "sgw/errors.hpp"
#include "sgw/simd/kernels.hpp"

using namespace sgw::simd;

namespace {

std::int64_t ulp_distance(double a, double b) {
  auto key = [](double x) {
    const auto i = std::bit_cast<std::int64_t>(x);
    return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
  };
  const std::int64_t d = key(a) - key(b);
  return d < 0 ? -d : d;
}

std::vector<double> random_row(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  return true;
}

const std::size_t kSizes[] = {0, 1, 3, 4, 5, 7, 8, 13, 64, 257};

}  // namespace

TEST_CASE("reference exp stays within 2 ulp of std::exp") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-745.0, 709.7);
  std::int64_t worst = 0;
  for (int i = 0; i < 200000; ++i) {
    const double x = u(rng);
    worst = std::max(worst, ulp_distance(reference_exp(x), std::exp(x)));
  }
  for (double x = -40.0; x <= 40.0; x += 0.001) worst = std::max(worst, ulp_distance(reference_exp(x), std::exp(x)));
  CHECK(worst <= 2);

  // subnormal range
  for (double x = -745.0; x < -708.0; x += 0.01) {
    const double ref = std::exp(x);
    CHECK(std::abs(reference_exp(x) - ref) <= 2 * std::numeric_limits<double>::denorm_min() + 4e-16 * ref);
  }
}

TEST_CASE("reference exp edge values") {
  CHECK(reference_exp(0.0) == 1.0);
  CHECK(reference_exp(-800.0) == 0.0);
  CHECK(reference_exp(-std::numeric_limits<double>::infinity()) == 0.0);
  CHECK(std::isinf(reference_exp(710.0)));
  CHECK(std::isinf(reference_exp(std::numeric_limits<double>::infinity())));
  CHECK(std::isnan(reference_exp(std::numeric_limits<double>::quiet_NaN())));
}

TEST_CASE("dispatch") {
  CHECK(isa_available(Isa::scalar));
  CHECK(kernels_for(Isa::scalar).isa == Isa::scalar);
  CHECK(to_string(Isa::avx2) == "avx2");
  if (!isa_available(Isa::avx2)) CHECK_THROWS_AS(kernels_for(Isa::avx2), sgw::InvalidParameter);
  CHECK(isa_available(kernels().isa));
}

TEST_CASE("vector kernels are bit-identical to the scalar reference") {
  if (!isa_available(Isa::avx2)) {
    MESSAGE("AVX2 not available on this machine; equivalence not exercised");
    return;
  }
  const Kernels& s = kernels_for(Isa::scalar);
  const Kernels& v = kernels_for(Isa::avx2);
  std::mt19937_64 rng(42);

  for (std::size_t n : kSizes) {
    CAPTURE(n);
    SUBCASE("exp_quadratic_row") {
      for (bool acc : {false, true}) {
        auto base = random_row(rng, n, 0.0, 1.0);
        auto a = base, b = base;
        s.exp_quadratic_row(a.data(), n, -3.7, 0.031, -0.4, 1.3, -2.2, acc);
        v.exp_quadratic_row(b.data(), n, -3.7, 0.031, -0.4, 1.3, -2.2, acc);
        CHECK(same_bits(a, b));
        // arguments reaching underflow and overflow
        s.exp_quadratic_row(a.data(), n, -30.0, 0.25, 0.0, 0.0, 0.9, acc);
        v.exp_quadratic_row(b.data(), n, -30.0, 0.25, 0.0, 0.0, 0.9, acc);
        CHECK(same_bits(a, b));
        s.exp_quadratic_row(a.data(), n, -30.0, 0.25, 0.0, 0.0, -0.9, acc);
        v.exp_quadratic_row(b.data(), n, -30.0, 0.25, 0.0, 0.0, -0.9, acc);
        CHECK(same_bits(a, b));
      }
    }
    SUBCASE("face_flux") {
      auto qa = random_row(rng, n, -1.0, 1.0), qb = random_row(rng, n, -1.0, 1.0),
           qc = random_row(rng, n, -1.0, 1.0);
      if (n > 2) {
        qa[1] = qb[1];  // flat left slope
        qa[2] = qb[2] = qc[2];  // zero denominator
      }
      for (FluxScheme sch : {FluxScheme::upwind1, FluxScheme::van_leer}) {
        for (double vel : {0.7, -1.3}) {
          std::vector<double> a(n), b(n);
          s.face_flux(qa.data(), qb.data(), qc.data(), a.data(), n, vel, vel * 0.4, sch);
          v.face_flux(qa.data(), qb.data(), qc.data(), b.data(), n, vel, vel * 0.4, sch);
          CHECK(same_bits(a, b));
        }
      }
    }
    SUBCASE("flux_difference, cn_rhs and Thomas rows") {
      auto q = random_row(rng, n, -1.0, 1.0), l = random_row(rng, n, -1.0, 1.0),
           r = random_row(rng, n, -1.0, 1.0);
      auto qa = q, qb = q;
      s.flux_difference(qa.data(), l.data(), r.data(), n, 0.37);
      v.flux_difference(qb.data(), l.data(), r.data(), n, 0.37);
      CHECK(same_bits(qa, qb));

      std::vector<double> a(n), b(n);
      s.cn_rhs(l.data(), q.data(), r.data(), a.data(), n, 0.21);
      v.cn_rhs(l.data(), q.data(), r.data(), b.data(), n, 0.21);
      CHECK(same_bits(a, b));
      s.thomas_forward(l.data(), r.data(), a.data(), n, 0.3, 0.71);
      v.thomas_forward(l.data(), r.data(), b.data(), n, 0.3, 0.71);
      CHECK(same_bits(a, b));
      s.thomas_backward(l.data(), r.data(), a.data(), n, -0.45);
      v.thomas_backward(l.data(), r.data(), b.data(), n, -0.45);
      CHECK(same_bits(a, b));
    }
    SUBCASE("phase_rotate") {
      auto re = random_row(rng, n, -1.0, 1.0), im = random_row(rng, n, -1.0, 1.0);
      auto ang = random_row(rng, n, -3.0, 3.0);
      std::vector<double> cs(n), sn(n);
      for (std::size_t i = 0; i < n; ++i) {
        cs[i] = std::cos(ang[i]);
        sn[i] = std::sin(ang[i]);
      }
      auto ra = re, ia = im, rb = re, ib = im;
      s.phase_rotate(ra.data(), ia.data(), cs.data(), sn.data(), n);
      v.phase_rotate(rb.data(), ib.data(), cs.data(), sn.data(), n);
      CHECK(same_bits(ra, rb));
      CHECK(same_bits(ia, ib));
    }
  }
}

TEST_CASE("scalar kernels match their formulas") {
  const Kernels& s = kernels_for(Isa::scalar);
  std::vector<double> out(5);
  s.exp_quadratic_row(out.data(), 5, -1.0, 0.5, 0.2, 0.3, -0.4, false);
  for (int i = 0; i < 5; ++i) {
    const double d = -1.0 + 0.5 * i;
    CHECK(out[i] == doctest::Approx(std::exp(0.2 + d * (0.3 - 0.4 * d))).epsilon(1e-15));
  }
  // van Leer slope of a linear profile is the common difference
  const double qa[] = {0.0}, qb[] = {1.0}, qc[] = {2.0};
  double f[1];
  s.face_flux(qa, qb, qc, f, 1, 2.0, 0.5, FluxScheme::van_leer);
  CHECK(f[0] == doctest::Approx(2.0 * (1.0 + 0.25)));
  s.face_flux(qa, qb, qc, f, 1, 2.0, 0.5, FluxScheme::upwind1);
  CHECK(f[0] == 2.0);
}
