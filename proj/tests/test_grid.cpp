#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>

#include "sgw/closedform.hpp"
#include "sgw/errors.hpp"
#include "sgw/grid.hpp"
#include "sgw/io.hpp"
#include "sgw/marginals.hpp"
#include "sgw/quadrature.hpp"

using namespace sgw;
namespace fs = std::filesystem;

namespace {

Model silver(double gamma) { return Model(ExperimentParams::silver_sg(gamma)); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sgw_test_grid";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_NOTHROW(PhaseSpaceGrid{}.validate());
  CHECK_THROWS_AS((PhaseSpaceGrid{0, 1, 0, 1, 7, 8}.validate()), InvalidParameter);
  CHECK_THROWS_AS((PhaseSpaceGrid{1, 1, 0, 1, 8, 8}.validate()), InvalidParameter);
  CHECK_THROWS_AS((PhaseSpaceGrid{0, 1, 2, 1, 8, 8}.validate()), InvalidParameter);
  const PhaseSpaceGrid g{-1, 1, 0, 7, 9, 8};
  CHECK(g.dz() == 0.25);
  CHECK(g.dp() == 1.0);
  CHECK(g.z(8) == 1.0);
  CHECK(parse_field_kind("diag-") == FieldKind::diag_minus);
  CHECK_THROWS_AS(parse_field_kind("diag"), InvalidParameter);
}

TEST_CASE("trace at t = 0 is the initial Wigner function") {
  const Model m = silver(1.0);
  const auto grid = auto_window(0.0, m, 5.0, 41, 37);
  CHECK(grid.z_max == doctest::Approx(5 * m.sigma()));
  CHECK(grid.p_max == doctest::Approx(5 * m.hbar() / m.sigma()));
  const auto f = sample(FieldKind::trace, 0.0, grid, m);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n_z; ++i)
    for (std::size_t j = 0; j < grid.n_p; ++j) {
      const double ref = initial_wigner(m, grid.z(i), grid.p(j));
      worst = std::max(worst, std::abs(f.at(i, j) - ref) / ref);
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("sampled kinds agree with pointwise evaluation") {
  const Model m = silver(1e3).with_params(ExperimentParams::silver_sg(1e3).with_spin({0.6, 0.0}, {0.0, 0.8}));
  const double t = 5e-5;
  const auto grid = auto_window(t, m, 4.0, 17, 23);
  for (FieldKind k : {FieldKind::trace, FieldKind::diag_plus, FieldKind::diag_minus, FieldKind::offdiag_re,
                      FieldKind::offdiag_im, FieldKind::offdiag_abs}) {
    CAPTURE(to_string(k));
    const auto f = sample(k, t, grid, m);
    const double scale = f.max() > 0 ? f.max() : 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.n_z; ++i)
      for (std::size_t j = 0; j < grid.n_p; ++j) {
        const auto s = wigner_matrix(m, grid.z(i), grid.p(j), t);
        const auto od = w_offdiag(m, grid.z(i), grid.p(j), t);
        double ref = 0.0;
        switch (k) {
          case FieldKind::trace: ref = s.trace(); break;
          case FieldKind::diag_plus: ref = s.w_pp; break;
          case FieldKind::diag_minus: ref = s.w_mm; break;
          case FieldKind::offdiag_re: ref = od.real(); break;
          case FieldKind::offdiag_im: ref = od.imag(); break;
          case FieldKind::offdiag_abs: ref = std::abs(od); break;
        }
        worst = std::max(worst, std::abs(f.at(i, j) - ref) / std::abs(scale));
      }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("sampling is pure and thread-count independent") {
  const Model m = silver(1e2);
  const auto grid = auto_window(1e-4, m, 5.0, 64, 48);
  setenv("SGW_THREADS", "1", 1);
  const auto a = sample(FieldKind::trace, 1e-4, grid, m);
  setenv("SGW_THREADS", "5", 1);
  const auto b = sample(FieldKind::trace, 1e-4, grid, m);
  unsetenv("SGW_THREADS");
  CHECK(a.values == b.values);
  bool nonneg = true;
  for (double v : a.values) nonneg = nonneg && v >= 0.0;
  CHECK(nonneg);
}

TEST_CASE("weak damping splits the beam") {
  const Model m = silver(1.0);
  const double t = 2e-4;
  const auto g = moments(m, t);
  CHECK(g.z_c > 0.9e-3);
  CHECK(g.z_c < 1.2e-3);
  const auto f = sample(FieldKind::trace, t, auto_window(t, m, 5.0), m);
  const auto peaks = find_local_maxima(f);
  REQUIRE(peaks.size() == 2);
  const double sep = peaks[1].z - peaks[0].z;
  CHECK(std::abs(sep / (2 * g.z_c) - 1.0) < 0.02);
}

TEST_CASE("strong damping keeps one peak at the origin") {
  const Model m = silver(1e10);
  const double t = 2e-4;
  const auto f = sample(FieldKind::trace, t, auto_window(t, m, 5.0), m);
  const auto peaks = find_local_maxima(f);
  REQUIRE(peaks.size() == 1);
  CHECK(std::abs(peaks[0].z) <= f.grid.dz());
  CHECK(std::abs(peaks[0].p) <= f.grid.dp());
}

TEST_CASE("parabolic refinement recovers an off-node peak") {
  WignerField f{{-1, 1, -1, 1, 41, 41}, FieldKind::trace, {}, 0.0};
  f.values.resize(f.grid.size());
  for (std::size_t i = 0; i < 41; ++i)
    for (std::size_t j = 0; j < 41; ++j) {
      const double dz = f.grid.z(i) - 0.123, dp = f.grid.p(j) + 0.301;
      f.values[i * 41 + j] = std::exp(-dz * dz / 0.02 - dp * dp / 0.05);
    }
  const auto peaks = find_local_maxima(f);
  REQUIRE(peaks.size() == 1);
  CHECK(std::abs(peaks[0].z - 0.123) < 0.1 * f.grid.dz());
  CHECK(std::abs(peaks[0].p + 0.301) < 0.1 * f.grid.dp());
}

TEST_CASE("auto window grows with time and holds the trace mass") {
  const Model m = silver(1.0);
  double prev = 0.0;
  for (double t : {0.0, 1e-5, 5e-5, 1e-4, 2e-4, 4e-4}) {
    const auto g = auto_window(t, m, 5.0);
    CHECK(g.z_max > prev);
    prev = g.z_max;
  }
  CHECK_THROWS_AS(auto_window(0.0, m, 2.0), InvalidParameter);

  const double t = 2e-4;
  const auto g = auto_window(t, m, 5.0);
  const auto form = matrix_form(m, t);
  const auto mom = moments(m, t);
  // inner p window follows the sheared ridge of each branch, clipped to the grid
  double inside = 0.0;
  for (const DiagForm* d : {&form.plus, &form.minus}) {
    const auto& q = d->gauss;
    const double w = 12.0 / std::sqrt(q.qpp);
    inside += 0.5 * quad::integrate_2d([&](double z, double p) { return (*d)(z, p); }, g.z_min, g.z_max,
                                       [&](double z) {
                                         const double mid = q.p0 - q.qzp / (2 * q.qpp) * (z - q.z0);
                                         return std::pair{std::max(g.p_min, mid - w), std::min(g.p_max, mid + w)};
                                       });
  }
  CHECK(inside >= 1.0 - 1e-6);
  CHECK(mom.sigma_z > 0.0);
}

TEST_CASE("grid-bin layout and round trip") {
  WignerField f{{-2.5, 3.0, -1e-28, 4e-28, 4, 4}, FieldKind::diag_plus, {}, 1e-4};
  for (int i = 0; i < 16; ++i) f.values.push_back(std::ldexp(1.0 + i / 7.0, -i) * (i % 3 == 0 ? -1 : 1));
  const auto bytes = encode_grid_bin(f);
  CHECK(bytes.size() == 64 + 128);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "WSG1");
  CHECK(bytes[40] == 4);
  CHECK(bytes[44] == 4);
  for (int i = 48; i < 64; ++i) CHECK(bytes[i] == 0);

  const auto path = scratch("field.bin");
  export_field(f, path, GridFormat::grid_bin);
  CHECK(fs::file_size(path) == 192);
  const auto back = import_field(path, GridFormat::grid_bin);
  CHECK(back.grid == f.grid);
  CHECK(std::memcmp(back.values.data(), f.values.data(), 128) == 0);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(decode_grid_bin(truncated), FormatError);
  CHECK_THROWS_AS(import_field(scratch("missing.bin"), GridFormat::grid_bin), IoFailure);
}

TEST_CASE("csv round trip keeps every bit") {
  const Model m = silver(1e4);
  const double t = 3e-5;
  const auto f = sample(FieldKind::offdiag_re, t, auto_window(t, m, 4.0, 12, 9), m);
  const auto text = encode_csv(f);
  CHECK(text.rfind("# kind,t,n_z,n_p,z_min,z_max,p_min,p_max\n# offdiag-re,", 0) == 0);
  const auto path = scratch("field.csv");
  export_field(f, path, GridFormat::csv);
  const auto back = import_field(path, GridFormat::csv);
  CHECK(back.kind == f.kind);
  CHECK(back.t == f.t);
  CHECK(back.grid == f.grid);
  CHECK(back.values == f.values);
  CHECK_THROWS_AS(decode_csv("# kind\n# trace,0,8,8\nz,p,value\n"), FormatError);
}

TEST_CASE("tables") {
  const auto path = scratch("sub/table.csv");
  fs::remove_all(path.parent_path());
  io::write_table(path, {"gamma", "t_d"}, {{1.0, 5.0114e-7}, {100.0, 0.1 + 0.2}});
  const auto t = io::read_table(path);
  CHECK(t.columns.size() == 2);
  CHECK(t.rows[1][t.column("t_d")] == 0.1 + 0.2);
  CHECK_THROWS_AS(t.column("b"), FormatError);
  CHECK_FALSE(fs::exists(path.string() + ".tmp"));
}
