#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "sgw/cli.hpp"
#include "sgw/errors.hpp"
#include "sgw/grid.hpp"
#include "sgw/io.hpp"

namespace fs = std::filesystem;
using sgw::cli::parse_time;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result sgw_run(std::vector<std::string> args) {
  args.insert(args.begin(), "sgw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = sgw::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sgw_test_cli" / name;
  fs::remove_all(dir);
  return dir;
}

std::string value_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + " ");
  REQUIRE(pos != std::string::npos);
  return text.substr(pos + key.size() + 1, text.find('\n', pos) - pos - key.size() - 1);
}

}  // namespace

TEST_CASE("time arguments") {
  CHECK(parse_time("200us") == 2e-4);
  CHECK(parse_time("0.4ms") == 4e-4);
  CHECK(parse_time("5ns") == 5e-9);
  CHECK(parse_time("1.5s") == 1.5);
  CHECK(parse_time("1e-4") == 1e-4);
  CHECK(sgw::cli::parse_time_list("0,50us,1ms") == std::vector<double>{0.0, 5e-5, 1e-3});
  CHECK_THROWS_AS(parse_time("us"), sgw::InvalidParameter);
  CHECK_THROWS_AS(parse_time("-1s"), sgw::InvalidParameter);
  CHECK_THROWS_AS(parse_time("3 ms"), sgw::InvalidParameter);
  CHECK_THROWS_AS(sgw::cli::parse_time_list("1us,"), sgw::InvalidParameter);
}

TEST_CASE("exit codes") {
  CHECK(sgw_run({}).code == 1);
  CHECK(sgw_run({"bogus"}).code == 1);
  CHECK(sgw_run({"--help"}).code == 0);
  CHECK(sgw_run({"derive", "--times", "2 parsecs"}).code == 1);
  CHECK(sgw_run({"evolve", "--times", "1us"}).code == 1);
  CHECK(sgw_run({"oracle-compare", "--out", scratch("nondim").string()}).code == 1);
  const auto few = sgw_run({"coherence", "--gammas", "1,10", "--out", scratch("few").string()});
  CHECK(few.code == 2);
  CHECK(few.err.find("InsufficientData") != std::string::npos);
  const auto missing = sgw_run({"derive", "--config", "/nonexistent/scenario.json"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("IoFailure") != std::string::npos);
}

TEST_CASE("derive keeps D / gamma fixed") {
  const auto a = sgw_run({"derive", "--gamma", "1"});
  const auto b = sgw_run({"derive", "--gamma", "1e6"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const double ra = std::stod(value_after(a.out, "D_over_gamma"));
  const double rb = std::stod(value_after(b.out, "D_over_gamma"));
  CHECK(ra == doctest::Approx(rb).epsilon(1e-14));
  CHECK(a.out.find("0.0001,0.0001,small-tau") != std::string::npos);
}

TEST_CASE("coherence then fit, byte-identical on repeat") {
  const auto d1 = scratch("coh1"), d2 = scratch("coh2");
  const auto r1 = sgw_run({"coherence", "--gammas", "1,1e2,1e4,1e6,1e8", "--out", d1.string()});
  const auto r2 = sgw_run({"coherence", "--gammas", "1,1e2,1e4,1e6,1e8", "--out", d2.string()});
  REQUIRE(r1.code == 0);
  CHECK(r1.out == r2.out);
  for (const char* f : {"td_table.csv", "fit.json", "delta_000.csv", "delta_004.csv"})
    CHECK(sgw::io::read_file(d1 / f) == sgw::io::read_file(d2 / f));
  const auto fit = sgw_run({"fit", "--in", (d1 / "td_table.csv").string()});
  REQUIRE(fit.code == 0);
  const auto b = std::stod(fit.out.substr(fit.out.find("b = ") + 4));
  CHECK(b == doctest::Approx(-0.198).epsilon(0.02));
}

TEST_CASE("evolve writes one field per time") {
  const auto dir = scratch("evolve");
  const auto r = sgw_run({"evolve", "--times", "0,200us", "--kind", "trace", "--n", "64", "--format", "grid-bin",
                          "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::file_size(dir / "field_001.bin") == 64 + 64 * 64 * 8);
  const auto f = sgw::import_field(dir / "field_001.bin", sgw::GridFormat::grid_bin);
  CHECK(find_local_maxima(f).size() == 2);
  CHECK(fs::exists(dir / "fields.csv"));

  const auto pinned = scratch("pinned");
  CHECK(sgw_run({"evolve", "--times", "100us", "--kind", "offdiag-abs", "--z-range", "-1e-3,1e-3", "--p-range",
                 "-1e-23,1e-23", "--n", "16", "--out", pinned.string()})
            .code == 0);
  const auto g = sgw::import_field(pinned / "field_000.csv", sgw::GridFormat::csv);
  CHECK(g.grid.z_max == 1e-3);
  CHECK(g.kind == sgw::FieldKind::offdiag_abs);
  CHECK(sgw_run({"evolve", "--times", "1us", "--kind", "sum", "--out", pinned.string()}).code == 1);
}

TEST_CASE("marginals and damping estimate") {
  const auto dir = scratch("marg");
  REQUIRE(sgw_run({"marginals", "--t-max", "400us", "--points", "11", "--gammas", "1,1e10", "--out", dir.string()})
              .code == 0);
  const auto t = sgw::io::read_table(dir / "marginals.csv");
  CHECK(t.rows.size() == 22);
  CHECK(t.rows[0][t.column("sigma_z")] == 1e-5);

  const auto est = sgw_run({"estimate-gamma"});
  REQUIRE(est.code == 0);
  const double mu = std::stod(value_after(est.out, "mu_kg_per_s"));
  const double gamma = std::stod(value_after(est.out, "gamma_per_s"));
  CHECK(mu > 1e-15);
  CHECK(mu < 1e-13);
  CHECK(gamma > 1e9);
  CHECK(gamma < 1e11);
}

TEST_CASE("oracle-compare on a small grid") {
  const auto dir = scratch("oracle");
  const auto r = sgw_run({"oracle-compare", "--nondim", "--n", "64", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto text = sgw::io::read_file(dir / "oracle.csv");
  CHECK(text.rfind("component,n,l2_error", 0) == 0);
  CHECK(text.find("offdiag,64,") != std::string::npos);
}
