#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sts/amr.hpp"
#include "sts/config.hpp"
#include "sts/errors.hpp"
#include "sts/io.hpp"

using namespace sts;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sts_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string rejected_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<accepted>";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("empty config gives the semilinear defaults") {
    const RunConfig c = parse_config("");
    CHECK(c.problem == Problem::semilinear_heat);
    CHECK(c.a == 1.0);
    CHECK(c.bc == Boundary::dirichlet_zero);
    CHECK(c.dx() == 1.0 / 128);
    CHECK(c.dt0 == c.dx() / 8);
    CHECK(c.s0 == 200);
    CHECK(c.threshold == 1e30);
    CHECK(c.p == 3.0);
  }

  TEST_CASE("surface diffusion defaults") {
    const RunConfig c = parse_config("problem = surface_diffusion\n");
    CHECK(c.a == doctest::Approx(2 * M_PI).epsilon(1e-15));
    CHECK(c.bc == Boundary::periodic);
    CHECK(c.dt0 == 1e-5);
    CHECK(c.s0 == 70);
    CHECK(c.threshold == 1e-10);
    CHECK(c.r0_amplitude == 1.8);
    CHECK(c.r0_offset == 1.2);
    CHECK(c.dx() == doctest::Approx(4 * M_PI / 256).epsilon(1e-15));
  }

  TEST_CASE("keys, comments and dx") {
    const RunConfig c = parse_config("# heat\nformat_version = 1\np = 2  # square\ndx = 1/64\nscheme = rkg2\ns0 = 40\n");
    CHECK(c.p == 2.0);
    CHECK(c.n_intervals == 128);
    CHECK(c.family == SchemeFamily::rkg2);
    CHECK(c.dt0 == (1.0 / 64) / 8);
    const RunConfig d = parse_config("problem = surfdiff\ndx = 4pi/128\n");
    CHECK(d.n_intervals == 128);
  }

  TEST_CASE("invalid documents name the key") {
    CHECK(rejected_key("p = 1\n") == "p");
    CHECK(rejected_key("dx = 0.3\n") == "dx");
    CHECK(rejected_key("colour = red\n") == "colour");
    CHECK(rejected_key("p = 2\np = 3\n") == "p");
    CHECK(rejected_key("format_version = 2\n") == "format_version");
    CHECK(rejected_key("scheme = rkg2\ns0 = 1\n") == "s0");
    CHECK(rejected_key("problem = surface_diffusion\nbc = dirichlet\n") == "bc");
    CHECK(rejected_key("integrator = backward_euler\n") == "integrator");
    CHECK(rejected_key("dt_divisor_low = 1\n") == "dt_divisor_low");
    CHECK(rejected_key("n_intervals = 4\n") == "n_intervals");
    CHECK_THROWS_AS(parse_config("just words\n"), ConfigError);
  }

  TEST_CASE("format_config round trips") {
    RunConfig c = parse_config("problem = surface_diffusion\nthreshold = 2e-4\nn_intervals = 128\nscheme = rkg1\n");
    const RunConfig d = parse_config(format_config(c));
    CHECK(format_config(d) == format_config(c));
    CHECK(d.family == SchemeFamily::rkg1);
    CHECK(d.threshold == 2e-4);
  }
}

TEST_SUITE("io") {
  TEST_CASE("snapshot of five nodes has six lines") {
    const GridPtr g = make_grid(Grid1D::uniform(1.0, 4, Boundary::dirichlet_zero));
    std::ostringstream out;
    write_snapshot_csv(out, Field(g, {0.0, 0.1, 1.0 / 3.0, 0.1, 0.0}));
    const std::string s = out.str();
    CHECK(std::count(s.begin(), s.end(), '\n') == 6);
    CHECK(s.rfind("x,u\n", 0) == 0);
    CHECK(s.find("0,0.33333333333333331\n") != std::string::npos);
  }

  TEST_CASE("series round trip") {
    std::vector<DiagnosticsRow> rows(2);
    rows[0] = {0.0, 13.5, 0.4, 2.5, NAN, 0, 1e-3};
    rows[1] = {1e-3, 20.0, 0.3, NAN, NAN, 1, 0.0};
    const fs::path dir = scratch("series");
    fs::create_directories(dir);
    write_series_csv((dir / "s.csv").string(), rows);
    CHECK(slurp(dir / "s.csv").rfind(std::string(kSeriesHeader) + "\n", 0) == 0);
    const auto back = read_series_csv((dir / "s.csv").string());
    REQUIRE(back.size() == 2);
    CHECK(back[0].value == 13.5);
    CHECK(back[0].dvdt == 2.5);
    CHECK(std::isnan(back[1].dvdt));
    CHECK(back[1].level == 1);
    fs::remove_all(dir);
  }

  TEST_CASE("unwritable paths surface the path") {
    try {
      write_json("/nonexistent_dir_sts/x.json", nlohmann::json::object());
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("/nonexistent_dir_sts/x.json") != std::string::npos);
    }
  }

  TEST_CASE("identical runs write byte-identical outputs") {
    RunConfig cfg = default_config(Problem::semilinear_heat);
    cfg.threshold = 1e4;
    const fs::path a = scratch("run_a"), b = scratch("run_b");
    cfg.output_dir = a.string();
    const RunReport ra = run(cfg);
    cfg.output_dir = b.string();
    run(cfg);
    CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
    CHECK(!slurp(a / "series.csv").empty());
    for (std::size_t i = 0; i < ra.snapshots.size(); ++i) {
      char name[48];
      std::snprintf(name, sizeof name, "snapshot_%03zu.csv", i);
      CHECK(slurp(a / "snapshots" / name) == slurp(b / "snapshots" / name));
    }
    const auto j = nlohmann::json::parse(slurp(a / "report.json"));
    CHECK(j["termination"] == "threshold_reached");
    CHECK(j["schedule"].size() >= 1);
    CHECK(j["refinements"].size() == ra.refinements.size());
    CHECK(j["snapshots"].size() == ra.snapshots.size());
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("one diagnostics row per cadence event") {
    RunConfig cfg = default_config(Problem::semilinear_heat);
    cfg.threshold = 1e6;
    const RunReport r = run(cfg);
    // u0(0) = 40/3: events at log10(u) = k/20 for k = 23..119, plus the initial and terminal rows
    const int first = static_cast<int>(std::floor(std::log10(40.0 / 3.0) * 20)) + 1;
    CHECK(first == 23);
    CHECK(r.series.size() == static_cast<std::size_t>(119 - first + 1 + 2));
    for (std::size_t i = 1; i + 1 < r.series.size(); ++i) {
      CHECK(std::floor(std::log10(r.series[i].value) * 20) > std::floor(std::log10(r.series[i - 1].value) * 20));
    }
    // snapshots once per decade: initial, 1e2..1e5, terminal
    CHECK(r.snapshots.size() == 6);
  }

  TEST_CASE("certificate json") {
    const auto c = monotone::verify_monotone(SchemeFamily::rkl1, 2, monotone::default_samples());
    const auto j = certificates_json(std::vector<monotone::Certificate>{c});
    CHECK(j["all_monotone"] == true);
    CHECK(j["certificates"][0]["min_coefficient"] == "0");
    CHECK(j["certificates"][0]["samples"][2] == "1/4");
  }
}
