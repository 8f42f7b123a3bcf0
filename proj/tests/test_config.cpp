#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kerr/config.hpp"
#include "kerr/figures.hpp"

using namespace kerr;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("kerr_config_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("a full config parses", "[config]") {
  const auto c = parse_config(R"({"l": 5, "h": 2, "nu": 50, "theta": 0.1, "chi": 2.0, "t_start": 0.1, "t_end": 0.6,
    "grid_points": 301, "quadrature": "p", "moments": [10, 3], "entropy": true, "zeta": 0.75,
    "wigner_times": [0.2], "wigner_points": 81, "output_dir": "out", "name": "run", "n_max": 150})");
  CHECK(c.initial.l == 5);
  CHECK(c.initial.h == 2);
  CHECK(c.initial.nu == 50.0);
  CHECK(c.chi == 2.0);
  CHECK(c.quadrature == Quadrature::p);
  CHECK(c.moments == std::vector<int>{10, 3});
  CHECK(c.pair.eta == Approx(1.5));
  CHECK(c.wigner_times == std::vector<double>{0.2});
  CHECK(c.n_max == 150);
}

TEST_CASE("defaults fill omitted fields", "[config]") {
  const auto c = parse_config(R"({"moments": [4]})");
  CHECK(c.initial.l == 1);
  CHECK(c.grid_points == 2001);
  CHECK(c.t_end == 1.0);
  CHECK(c.pair.zeta == Approx(2.0 / 3.0));
  CHECK(c.output_dir == ".");
}

TEST_CASE("errors name the offending field", "[config][errors]") {
  struct Bad {
    const char* text;
    const char* field;
  };
  for (const Bad b : {Bad{R"({"moments": [4], "l": 0})", "l:"}, Bad{R"({"moments": [4], "h": 3, "l": 2})", "h:"},
                      Bad{R"({"moments": [4], "nu": -1})", "nu:"}, Bad{R"({"moments": [4], "chi": 0})", "chi:"},
                      Bad{R"({"moments": [4], "t_end": 1.5})", "t_end:"},
                      Bad{R"({"moments": [4], "t_start": 0.5, "t_end": 0.2})", "t_end:"},
                      Bad{R"({"moments": [0]})", "moments:"}, Bad{R"({"moments": "x4"})", "moments:"},
                      Bad{R"({"moments": [4], "nu": "lots"})", "nu:"},
                      Bad{R"({"moments": [4], "quadrature": "y"})", "quadrature:"},
                      Bad{R"({"entropy": true, "zeta": 0.7, "eta": 2})", "zeta/eta:"},
                      Bad{R"({"wigner_times": [1.2]})", "wigner_times:"},
                      Bad{R"({"moments": [4], "colour": "red"})", "colour:"},
                      Bad{R"({"moments": [4], "n_max": -3})", "n_max:"}, Bad{R"([1, 2])", "config:"},
                      Bad{R"({"moments": [4],)", "syntax:"}}) {
    CAPTURE(b.text);
    CHECK_THROWS_WITH(parse_config(b.text), ContainsSubstring(b.field));
  }
}

TEST_CASE("an empty observable list is rejected", "[config][errors]") {
  CHECK_THROWS_AS(parse_config(R"({"l": 2, "nu": 10})"), ConfigError);
  CHECK_THROWS_WITH(parse_config(R"({"moments": []})"), ContainsSubstring("observable list is empty"));
}

TEST_CASE("load_config reports the path", "[config][errors]") {
  CHECK_THROWS_WITH(load_config("/nonexistent/cfg.json"), ContainsSubstring("/nonexistent/cfg.json"));
  const auto dir = scratch_dir("load");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({"moments": [4], "l": -2})";
  CHECK_THROWS_WITH(load_config((dir / "bad.json").string()), ContainsSubstring("bad.json: l:"));
  fs::remove_all(dir);
}

TEST_CASE("custom run writes series, burst report and portrait", "[config][run]") {
  const auto dir = scratch_dir("run");
  auto cfg = parse_config(R"({"l": 2, "nu": 6, "moments": [2], "entropy": true, "wigner_times": [0.25],
                              "grid_points": 201, "wigner_points": 41, "name": "demo"})");
  cfg.output_dir = dir.string();
  std::ostringstream log;
  const auto files = run_custom(cfg, RunOptions{}, log);
  CHECK(files.size() == 4);
  for (const char* f : {"demo_x2.csv", "demo_renyi.csv", "demo_wigner_t0.250000.dat", "demo_x2_bursts.json"})
    CHECK(fs::exists(dir / f));

  const auto csv = slurp(dir / "demo_x2.csv");
  CHECK_THAT(csv, ContainsSubstring("# l = 2"));
  CHECK_THAT(csv, ContainsSubstring("# grid_points = 201"));
  const auto report = nlohmann::json::parse(slurp(dir / "demo_x2_bursts.json"));
  CHECK(report.contains("matched"));
  CHECK(report["matched"].size() == 3);
  CHECK_THAT(log.str(), ContainsSubstring("wrote"));
  fs::remove_all(dir);
}

TEST_CASE("custom runs are deterministic", "[config][run]") {
  const auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
  auto cfg = parse_config(R"({"l": 3, "nu": 5, "moments": [3], "entropy": true, "grid_points": 151, "name": "d"})");
  std::ostringstream log;
  cfg.output_dir = a.string();
  run_custom(cfg, RunOptions{}, log);
  cfg.output_dir = b.string();
  RunOptions threaded;
  threaded.threads = 3;
  run_custom(cfg, threaded, log);
  for (const char* f : {"d_x3.csv", "d_renyi.csv", "d_x3_bursts.json"}) CHECK(slurp(a / f) == slurp(b / f));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("unknown figure names are rejected", "[config][errors]") {
  std::ostringstream log;
  CHECK_THROWS_AS(run_figure("fig12", RunOptions{}, log), std::invalid_argument);
  CHECK(figure_names().size() == 11);
}

TEST_CASE("unwritable output directory is reported", "[config][errors]") {
  auto cfg = parse_config(R"({"moments": [1], "grid_points": 120, "nu": 2})");
  cfg.output_dir = "/proc/kerr_cannot_write_here";
  std::ostringstream log;
  CHECK_THROWS_WITH(run_custom(cfg, RunOptions{}, log), ContainsSubstring("/proc/kerr_cannot_write_here"));
}
