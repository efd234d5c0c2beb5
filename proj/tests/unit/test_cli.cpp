#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "tdirac/cli.hpp"
#include "tdirac/io.hpp"

using namespace tdirac;
using namespace tdirac::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kData = TDIRAC_DATA_DIR;

std::string out_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tdirac_cli_" + name);
  fs::remove_all(p);
  return p.string();
}

RunConfig quick(const std::string& command, const std::string& name) {
  RunConfig c;
  c.command = command;
  c.out = out_dir(name);
  c.solve.radius = 16;
  c.solve.dt = 1.0 / 64.0;
  c.solve.horizon = 0.5;
  c.verify_fields = 4;
  c.verify_points = 100;
  c.verify_radii = 200;
  c.bernstein_samples = 20;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const json* find_check(const json& report, const std::string& name) {
  for (const auto& c : report["checks"]) {
    if (c["name"] == name) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("config parsing") {
  const json j = {{"d", 2}, {"epsilon", 0.01}, {"nonlinearity", "x.json"}, {"bernstein_constant", 2.5}};
  const RunConfig c = RunConfig::from_json(j);
  CHECK(c.solve.d == 2);
  CHECK(c.solve.epsilon == 0.01);
  CHECK(c.bernstein_constant.value() == 2.5);
  const RunConfig again = RunConfig::from_json(c.to_json());
  CHECK(again.to_json() == c.to_json());
  CHECK_THROWS_AS(RunConfig::from_json({{"dtt", 0.1}}), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json({{"d", "two"}}), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json(json::array()), UsageError);
  RunConfig bad;
  bad.command = "verify";
  bad.solve.dt = -1.0;
  CHECK_THROWS_AS(bad.validate(), UsageError);
}

TEST_CASE("command line usage errors") {
  CHECK(run({"tdirac"}) == kUsage);
  CHECK(run({"tdirac", "frobnicate"}) == kUsage);
  CHECK(run({"tdirac", "verify", "--bogus"}) == kUsage);
  CHECK(run({"tdirac", "verify", "--config", "/nonexistent/config.json"}) == kUsage);
  CHECK(run({"tdirac", "--help"}) == kSuccess);

  const std::string dir = out_dir("unknown_key");
  fs::create_directories(dir);
  const std::string cfg = dir + "/c.json";
  std::ofstream(cfg) << R"({"d": 1, "colour": "blue"})";
  CHECK(run({"tdirac", "verify", "--config", cfg, "--out", dir}) == kUsage);
}

TEST_CASE("flags override the config file") {
  const std::string dir = out_dir("override");
  fs::create_directories(dir);
  const std::string cfg = dir + "/c.json";
  std::ofstream(cfg) << json{{"d", 2},
                             {"nonlinearity", kData + "/nonlinearities/cubic.json"},
                             {"out", dir + "/ignored"}}
                            .dump();
  const int rc = run({"tdirac", "condition-a", "--config", cfg, "--d", "1", "--out", dir});
  CHECK(rc == kSuccess);
  const json report = io::load_json(dir + "/report.json");
  CHECK(report["config"]["d"] == 1);
  CHECK(report["config"]["out"] == dir);
  CHECK(report["d"] == 1);
}

TEST_CASE("verify passes for d = 1, 2, 3") {
  for (int d = 1; d <= 3; ++d) {
    RunConfig c = quick("verify", "verify" + std::to_string(d));
    c.solve.d = d;
    const CommandResult r = run_command(c);
    CAPTURE(d);
    CHECK(r.exit_code == kSuccess);
    for (const auto& check : r.report["checks"]) {
      CAPTURE(check.dump());
      CHECK(check["status"] == "pass");
      CHECK(check["margin"].get<double>() >= 0.0);
    }
    CHECK(fs::exists(fs::path(c.out) / "report.json"));
  }
}

TEST_CASE("corrupted gamma override fails verify") {
  RunConfig c = quick("verify", "corrupt");
  c.solve.d = 2;
  json g = gamma_to_json(build_gamma(2));
  g["alpha"][0][0][0] = json::array({2.0, 0.0});
  c.gamma_override = g;
  const CommandResult r = run_command(c);
  CHECK(r.exit_code == kInvariantFailure);
  const auto& failed = r.report["failed_checks"];
  CHECK(std::find(failed.begin(), failed.end(), "clifford.anticommutator") != failed.end());

  c.gamma_override = json{{"alpha", json::array({json::array({json::array({1.0, 0.0})})})},
                          {"beta", json::array({json::array({1.0, 2.0})})}};
  CHECK(run_command(c).exit_code == kUsage);
}

TEST_CASE("d = 9 structural verify") {
  RunConfig c = quick("verify", "structural");
  c.solve.d = 9;
  c.structural = true;
  c.verify_fields = 2;
  const CommandResult r = run_command(c);
  CHECK(r.exit_code == kSuccess);
  CHECK(r.report["d0"] == 32);
  for (const char* name : {"clifford.anticommutator", "clifford.minkowski", "projector.idempotence",
                           "projector.complementarity", "projector.orthogonality",
                           "projector.symbol_square"}) {
    REQUIRE(find_check(r.report, name));
    CHECK((*find_check(r.report, name))["status"] == "pass");
  }
  CHECK((*find_check(r.report, "unitarity.free_flow"))["status"] == "skipped");
  CHECK((*find_check(r.report, "bernstein"))["status"] == "skipped");

  c.command = "solve";
  CHECK(run_command(c).exit_code == kUsage);
}

TEST_CASE("solve writes its artifacts") {
  RunConfig c = quick("solve", "solve_cubic");
  c.solve.nonlinearity = kData + "/nonlinearities/cubic.json";
  const CommandResult r = run_command(c);
  REQUIRE(r.exit_code == kSuccess);
  CHECK(r.report["status"] == "converged");
  for (const auto& it : r.report["diagnostics"]["iterations"]) {
    if (it["iteration"].get<int>() >= 2) CHECK(it["ratio"].get<double>() < 0.5);
  }
  const fs::path out(c.out);
  CHECK(fs::exists(out / "diagnostics.csv"));
  json manifest;
  const Trajectory tr = io::load_trajectory(out / "trajectory", &manifest);
  CHECK(tr.size() == c.solve.frames());
  CHECK(manifest["config"] == c.to_json());
  CHECK(manifest["diagnostics"]["iterations"].size() > 1);
  const std::string csv = slurp(out / "diagnostics.csv");
  CHECK(csv.find("defect,0,") != std::string::npos);
  CHECK(csv.find("hs,0,") != std::string::npos);
  CHECK(csv.find("ratio,0,") != std::string::npos);
}

TEST_CASE("solve outcomes") {
  SUBCASE("free flow") {
    RunConfig c = quick("solve", "solve_free");
    c.solve.nonlinearity = kData + "/nonlinearities/zero.json";
    const CommandResult r = run_command(c);
    CHECK(r.exit_code == kSuccess);
    CHECK(r.report["defect"]["max"].get<double>() <= 1e-10);
  }
  SUBCASE("large data") {
    RunConfig c = quick("solve", "solve_large");
    c.solve.nonlinearity = kData + "/nonlinearities/cubic.json";
    c.solve.epsilon = 0.9;
    c.write_frames = false;
    const CommandResult r = run_command(c);
    // Converging with a coarse-step defect over budget (1) is also a valid outcome.
    CHECK(r.exit_code != kUsage);
    CHECK(r.report.contains("defect"));
    CHECK(!r.report["diagnostics"]["iterations"].empty());
  }
  SUBCASE("input errors") {
    RunConfig c = quick("solve", "solve_errors");
    CHECK(run_command(c).exit_code == kUsage);
    c.solve.nonlinearity = "/nonexistent.json";
    CHECK(run_command(c).exit_code == kUsage);
    c.solve.d = 3;
    c.solve.radius = 4;
    c.solve.nonlinearity = kData + "/nonlinearities/cubic.json";
    CHECK(run_command(c).exit_code == kUsage);
    c.solve.d = 5;
    CHECK(run_command(c).exit_code == kUsage);
  }
}

TEST_CASE("compare-kg") {
  RunConfig c = quick("compare-kg", "kg");
  c.solve.nonlinearity = kData + "/nonlinearities/cubic.json";
  c.solve.epsilon = 0.05;
  const CommandResult r = run_command(c);
  CHECK(r.exit_code == kSuccess);
  const double d1 = r.report["distance"]["sup_relative"].get<double>();
  CHECK(d1 <= 1e-5);
  c.solve.dt /= 2.0;
  const double d2 = run_command(c).report["distance"]["sup_relative"].get<double>();
  CHECK(d1 / d2 >= 3.0);

  c.solve.nonlinearity = kData + "/nonlinearities/zero.json";
  const CommandResult z = run_command(c);
  CHECK(z.exit_code == kSuccess);
  CHECK(z.report["distance"]["sup_relative"].get<double>() <= 1e-10);
}

TEST_CASE("condition-a exit codes") {
  RunConfig c = quick("condition-a", "cond");
  c.solve.nonlinearity = kData + "/nonlinearities/cubic.json";
  CHECK(run_command(c).exit_code == kSuccess);
  c.solve.nonlinearity = kData + "/nonlinearities/geometric_r0_1.json";
  const CommandResult g = run_command(c);
  CHECK(g.exit_code == kConditionAFail);
  CHECK(g.report["verdict"] == "fail");
  CHECK(g.report["bernstein_source"] == "measured");
  c.solve.nonlinearity = kData + "/nonlinearities/zero.json";
  CHECK(run_command(c).exit_code == kUsage);
  const std::string dir = out_dir("cond_bad");
  fs::create_directories(dir);
  std::ofstream(dir + "/bad.json") << R"({"d0": 2, "terms": [{"p": [1]}]})";
  c.solve.nonlinearity = dir + "/bad.json";
  CHECK(run_command(c).exit_code == kUsage);
}

TEST_CASE("identical config and seed give byte-identical reports") {
  for (const char* command : {"verify", "solve", "condition-a"}) {
    RunConfig c = quick(command, std::string("det_") + command);
    c.solve.nonlinearity = kData + "/nonlinearities/cubic.json";
    c.write_frames = false;
    run_command(c);
    const std::string first = slurp(fs::path(c.out) / "report.json");
    run_command(c);
    CHECK(slurp(fs::path(c.out) / "report.json") == first);
    CHECK(!first.empty());
  }
}
