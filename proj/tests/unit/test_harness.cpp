#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "nsfstab/harness.hpp"

using namespace nsfstab;
using nlohmann::json;

namespace {

std::string input_error(const std::string& text) {
  try {
    (void)parse_config(text, "cfg");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::kInput);
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("nsfstab_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("empty config takes water-like defaults") {
  const RunConfig c = parse_config("{}");
  CHECK(c.nx == 64);
  CHECK(c.material.rho == 1000.0);
  CHECK(c.material.cv_ref == doctest::Approx(4180.0));
  CHECK(c.m == 0.6);
  CHECK(c.n == 0.9);
  CHECK(c.initial.modes.empty());
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("config values are read and round-trip through JSON") {
  const std::string text = R"({
    "grid": {"nx": 20, "ny": 12, "lx": 2.0, "ly": 1.5},
    "material": {"mu": 0.05, "kappa_ref": 300},
    "boundary": {"preset": "two_wall", "cold": 280, "hot": 320},
    "initial": {"modes": [{"k": 1, "l": 2, "amplitude": 0.5}], "peak_speed": 0.02,
                "bumps": [{"x": 0.5, "y": 0.5, "width": 0.1, "amplitude": 5}]},
    "seed": 42,
    "exponents": {"m": 0.45, "n": 0.8},
    "l_values": [3, 4, 5],
    "t_end": 20, "sample_interval": 2,
    "step_control": {"cfl_safety": 0.3},
    "output": {"dir": "somewhere"}
  })";
  const RunConfig c = parse_config(text);
  CHECK(c.nx == 20);
  CHECK(c.ly == 1.5);
  CHECK(c.material.mu == 0.05);
  CHECK(c.initial.seed == 42);
  CHECK(c.initial.modes.size() == 1);
  CHECK(c.l_values.size() == 3);
  CHECK(c.step.cfl_safety == 0.3);
  CHECK(c.output_dir == "somewhere");
  const RunConfig again = parse_config(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));
}

TEST_CASE("invalid exponent pair names the violated constraint") {
  const std::string msg = input_error(R"({"exponents": {"m": 0.3, "n": 0.8}})");
  CHECK(msg.find("m > n/2 violated") != std::string::npos);
  CHECK(!input_error(R"({"exponents": {"m": 0.9, "n": 0.6}})").empty());
}

TEST_CASE("malformed configs are input errors") {
  CHECK(input_error(R"({"grid": {"nx": 16, "nz": 4}})").find("grid.nz") != std::string::npos);
  CHECK(input_error(R"({"grid": {"nx": "sixteen"}})").find("grid.nx") != std::string::npos);
  CHECK(input_error(R"({"grid": {"nx": 16.5}})").find("integer") != std::string::npos);
  CHECK(!input_error(R"({"boundary": {"preset": "constant", "base": -5}})").empty());
  CHECK(!input_error(R"({"boundary": {"preset": "spiral"}})").empty());
  CHECK(!input_error(R"({"material": {"mu": 0}})").empty());
  CHECK(!input_error(R"({"t_end": 10, "sample_interval": 3})").empty());
  CHECK(!input_error(R"({"l_values": [2]})").empty());
  CHECK(!input_error(R"({"seed": -1})").empty());
  CHECK(!input_error(R"({"step_control": {"cfl_safety": 1.5}})").empty());
  const std::string syntax = input_error("{\n  \"grid\": {\n    \"nx\": 16,\n  }\n}");
  CHECK(syntax.find("line 4") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorCategory::kInput) == 2);
  CHECK(exit_code_for(ErrorCategory::kDomain) == 2);
  CHECK(exit_code_for(ErrorCategory::kBlowup) == 3);
  CHECK(exit_code_for(ErrorCategory::kPositivity) == 3);
  RunReport r;
  CHECK(exit_code_for(r) == 0);
  r.add({"x", "x", false, 0.0, 0.0, ""});
  CHECK(exit_code_for(r) == 1);
  r.error_category = ErrorCategory::kSolver;
  CHECK(exit_code_for(r) == 3);
}

TEST_CASE("report JSON carries the schema version") {
  RunReport r;
  r.command = "run";
  r.add({"5", "envelope", true, 0.5, 1.05, ""});
  r.values.push_back({"K", 0.25});
  const json j = json::parse(r.to_json());
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["command"] == "run");
  CHECK(j["criteria"].size() == 1);
  CHECK(j["criteria"][0]["passed"] == true);
}

TEST_CASE("zero perturbation run passes trivially and writes its artifacts") {
  RunConfig c = parse_config(R"({"grid": {"nx": 12, "ny": 12},
    "boundary": {"preset": "sinusoidal_arc", "base": 300, "amplitude": 20},
    "t_end": 5, "sample_interval": 1})");
  c.output_dir = scratch("zero").string();
  const ExperimentResult r = run_experiment(c);
  CHECK_FALSE(r.report.error);
  CHECK(r.report.all_passed());
  CHECK(r.trace.samples.size() == 6);
  for (const auto& s : r.trace.samples) CHECK(s.y_mn == 0.0);
  CHECK(std::filesystem::exists(std::filesystem::path(c.output_dir) / "trace.csv"));
  const json summary = json::parse(std::ifstream(std::filesystem::path(c.output_dir) / "summary.json"));
  CHECK(summary["schema_version"] == kSchemaVersion);

  std::ostringstream csv;
  write_trace_csv(r.trace, csv);
  const std::string head = csv.str().substr(0, csv.str().find('\n'));
  CHECK(head.rfind("t,", 0) == 0);
  CHECK(head.find("rel_entropy_L3") != std::string::npos);
}

TEST_CASE("unstable step size is reported as a numerical failure") {
  RunConfig c = parse_config(R"({"grid": {"nx": 24, "ny": 24},
    "material": {"mu": 0.1, "kappa_ref": 418},
    "boundary": {"preset": "sinusoidal_arc", "base": 300, "amplitude": 20},
    "initial": {"modes": [{"k": 1, "l": 1, "amplitude": 1}], "peak_speed": 0.01,
                "bumps": [{"x": 0.5, "y": 0.5, "width": 0.1, "amplitude": 30}]},
    "t_end": 200, "sample_interval": 10,
    "step_control": {"cfl_safety": 10, "allow_unstable": true}})");
  c.output_dir = scratch("unstable").string();
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.report.error);
  REQUIRE(r.report.error_category);
  CHECK((*r.report.error_category == ErrorCategory::kBlowup || *r.report.error_category == ErrorCategory::kPositivity));
  CHECK(exit_code_for(r.report) == 3);
  CHECK(std::filesystem::exists(std::filesystem::path(c.output_dir) / "summary.json"));
}

TEST_CASE("snapshots are written as CSV with a JSON sidecar") {
  const auto dir = scratch("snap");
  write_snapshot(dir.string(), "theta", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}, 3, 2, 1.5);
  std::ifstream is(dir / "theta.csv");
  std::string row;
  std::getline(is, row);
  CHECK(row == "1,2,3");
  const json meta = json::parse(std::ifstream(dir / "theta.json"));
  CHECK(meta["cols"] == 3);
  CHECK(meta["t"] == 1.5);
}

TEST_CASE("steady report on a linear profile") {
  const RunConfig c = parse_config(R"({"grid": {"nx": 16, "ny": 16},
    "boundary": {"preset": "linear_x", "base": 280, "amplitude": 40}})");
  const RunReport r = steady_report(c);
  CHECK_FALSE(r.error);
  CHECK(r.all_passed());
}
