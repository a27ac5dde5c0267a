#include "tclab/errors.hpp"
#include "tclab/runner.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tclab;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("tclab_runner_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ErrorCode config_code(const json& config) {
  try {
    validate_config(config);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Runner, ValidationRejectsMalformedConfigs) {
  EXPECT_EQ(config_code(json::array()), ErrorCode::ConfigError);
  EXPECT_EQ(config_code(json{{"scenarios", 3}}), ErrorCode::ConfigError);
  EXPECT_EQ(config_code(json::parse(R"({"scenarios": [{"kind": "epi"}]})")), ErrorCode::ConfigError);
  EXPECT_EQ(config_code(json::parse(R"({"scenarios": [{"name": "a", "kind": "nope"}]})")), ErrorCode::ConfigError);
  EXPECT_EQ(config_code(json::parse(R"({"scenarios": [{"name": "a", "kind": "epi", "Qs": 1}]})")),
            ErrorCode::ConfigError);
  EXPECT_EQ(config_code(json::parse(R"({"scenarios": [{"name": "a/b", "kind": "epi"}]})")), ErrorCode::ConfigError);
  EXPECT_EQ(config_code(json::parse(
                R"({"scenarios": [{"name": "a", "kind": "epi"}, {"name": "a", "kind": "flat"}]})")),
            ErrorCode::ConfigError);
  EXPECT_NO_THROW(validate_config(json::parse(R"({"seed": 4, "scenarios": []})")));
}

TEST(Runner, LoadConfigDistinguishesSyntaxErrors) {
  const auto dir = scratch("load");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bad.json") << "{\"scenarios\": [";
  try {
    load_config(dir / "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
  std::filesystem::remove_all(dir);
}

TEST(Runner, HashAndSeedsAreStable) {
  const json s = json::parse(R"({"name": "x", "kind": "epi"})");
  EXPECT_EQ(config_hash(s, 1, 32), config_hash(s, 1, 32));
  EXPECT_NE(config_hash(s, 1, 32), config_hash(s, 2, 32));
  EXPECT_NE(config_hash(s, 1, 32), config_hash(s, 1, 16));
  EXPECT_EQ(scenario_seed(s, 5), scenario_seed(s, 5));
  EXPECT_NE(scenario_seed(s, 5), scenario_seed(s, 6));
  EXPECT_EQ(scenario_seed(json::parse(R"({"name": "x", "kind": "epi", "seed": 77})"), 5), 77u);
}

TEST(Runner, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Runner, EpiSweepWritesCsvWithMetadata) {
  const json config = json::parse(
      R"({"seed": 1, "scenarios": [{"name": "sweep", "kind": "epi", "Q": [1, 2], "mode_multiples": [2], "amplitudes": [1e-2]}]})");
  RunOptions opts;
  opts.out_dir = scratch("epi");
  const RunResult r = run_config(config, opts);
  EXPECT_EQ(r.exit_code, 0);
  ASSERT_EQ(r.scenarios.size(), 1u);
  EXPECT_EQ(r.scenarios[0].summary.pass, 2);
  ASSERT_TRUE(r.scenarios[0].summary.epsilon13.has_value());
  EXPECT_NEAR(*r.scenarios[0].summary.epsilon13, 0.2, 1e-4);
  const std::string csv = slurp(opts.out_dir / "sweep.csv");
  EXPECT_EQ(csv.rfind("Q,n,modes,amplitude,raw_excess,optimal_excess,cone_gap,competitor_gap,ratio,verdict\n", 0), 0u);
  EXPECT_NE(csv.find("\n# config_hash="), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(opts.out_dir / "summary.csv"));
  std::filesystem::remove_all(opts.out_dir);
}

TEST(Runner, ComassViolationFailsWithWitness) {
  const json config =
      json::parse(R"({"scenarios": [{"name": "c", "kind": "calib", "surface": "disk", "form_scale": 1.5}]})");
  RunOptions opts;
  opts.out_dir = scratch("calib");
  const RunResult r = run_config(config, opts);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(slurp(opts.out_dir / "c.csv").find("\ncomass@"), std::string::npos);
  std::filesystem::remove_all(opts.out_dir);
}

TEST(Runner, ModuleErrorsBecomeScenarioFailures) {
  const json config =
      json::parse(R"({"scenarios": [{"name": "steep", "kind": "flat", "Q": 1, "mode": 3, "amplitude": 0.5}]})");
  RunOptions opts;
  opts.out_dir = scratch("steep");
  const RunResult r = run_config(config, opts);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.scenarios[0].summary.error.find("ScenarioError"), std::string::npos);
  std::filesystem::remove_all(opts.out_dir);
}

TEST(Runner, BadFieldTypeIsConfigError) {
  const json config = json::parse(R"({"scenarios": [{"name": "d", "kind": "decay", "Q": "two"}]})");
  RunOptions opts;
  opts.out_dir = scratch("type");
  try {
    run_config(config, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
  }
  std::filesystem::remove_all(opts.out_dir);
}

TEST(Runner, SplitWritesJson) {
  const json config = json::parse(R"({"scenarios": [{"name": "s", "kind": "split", "components": [{"Q": 1}, {"Q": 2}]}]})");
  RunOptions opts;
  opts.out_dir = scratch("split");
  const RunResult r = run_config(config, opts);
  EXPECT_EQ(r.exit_code, 0);
  const json doc = json::parse(slurp(opts.out_dir / "s.json"));
  EXPECT_EQ(doc["total_q"], 3);
  EXPECT_EQ(doc["clusters"].size(), 2u);
  EXPECT_EQ(doc["verdict"], "PASS");
  std::filesystem::remove_all(opts.out_dir);
}
