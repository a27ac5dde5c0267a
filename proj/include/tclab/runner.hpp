#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tclab {

struct RunOptions {
  std::filesystem::path out_dir = "tclab_out";
  /// Relative curve paths in scenarios resolve against this directory.
  std::filesystem::path base_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> quad_order;
  int jobs = 1;
};

struct SummaryRow {
  std::string scenario;
  std::string kind;
  int pass = 0;
  int fail = 0;
  std::optional<double> epsilon13;
  std::optional<double> gamma0;
  std::optional<double> c;
  std::string error;
};

struct ScenarioOutput {
  SummaryRow summary;
  std::string file_name;
  std::string content;
};

struct RunResult {
  std::vector<ScenarioOutput> scenarios;
  /// 0 all pass, 1 some verdict failed or a scenario raised.
  int exit_code = 0;
};

/// Reads a JSON config; throws ParseError on bad syntax and ConfigError on a
/// missing or malformed scenario list.
nlohmann::json load_config(const std::filesystem::path& path);

/// Checks scenario names, kinds and field types. Throws ConfigError.
void validate_config(const nlohmann::json& config);

/// FNV-1a over the canonical dump of the scenario with the effective seed and order.
std::uint64_t config_hash(const nlohmann::json& scenario, std::uint64_t seed, int quad_order);

/// Seed of the scenario generator: its own "seed" if present, otherwise
/// splitmix64 of the run seed mixed with the FNV-1a hash of the name.
std::uint64_t scenario_seed(const nlohmann::json& scenario, std::uint64_t run_seed);

/// Runs one scenario. Throws ScenarioError naming the scenario when a module raises.
ScenarioOutput run_scenario(const nlohmann::json& scenario, std::uint64_t run_seed, int quad_order,
                            const std::filesystem::path& base_dir);

/// Runs every scenario (in parallel up to opts.jobs), writes one artifact per
/// scenario and summary.csv into opts.out_dir, and returns the results in config order.
RunResult run_config(const nlohmann::json& config, const RunOptions& opts);

std::string format_summary(const std::vector<ScenarioOutput>& outputs);

/// %.17g, the round-trip format used in every artifact.
std::string format_double(double x);

}  // namespace tclab
