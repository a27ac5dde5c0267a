#include "tclab/errors.hpp"
#include "tclab/runner.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

struct Common {
  std::string out = "tclab_out";
  std::optional<std::uint64_t> seed;
  std::optional<int> quad_order;
  int jobs = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_option("--seed", c.seed, "Run seed");
  app->add_option("--quad-order", c.quad_order, "Gauss-Legendre order")->check(CLI::Range(2, 128));
  app->add_option("--jobs", c.jobs, "Scenarios run in parallel")->check(CLI::PositiveNumber);
}

// Inline values are JSON literals when they parse, bare strings otherwise.
json inline_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

struct Shortcut {
  std::string kind;
  std::string name;
  std::map<std::string, std::string> values;
  std::vector<std::string> sets;
};

void add_field(CLI::App* app, Shortcut& s, const std::string& flag, const std::string& field, const std::string& help) {
  app->add_option("--" + flag, s.values[field], help);
}

int execute(const json& config, const Common& c, const std::filesystem::path& base) {
  tclab::RunOptions opts;
  opts.out_dir = c.out;
  opts.base_dir = base;
  opts.seed = c.seed;
  opts.quad_order = c.quad_order;
  opts.jobs = c.jobs;
  const tclab::RunResult result = tclab::run_config(config, opts);
  std::cout << tclab::format_summary(result.scenarios);
  return result.exit_code;
}

json shortcut_config(const Shortcut& s) {
  json scenario = {{"name", s.name.empty() ? s.kind : s.name}, {"kind", s.kind}};
  for (const auto& [field, value] : s.values)
    if (!value.empty()) scenario[field] = inline_value(value);
  for (const std::string& kv : s.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      tclab::fail(tclab::ErrorCode::ConfigError, "--set expects key=value, got '" + kv + "'");
    scenario[kv.substr(0, eq)] = inline_value(kv.substr(eq + 1));
  }
  return json{{"scenarios", json::array({scenario})}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for area-minimizing cones and currents"};
  app.require_subcommand(1);

  Common common;
  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "Run every scenario of a JSON config");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  add_common(run, common);

  std::vector<Shortcut> shortcuts = {{"epi", "", {}, {}},
                                     {"decay", "", {}, {}},
                                     {"flat", "", {}, {}},
                                     {"calib", "", {}, {}},
                                     {"split", "", {}, {}}};
  std::map<std::string, CLI::App*> subs;
  for (Shortcut& s : shortcuts) {
    CLI::App* sub = app.add_subcommand(s.kind, "Run a single " + s.kind + " scenario from inline flags");
    add_common(sub, common);
    sub->add_option("--name", s.name, "Scenario name, also the artifact file stem");
    sub->add_option("--set", s.sets, "Extra field as key=value (value read as JSON when possible)");
    subs[s.kind] = sub;
  }
  Shortcut& epi = shortcuts[0];
  add_field(subs["epi"], epi, "Q", "Q", "Winding number or JSON list");
  add_field(subs["epi"], epi, "n", "n", "Codimension");
  add_field(subs["epi"], epi, "modes", "modes", "Mode indices, JSON list");
  add_field(subs["epi"], epi, "mode-multiples", "mode_multiples", "Mode indices as multiples of Q, JSON list");
  add_field(subs["epi"], epi, "amplitudes", "amplitudes", "Amplitudes, JSON list");
  add_field(subs["epi"], epi, "random", "random", "Random family as a JSON object");
  add_field(subs["epi"], epi, "curves", "curves", "Curve spec files, JSON list");
  Shortcut& decay = shortcuts[1];
  add_field(subs["decay"], decay, "source", "source", "ode, harmonic or cone");
  add_field(subs["decay"], decay, "Q", "Q", "Winding number");
  add_field(subs["decay"], decay, "mode", "mode", "Mode index");
  add_field(subs["decay"], decay, "amplitude", "amplitude", "Mode amplitude");
  add_field(subs["decay"], decay, "count", "count", "Number of radii");
  add_field(subs["decay"], decay, "ratio", "ratio", "Ratio of consecutive radii");
  add_field(subs["decay"], decay, "constants", "constants", "ODE constants as a JSON object");
  Shortcut& flat = shortcuts[2];
  add_field(subs["flat"], flat, "Q", "Q", "Winding number");
  add_field(subs["flat"], flat, "mode", "mode", "Mode index");
  add_field(subs["flat"], flat, "amplitude", "amplitude", "Mode amplitude");
  add_field(subs["flat"], flat, "count", "count", "Dyadic radii per sweep");
  add_field(subs["flat"], flat, "ratios", "ratios", "Inner to outer radius ratios, JSON list");
  Shortcut& calib = shortcuts[3];
  add_field(subs["calib"], calib, "surface", "surface", "disk, twisted_disk or equator");
  add_field(subs["calib"], calib, "omega", "omega", "Semicalibration constant");
  add_field(subs["calib"], calib, "form-scale", "form_scale", "Multiplier on the form");
  add_field(subs["calib"], calib, "probes", "probes", "Number of probes");
  add_field(subs["calib"], calib, "twist", "twist", "Twist rate of twisted_disk");
  Shortcut& split = shortcuts[4];
  add_field(subs["split"], split, "n", "n", "Codimension");
  add_field(subs["split"], split, "r", "r", "Cluster radius");
  add_field(subs["split"], split, "components", "components", "Components as a JSON list of objects");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      const json config = tclab::load_config(config_path);
      return execute(config, common, std::filesystem::path(config_path).parent_path());
    }
    for (const Shortcut& s : shortcuts)
      if (subs[s.kind]->parsed()) return execute(shortcut_config(s), common, std::filesystem::current_path());
  } catch (const tclab::Error& e) {
    std::cerr << "tclab: " << e.what() << "\n";
    return e.code() == tclab::ErrorCode::ConfigError || e.code() == tclab::ErrorCode::ParseError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "tclab: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
