#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hadeq/error.hpp"
#include "hadeq/experiment.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// --set key=value; the value is parsed as JSON and falls back to a string.
hadeq::Json parse_override(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
  const std::string key = kv.substr(0, eq);
  const std::string text = kv.substr(eq + 1);
  hadeq::Json value = hadeq::Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  return hadeq::Json{{key, value}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium problems on Hadamard spaces"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> sets;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--set", sets, "override a top-level scalar field, key=value");
  };
  CLI::App* check_space = app.add_subcommand("check-space", "random sweep of the space axioms");
  CLI::App* check_bif = app.add_subcommand("check-bifunction", "sampled bifunction property checks");
  CLI::App* solve = app.add_subcommand("solve", "run the configured algorithm and write the trace");
  app.add_subcommand("version", "print the version");
  add_common(check_space);
  add_common(check_bif);
  add_common(solve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends are "errors" with exit code 0.
    const int code = app.exit(e);
    return code == 0 ? hadeq::kExitOk : hadeq::kExitUsage;
  }

  if (app.got_subcommand("version")) {
    std::cout << kVersion << '\n';
    return hadeq::kExitOk;
  }

  try {
    hadeq::Json overrides = hadeq::Json::object();
    for (const auto& kv : sets) overrides.update(parse_override(kv));
    if (seed) overrides["seed"] = *seed;
    if (!out_dir.empty()) overrides["output_dir"] = out_dir;
    const hadeq::ExperimentConfig config = hadeq::load_experiment(config_path, overrides);

    if (app.got_subcommand(check_space)) return hadeq::cmd_check_space(config, std::cout);
    if (app.got_subcommand(check_bif)) return hadeq::cmd_check_bifunction(config, std::cout);
    return hadeq::cmd_solve(config, std::cout);
  } catch (const hadeq::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hadeq::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hadeq::kExitUsage;
  }
}
