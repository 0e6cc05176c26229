// asep-hydro: runs one experiment described by a JSON config and writes
// report.json plus plot-ready CSV files. Exit code 0 iff every asserted
// property passes; 1 if one fails; 2 on usage, config or parameter errors.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "asep/config.hpp"
#include "asep/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Open-boundary exclusion process simulator and hydrodynamic-limit solvers"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  bool unsafe = false;

  for (const auto& kind : asep::experiment_kinds()) {
    auto* sub = app.add_subcommand(kind, "run a '" + kind + "' experiment");
    sub->add_option("--config", config_path, "experiment config (JSON), or a previous report.json")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--workers", workers, "worker threads for replicas")->check(CLI::PositiveNumber);
    sub->add_flag("--unsafe-params", unsafe,
                  "allow kappa / kappa' outside the proven windows (no theorem coverage)");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string kind = app.get_subcommands().front()->get_name();

  try {
    std::ifstream in(config_path);
    const auto raw = nlohmann::json::parse(in);
    auto config = asep::parse_config(raw);
    if (config.kind != kind)
      throw asep::ConfigError("config kind '" + config.kind + "' does not match command '" + kind + "'");
    if (seed) config.seed = *seed;

    const auto check = unsafe ? asep::ParamCheck::relaxed : asep::ParamCheck::strict;
    const auto report = asep::run_experiment(config, out_dir, workers, check);

    for (const auto& a : report["assertions"])
      std::cout << (a["passed"].get<bool>() ? "PASS " : "FAIL ") << a["name"].get<std::string>() << ": "
                << a["detail"].get<std::string>() << '\n';
    std::cout << (report["passed"].get<bool>() ? "passed" : "failed") << " -> " << out_dir
              << "/report.json\n";
    return report["passed"].get<bool>() ? 0 : 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: invalid JSON: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 2;
}
