#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverError = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace ascbem;
  CLI::App app{"Helmholtz BEM with asymptotic compression"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "flat key = value config file");
    sub->add_option("overrides", overrides, "key=value pairs applied after the file");
  };
  CLI::App* solve = app.add_subcommand("solve", "dense solve and optional compression");
  CLI::App* sweep = app.add_subcommand("sweep", "recompression frequency sweep");
  CLI::App* corr = app.add_subcommand("correlations", "write the correlation grid");
  add_common(solve);
  add_common(sweep);
  add_common(corr);
  CLI::App* keys = app.add_subcommand("keys", "list accepted config keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (keys->parsed()) {
    for (auto key : cli::known_keys()) std::cout << key << '\n';
    return 0;
  }

  try {
    cli::RunConfig cfg = config_path.empty() ? cli::RunConfig{} : cli::load_run_config(config_path);
    cli::apply_overrides(cfg, overrides);
    if (solve->parsed()) {
      const MetricsRecord m = cli::cmd_solve(cfg);
      write_metrics(std::cout, m);
    } else if (sweep->parsed()) {
      write_metrics(std::cout, cli::cmd_sweep(cfg));
    } else if (corr->parsed()) {
      const CorrelationMatrix R = cli::cmd_correlations(cfg);
      std::cout << "correlations " << R.rows() << " x " << R.cols() << " -> "
                << (cfg.output / "corr.txt").string() << '\n';
    }
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return 0;
}
