// Experiment driver: energy traces, energy errors, multi-path traces,
// temporal convergence tables and the dense-oracle check suite.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "smaxwell/runner/config.hpp"
#include "smaxwell/runner/experiments.hpp"

int main(int argc, char** argv) {
  using namespace smaxwell::runner;

  CLI::App app{"Energy-preserving splitting solvers for 3D stochastic Maxwell equations"};
  std::string config_path;
  Overrides overrides;
  std::string experiment, out_dir;
  int threads = 0;
  std::uint64_t seed = 0;

  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--experiment", experiment, "energy | energy-error | paths | order | oracle-check");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "noise seed");
  app.add_flag("--full-scale", overrides.full_scale,
               "order study on the 25^3 grid with tau = 2^-4..2^-8 (about 1 s per path per core)");
  CLI11_PARSE(app, argc, argv);

  if (!experiment.empty()) overrides.experiment = experiment;
  if (!out_dir.empty()) overrides.out_dir = out_dir;
  if (app.count("--threads")) overrides.threads = threads;
  if (app.count("--seed")) overrides.seed = seed;

  ExperimentConfig config;
  try {
    config = resolve_config(config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path),
                            overrides);
  } catch (const ConfigError& ex) {
    std::cerr << "invalid configuration field '" << ex.field() << "': " << ex.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    const RunSummary summary = run_experiment(config);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    for (const auto& line : summary.lines) std::cout << line << '\n';
    std::cout << experiment_name(config.experiment) << (summary.ok ? " completed" : " FAILED") << " in "
              << elapsed.count() << " s; " << summary.outputs.size() << " files in " << config.out_dir.string()
              << '\n';
    return summary.ok ? 0 : 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
}
