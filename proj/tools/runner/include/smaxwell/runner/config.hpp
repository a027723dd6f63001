#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smaxwell/grid.hpp"
#include "smaxwell/splitting.hpp"

namespace smaxwell::runner {

enum class Experiment { Energy, EnergyError, Paths, Order, OracleCheck };
enum class MethodSelection { I, II, Both };

const char* experiment_name(Experiment e);
Experiment parse_experiment(const std::string& name);
std::vector<Method> methods(MethodSelection selection);

/// Every knob of one run. Defaults reproduce the reference experiment: unit
/// coefficients on [0, 1/2]^3 with 25 points per axis, tau = 1/32, T = 10,
/// lambda in {0, 0.1, 1, 10}, M = 10. The order study defaults to a desk
/// scale (11^3, T = 1/4, tau = 2^-3..2^-6, reference 2^-9, 10 paths).
struct ExperimentConfig {
  Experiment experiment = Experiment::Energy;
  MethodSelection method = MethodSelection::Both;
  Bounds bounds{{{0.0, 0.5}, {0.0, 0.5}, {0.0, 0.5}}};
  Extents counts{25, 25, 25};
  double tau = 1.0 / 32.0;
  std::vector<double> taus;  // order study
  double t_final = 10.0;
  double eps = 1.0;
  double mu = 1.0;
  std::vector<double> lambdas{0.0, 0.1, 1.0, 10.0};
  std::size_t modes = 10;
  std::uint64_t seed = 2024;
  std::size_t n_paths = 1;
  double tau_ref = 1.0 / 512.0;
  std::size_t oracle_cases = 20;
  std::vector<std::size_t> oracle_sizes{3, 5, 7, 25};
  std::filesystem::path out_dir = "results";
  int threads = 1;
  bool full_scale = false;
};

/// Thrown for invalid configuration; `field` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

ExperimentConfig default_config(Experiment experiment, bool full_scale = false);

/// Command-line values; each one that is set wins over the file.
struct Overrides {
  std::optional<std::string> experiment;
  std::optional<std::filesystem::path> out_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  bool full_scale = false;
};

/// Reads an INI-style file: top-level keys apply to every experiment and a
/// [<experiment>] section overrides them for that experiment. Keys:
/// experiment, method, bounds, counts, tau, taus, T, eps, mu, lambda, M,
/// seed, n_paths, tau_ref, oracle_cases, oracle_sizes, out, threads.
/// Numbers accept fractions ("1/32") and lists are comma separated.
ExperimentConfig resolve_config(const std::optional<std::filesystem::path>& file, const Overrides& overrides);

/// Same as resolve_config but from in-memory INI text.
ExperimentConfig resolve_config_text(const std::string& ini_text, const Overrides& overrides);

/// Throws ConfigError on the first invalid field.
void validate(const ExperimentConfig& config);

/// Number of steps T / tau; throws ConfigError when not integral.
std::size_t step_count(double t_final, double tau, const std::string& field);

/// Fully resolved configuration in the same INI dialect.
std::string to_ini(const ExperimentConfig& config);

}  // namespace smaxwell::runner
