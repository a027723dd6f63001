#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smaxwell/diagnostics.hpp"
#include "smaxwell/runner/config.hpp"

namespace smaxwell::runner {

struct RunSummary {
  std::vector<std::string> lines;               // one per (method, lambda) or per check
  std::vector<std::filesystem::path> outputs;   // CSVs in write order, sidecar last
  bool ok = true;                               // false iff an internal check failed
};

/// Relative energy drift allowed by the energy, energy-error and paths runs.
inline constexpr double kEnergyDriftTolerance = 1e-10;

/// Runs one experiment, writing CSVs and the resolved-config sidecar
/// "<experiment>.config.ini" into config.out_dir (created if missing).
/// Output bytes depend only on the configuration, never on config.threads.
RunSummary run_experiment(const ExperimentConfig& config);

/// Result of the coupled convergence study for one method.
struct OrderStudy {
  Method method = Method::SplittingI;
  OrderTable table;
  SlopeFit fit;
  std::vector<std::vector<double>> per_path_errors;  // [tau index][path]
};

/// Reference solution by Splitting I at tau_ref; coarse runs consume the
/// same fine path summed in blocks of tau / tau_ref.
std::vector<OrderStudy> run_order_study(const ExperimentConfig& config);

}  // namespace smaxwell::runner
