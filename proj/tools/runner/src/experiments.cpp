#include "smaxwell/runner/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

#include "smaxwell/dense_oracle.hpp"
#include "smaxwell/noise.hpp"
#include "smaxwell/parallel.hpp"
#include "smaxwell/runner/csv.hpp"
#include "smaxwell/splitting.hpp"

namespace smaxwell::runner {

namespace {

namespace fs = std::filesystem;

std::string short_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Grid make_grid(const ExperimentConfig& c, double tau) {
  return build_grid(c.bounds, c.counts, tau, step_count(c.t_final, tau, "tau"));
}

void prepare_output(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_sidecar(const ExperimentConfig& c, RunSummary& summary) {
  const fs::path path = c.out_dir / (std::string(experiment_name(c.experiment)) + ".config.ini");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_ini(c);
  if (!out) throw std::runtime_error("write failed for " + path.string());
  summary.outputs.push_back(path);
}

// Runs fn(i) for i in [0, count) in parallel, rethrowing the first failure
// (lowest index) after the loop.
template <class Fn>
void parallel_jobs(std::size_t count, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct TraceJob {
  Method method;
  double lambda;
  std::uint64_t path_id;
  EnergyTrace trace;
  bool finite = true;
};

std::vector<TraceJob> run_traces(const ExperimentConfig& c, std::size_t paths) {
  const Grid grid = make_grid(c, c.tau);
  const auto tables = std::make_shared<const BasisTables>(precompute_basis(grid, c.modes));
  const FieldState initial = init_fields(grid, init::PlaneWave{});

  std::vector<TraceJob> jobs;
  for (Method m : methods(c.method)) {
    for (double lambda : c.lambdas) {
      for (std::uint64_t p = 0; p < paths; ++p) jobs.push_back({m, lambda, p, {}, true});
    }
  }
  parallel_jobs(jobs.size(), [&](std::size_t i) {
    TraceJob& job = jobs[i];
    const Medium medium = make_medium(c.eps, c.mu, job.lambda);
    const SampledNoise noise(tables, grid.tau(), NoiseSpec{c.modes, c.seed, job.path_id}, grid.n_steps());
    auto result = evolve(job.method, initial, noise, grid, medium, grid.n_steps());
    job.finite = result.state.all_finite();
    job.trace = std::move(result.energy);
  });
  return jobs;
}

std::string drift_line(const char* experiment, const TraceJob& job, bool with_path) {
  std::ostringstream s;
  s << experiment << " method=" << method_name(job.method) << " lambda=" << short_number(job.lambda);
  if (with_path) s << " path=" << job.path_id;
  const double drift = job.trace.max_relative_drift();
  s << " max_rel_energy_drift=" << format_double(drift)
    << " max_abs_energy_drift=" << format_double(job.trace.max_absolute_drift());
  s << ((drift <= kEnergyDriftTolerance && job.finite) ? " ok" : " FAILED");
  return s.str();
}

RunSummary run_energy(const ExperimentConfig& c, bool error_columns) {
  RunSummary summary;
  const char* name = experiment_name(c.experiment);
  for (const TraceJob& job : run_traces(c, 1)) {
    Table table;
    table.header = error_columns ? std::vector<std::string>{"t", "dH"} : std::vector<std::string>{"t", "H"};
    const double h0 = job.trace.values.front();
    for (std::size_t n = 0; n < job.trace.size(); ++n) {
      table.rows.push_back({job.trace.times[n], error_columns ? job.trace.values[n] - h0 : job.trace.values[n]});
    }
    const fs::path path = c.out_dir / (std::string(error_columns ? "energy_error_" : "energy_") +
                                       method_name(job.method) + "_lambda" + short_number(job.lambda) + ".csv");
    emit_csv(table, path);
    summary.outputs.push_back(path);
    summary.lines.push_back(drift_line(name, job, false));
    summary.ok = summary.ok && job.finite && job.trace.max_relative_drift() <= kEnergyDriftTolerance;
  }
  return summary;
}

RunSummary run_paths(const ExperimentConfig& c) {
  RunSummary summary;
  for (const TraceJob& job : run_traces(c, c.n_paths)) {
    Table table;
    table.header = {"t", "H", "dH"};
    const double h0 = job.trace.values.front();
    for (std::size_t n = 0; n < job.trace.size(); ++n) {
      table.rows.push_back({job.trace.times[n], job.trace.values[n], job.trace.values[n] - h0});
    }
    const fs::path path = c.out_dir / (std::string("paths_") + method_name(job.method) + "_lambda" +
                                       short_number(job.lambda) + "_path" + std::to_string(job.path_id) + ".csv");
    emit_csv(table, path);
    summary.outputs.push_back(path);
    summary.lines.push_back(drift_line("paths", job, true));
    summary.ok = summary.ok && job.finite && job.trace.max_relative_drift() <= kEnergyDriftTolerance;
  }
  return summary;
}

RunSummary run_order(const ExperimentConfig& c) {
  RunSummary summary;
  for (const OrderStudy& study : run_order_study(c)) {
    Table table;
    table.header = {"tau", "error", "order", "stderr"};
    for (const OrderRow& row : study.table.rows) {
      table.rows.push_back({row.tau, row.error, row.order ? Cell{*row.order} : Cell{std::string{}},
                            row.standard_error});
    }
    const fs::path path = c.out_dir / (std::string("order_") + method_name(study.method) + ".csv");
    emit_csv(table, path);
    summary.outputs.push_back(path);

    Table per_path;
    per_path.header = {"tau", "path", "error"};
    for (std::size_t j = 0; j < study.per_path_errors.size(); ++j) {
      for (std::size_t p = 0; p < study.per_path_errors[j].size(); ++p) {
        per_path.rows.push_back({c.taus[j], static_cast<std::int64_t>(p), study.per_path_errors[j][p]});
      }
    }
    const fs::path path_file = c.out_dir / (std::string("order_") + method_name(study.method) + "_paths.csv");
    emit_csv(per_path, path_file);
    summary.outputs.push_back(path_file);

    std::ostringstream s;
    s << "order method=" << method_name(study.method) << " slope=" << format_double(study.fit.slope)
      << " half_width95=" << format_double(study.fit.half_width) << " paths=" << c.n_paths;
    summary.lines.push_back(s.str());
  }
  return summary;
}

struct CheckRow {
  std::string check;
  std::size_t n;
  double value;
  double tolerance;
  bool pass;
};

std::vector<double> random_line(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

RunSummary run_oracle_check(const ExperimentConfig& c) {
  std::vector<CheckRow> rows;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> coupling(0.0, 10.0), coefficient(0.5, 4.0);

  for (std::size_t n : c.oracle_sizes) {
    const auto report = oracle::matrix_property_report(n);
    rows.push_back({"A_symmetric", n, report.symmetry_defect, 0.0, report.symmetric});
    rows.push_back({"A_positive_definite", n, report.min_eigenvalue, 0.0, report.positive_definite});
    rows.push_back({"A_eigenvalues_match_symbol", n, report.eigenvalue_mismatch, 1e-12,
                    report.eigenvalue_mismatch <= 1e-12});
    rows.push_back({"B_skew", n, report.b_skew_defect, 0.0, report.b_skew});
    rows.push_back({"AinvB_skew", n, report.a_inv_b_skew_defect, 1e-12, report.a_inv_b_skew});

    double worst_diff = 0.0, worst_energy = 0.0;
    for (std::size_t t = 0; t < c.oracle_cases; ++t) {
      const auto e = random_line(rng, n), h = random_line(rng, n);
      const LineSystemParams p{(rng() & 1u) ? 1 : -1, coupling(rng), coefficient(rng), coefficient(rng)};
      const auto fast = solve_pair_line(e, h, p);
      const auto slow = oracle::dense_solve_pair_line(e, h, p);
      double before = 0.0, after = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        worst_diff = std::max({worst_diff, std::abs(fast.first[i] - slow.first[i]),
                               std::abs(fast.second[i] - slow.second[i])});
        before += p.eps * e[i] * e[i] + p.mu * h[i] * h[i];
        after += p.eps * fast.first[i] * fast.first[i] + p.mu * fast.second[i] * fast.second[i];
      }
      worst_energy = std::max(worst_energy, std::abs(after - before) / before);
    }
    rows.push_back({"line_solve_vs_dense", n, worst_diff, 1e-12, worst_diff <= 1e-12});
    rows.push_back({"line_weighted_energy", n, worst_energy, 1e-12, worst_energy <= 1e-12});
  }

  {
    const auto even = oracle::build_dense_operators(4);
    rows.push_back({"A_even_size_reported_singular", 4, even.min_eigenvalue, 0.0, even.singular});
  }

  for (std::size_t n : {std::size_t{3}, std::size_t{5}}) {
    const Grid grid = build_grid({{{0.0, 0.5}, {0.0, 0.5}, {0.0, 0.5}}}, {n, n, n}, 1.0 / 32.0, 1);
    const Medium medium = make_medium(1.0, 1.0, 0.0);
    double worst = 0.0;
    for (std::size_t t = 0; t < c.oracle_cases; ++t) {
      const Method m = (t % 2 == 0) ? Method::SplittingI : Method::SplittingII;
      const auto stages = stage_table(m);
      const StageDescriptor& stage = stages[t % stages.size()];
      FieldState state(grid.counts());
      for (Component comp : kComponents) {
        const auto v = random_line(rng, grid.size());
        std::copy(v.begin(), v.end(), state[comp].values().begin());
      }
      const FieldState slow = oracle::dense_stage(state, stage, grid, medium, grid.tau());
      SplittingStepper(m, grid, medium).apply_stage(state, stage);
      for (Component comp : kComponents) {
        const auto a = state[comp].values();
        const auto b = slow[comp].values();
        for (std::size_t p = 0; p < a.size(); ++p) worst = std::max(worst, std::abs(a[p] - b[p]));
      }
    }
    rows.push_back({"stage_vs_dense", n, worst, 1e-12, worst <= 1e-12});
  }

  RunSummary summary;
  Table table;
  table.header = {"check", "n", "value", "tolerance", "pass"};
  std::size_t failures = 0;
  for (const CheckRow& r : rows) {
    table.rows.push_back({r.check, static_cast<std::int64_t>(r.n), r.value, r.tolerance,
                          std::string(r.pass ? "pass" : "fail")});
    if (!r.pass) {
      ++failures;
      summary.lines.push_back("oracle-check FAILED " + r.check + " n=" + std::to_string(r.n) +
                              " value=" + format_double(r.value));
    }
  }
  const fs::path path = c.out_dir / "oracle_check.csv";
  emit_csv(table, path);
  summary.outputs.push_back(path);
  summary.ok = failures == 0;
  summary.lines.push_back("oracle-check rows=" + std::to_string(rows.size()) + " failures=" + std::to_string(failures) +
                          (failures == 0 ? " ok" : " FAILED"));
  return summary;
}

}  // namespace

std::vector<OrderStudy> run_order_study(const ExperimentConfig& c) {
  if (c.experiment != Experiment::Order) throw ConfigError("experiment", "order study needs experiment = order");
  validate(c);
  const double lambda = c.lambdas.front();
  const Medium medium = make_medium(c.eps, c.mu, lambda);
  const Grid ref_grid = make_grid(c, c.tau_ref);
  const auto tables = std::make_shared<const BasisTables>(precompute_basis(ref_grid, c.modes));
  const FieldState initial = init_fields(ref_grid, init::PlaneWave{});
  const std::vector<Method> selected = methods(c.method);

  // errors[path][method][tau]
  std::vector<std::vector<std::vector<double>>> errors(
      c.n_paths, std::vector<std::vector<double>>(selected.size(), std::vector<double>(c.taus.size())));

  parallel_jobs(c.n_paths, [&](std::size_t p) {
    const SampledNoise source(tables, c.tau_ref, NoiseSpec{c.modes, c.seed, p}, ref_grid.n_steps());
    const std::vector<Lattice> fine = record(source);
    const FieldState reference =
        evolve(Method::SplittingI, initial, RecordedNoise(fine), ref_grid, medium, ref_grid.n_steps()).state;
    for (std::size_t j = 0; j < c.taus.size(); ++j) {
      const Grid grid = make_grid(c, c.taus[j]);
      const auto ratio = static_cast<std::size_t>(std::llround(c.taus[j] / c.tau_ref));
      const RecordedNoise coarse(coarsen_path(fine, ratio));
      for (std::size_t m = 0; m < selected.size(); ++m) {
        const FieldState state = evolve(selected[m], initial, coarse, grid, medium, grid.n_steps()).state;
        errors[p][m][j] = l2_error(state, reference, grid);
      }
    }
  });

  std::vector<OrderStudy> studies;
  for (std::size_t m = 0; m < selected.size(); ++m) {
    OrderStudy study;
    study.method = selected[m];
    std::vector<double> ms_errors, stderrs;
    for (std::size_t j = 0; j < c.taus.size(); ++j) {
      std::vector<double> samples;
      for (std::size_t p = 0; p < c.n_paths; ++p) samples.push_back(errors[p][m][j]);
      const MeanSquareError mse = mean_square_error(samples);
      ms_errors.push_back(mse.value);
      stderrs.push_back(mse.standard_error);
      study.per_path_errors.push_back(std::move(samples));
    }
    study.table = convergence_orders(c.taus, ms_errors, stderrs);
    study.fit = fit_order(study.table);
    studies.push_back(std::move(study));
  }
  return studies;
}

RunSummary run_experiment(const ExperimentConfig& config) {
  validate(config);
  set_thread_count(config.threads);
  prepare_output(config.out_dir);
  RunSummary summary;
  switch (config.experiment) {
    case Experiment::Energy: summary = run_energy(config, false); break;
    case Experiment::EnergyError: summary = run_energy(config, true); break;
    case Experiment::Paths: summary = run_paths(config); break;
    case Experiment::Order: summary = run_order(config); break;
    case Experiment::OracleCheck: summary = run_oracle_check(config); break;
  }
  write_sidecar(config, summary);
  return summary;
}

}  // namespace smaxwell::runner
