#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "smaxwell/runner/config.hpp"
#include "smaxwell/runner/csv.hpp"
#include "smaxwell/runner/experiments.hpp"
#include "test_util.hpp"

namespace smaxwell::runner {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const fs::path& p) {
  const std::string text = slurp(p);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

TEST(Csv, HeaderOnlyForEmptyTable) {
  const auto dir = test::scratch_dir("csv_empty");
  emit_csv(Table{{"t", "H"}, {}}, dir / "e.csv");
  EXPECT_EQ(slurp(dir / "e.csv"), "t,H\n");
}

TEST(Csv, TwoRowTraceHasThreeLines) {
  const auto dir = test::scratch_dir("csv_two");
  emit_csv(Table{{"t", "H"}, {{0.0, 0.75}, {0.03125, 0.75}}}, dir / "t.csv");
  EXPECT_EQ(line_count(dir / "t.csv"), 3u);
  EXPECT_EQ(slurp(dir / "t.csv").find('\r'), std::string::npos);
}

TEST(Csv, RoundTripIsBitwise) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::vector<Cell>> rows;
  std::vector<double> values;
  for (int r = 0; r < 200; ++r) {
    const double v = u(gen) * std::pow(10.0, r % 40 - 20);
    values.push_back(v);
    rows.push_back({std::int64_t{r}, v, std::string("row,") + std::to_string(r)});
  }
  values.push_back(std::numeric_limits<double>::denorm_min());
  rows.push_back({std::int64_t{-1}, values.back(), std::string("tiny")});
  const auto dir = test::scratch_dir("csv_roundtrip");
  emit_csv(Table{{"n", "value", "label"}, rows}, dir / "r.csv");
  const auto back = read_csv(dir / "r.csv");
  ASSERT_EQ(back.size(), rows.size() + 1);
  for (std::size_t r = 0; r < values.size(); ++r) {
    EXPECT_EQ(parse_double(back[r + 1][1]), values[r]);
  }
  EXPECT_EQ(back[1][2], "row,0");
}

TEST(Csv, Errors) {
  const auto dir = test::scratch_dir("csv_errors");
  EXPECT_THROW(emit_csv(Table{{"a", "b"}, {{1.0}}}, dir / "ragged.csv"), std::invalid_argument);
  try {
    emit_csv(Table{{"a"}, {}}, dir / "no_such_dir" / "x.csv");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("no_such_dir"), std::string::npos);
  }
  EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
  EXPECT_THROW(parse_double(""), std::invalid_argument);
}

TEST(Config, ZeroConfigurationIsReferenceSetup) {
  const auto c = resolve_config(std::nullopt, {});
  EXPECT_EQ(c.experiment, Experiment::Energy);
  EXPECT_EQ(c.counts, (Extents{25, 25, 25}));
  EXPECT_EQ(c.tau, 1.0 / 32.0);
  EXPECT_EQ(c.t_final, 10.0);
  EXPECT_EQ(c.lambdas, (std::vector<double>{0.0, 0.1, 1.0, 10.0}));
  EXPECT_EQ(c.modes, 10u);
  EXPECT_EQ(c.eps, 1.0);
  EXPECT_EQ(c.mu, 1.0);
  EXPECT_EQ(c.bounds[2].hi, 0.5);
  EXPECT_EQ(step_count(c.t_final, c.tau, "tau"), 320u);
}

TEST(Config, OrderDefaultsAreDeskScale) {
  const auto c = resolve_config_text("experiment = order\n", {});
  EXPECT_EQ(c.counts, (Extents{11, 11, 11}));
  EXPECT_EQ(c.t_final, 0.25);
  EXPECT_EQ(c.taus, (std::vector<double>{0.125, 0.0625, 0.03125, 0.015625}));
  EXPECT_EQ(c.tau_ref, 1.0 / 512.0);
  EXPECT_EQ(c.lambdas, (std::vector<double>{0.1}));
  EXPECT_GE(c.n_paths, 10u);
  Overrides ov;
  ov.full_scale = true;
  const auto full = resolve_config_text("experiment = order\n", ov);
  EXPECT_EQ(full.counts, (Extents{25, 25, 25}));
}

TEST(Config, SectionAndCommandLinePrecedence) {
  const std::string ini =
      "experiment = paths\n"
      "tau = 1/16\n"
      "lambda = 0.5, 2\n"
      "seed = 3\n"
      "[paths]\n"
      "T = 1/2\n"
      "counts = 7, 9, 11\n"
      "method = II\n"
      "[energy]\n"
      "T = 99\n";
  Overrides ov;
  ov.seed = 77;
  ov.out_dir = "elsewhere";
  const auto c = resolve_config_text(ini, ov);
  EXPECT_EQ(c.experiment, Experiment::Paths);
  EXPECT_EQ(c.tau, 0.0625);
  EXPECT_EQ(c.t_final, 0.5);
  EXPECT_EQ(c.counts, (Extents{7, 9, 11}));
  EXPECT_EQ(c.method, MethodSelection::II);
  EXPECT_EQ(c.lambdas, (std::vector<double>{0.5, 2.0}));
  EXPECT_EQ(c.seed, 77u);
  EXPECT_EQ(c.out_dir, fs::path("elsewhere"));
  Overrides which;
  which.experiment = "energy";
  EXPECT_EQ(resolve_config_text(ini, which).t_final, 99.0);
}

void expect_field_error(const std::string& ini, const std::string& field) {
  try {
    resolve_config_text(ini, {});
    FAIL() << "accepted: " << ini;
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), field) << e.what();
  }
}

TEST(Config, ErrorsNameTheField) {
  expect_field_error("counts = 24\n", "counts");
  expect_field_error("tau = 0.3\n", "tau");
  expect_field_error("bogus = 1\n", "bogus");
  expect_field_error("experiment = fourier\n", "experiment");
  expect_field_error("lambda = \n", "lambda");
  expect_field_error("eps = 0\n", "eps");
  expect_field_error("method = III\n", "method");
  expect_field_error("experiment = order\ntaus = 0.125, 0.1\n", "taus");
  expect_field_error("experiment = order\ntaus = 0.125, 0.03125\n", "taus");
  expect_field_error("[orderr]\nT = 1\n", "experiment");
  expect_field_error("tau = abc\n", "tau");
}

TEST(Config, IniRoundTrip) {
  auto c = resolve_config_text("experiment = order\nn_paths = 3\ntaus = 1/8, 1/16\n", {});
  const auto again = resolve_config_text(to_ini(c), {});
  EXPECT_EQ(again.taus, c.taus);
  EXPECT_EQ(again.n_paths, 3u);
  EXPECT_EQ(again.counts, c.counts);
  EXPECT_EQ(again.seed, c.seed);
  EXPECT_EQ(to_ini(again), to_ini(c));
}

ExperimentConfig small(Experiment e, const fs::path& out) {
  ExperimentConfig c = default_config(e);
  c.counts = {7, 7, 7};
  c.t_final = 0.25;
  c.out_dir = out;
  return c;
}

TEST(RunExperiment, EnergyWithoutNoiseConserves) {
  auto c = small(Experiment::Energy, test::scratch_dir("run_energy"));
  c.lambdas = {0.0};
  const auto summary = run_experiment(c);
  EXPECT_TRUE(summary.ok);
  ASSERT_EQ(summary.outputs.size(), 3u);
  EXPECT_EQ(summary.outputs.back().filename(), "energy.config.ini");
  const auto rows = read_csv(c.out_dir / "energy_I_lambda0.csv");
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "H"}));
  const double h0 = parse_double(rows[1][1]);
  for (std::size_t r = 1; r < rows.size(); ++r) EXPECT_LE(std::abs(parse_double(rows[r][1]) - h0), 1e-10 * h0);
}

TEST(RunExperiment, EnergyErrorAndPathsFiles) {
  auto c = small(Experiment::EnergyError, test::scratch_dir("run_error"));
  c.lambdas = {1.0};
  c.method = MethodSelection::II;
  EXPECT_TRUE(run_experiment(c).ok);
  EXPECT_EQ(read_csv(c.out_dir / "energy_error_II_lambda1.csv")[0], (std::vector<std::string>{"t", "dH"}));

  auto p = small(Experiment::Paths, test::scratch_dir("run_paths"));
  p.n_paths = 2;
  const auto summary = run_experiment(p);
  EXPECT_TRUE(summary.ok);
  EXPECT_TRUE(fs::exists(p.out_dir / "paths_I_lambda1_path0.csv"));
  EXPECT_TRUE(fs::exists(p.out_dir / "paths_II_lambda1_path1.csv"));
  EXPECT_NE(slurp(p.out_dir / "paths_I_lambda1_path0.csv"), slurp(p.out_dir / "paths_I_lambda1_path1.csv"));
}

TEST(RunExperiment, OracleCheckAllRowsPass) {
  auto c = default_config(Experiment::OracleCheck);
  c.out_dir = test::scratch_dir("run_oracle");
  c.oracle_cases = 5;
  const auto summary = run_experiment(c);
  EXPECT_TRUE(summary.ok);
  const auto rows = read_csv(c.out_dir / "oracle_check.csv");
  ASSERT_GT(rows.size(), 10u);
  bool saw_even = false;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    EXPECT_EQ(rows[r].back(), "pass") << rows[r][0] << " n=" << rows[r][1];
    saw_even = saw_even || rows[r][1] == "4";
  }
  EXPECT_TRUE(saw_even);
}

TEST(RunExperiment, OrderStudyTables) {
  auto c = default_config(Experiment::Order);
  c.counts = {5, 5, 5};
  c.taus = {0.125, 0.0625};
  c.tau_ref = 1.0 / 64.0;
  c.n_paths = 2;
  c.out_dir = test::scratch_dir("run_order");
  const auto studies = run_order_study(c);
  ASSERT_EQ(studies.size(), 2u);
  for (const auto& s : studies) {
    ASSERT_EQ(s.table.rows.size(), 2u);
    EXPECT_GT(s.table.rows[0].error, s.table.rows[1].error);
    ASSERT_EQ(s.per_path_errors.size(), 2u);
    EXPECT_EQ(s.per_path_errors[0].size(), 2u);
  }
  EXPECT_TRUE(run_experiment(c).ok);
  const auto rows = read_csv(c.out_dir / "order_I.csv");
  EXPECT_EQ(rows[0], (std::vector<std::string>{"tau", "error", "order", "stderr"}));
  EXPECT_EQ(rows[1][2], "");
}

TEST(RunExperiment, OutputsIndependentOfThreadCount) {
  auto a = small(Experiment::Paths, test::scratch_dir("det_1"));
  a.n_paths = 3;
  a.threads = 1;
  auto b = a;
  b.out_dir = test::scratch_dir("det_8");
  b.threads = 8;
  const auto ra = run_experiment(a);
  const auto rb = run_experiment(b);
  ASSERT_EQ(ra.outputs.size(), rb.outputs.size());
  for (std::size_t n = 0; n + 1 < ra.outputs.size(); ++n)
    EXPECT_EQ(slurp(ra.outputs[n]), slurp(rb.outputs[n])) << ra.outputs[n];
}

TEST(RunExperiment, UnwritableOutputDirectory) {
  const auto dir = test::scratch_dir("run_blocked");
  std::ofstream(dir / "file") << "x";
  auto c = small(Experiment::Energy, dir / "file" / "sub");
  EXPECT_THROW(run_experiment(c), std::exception);
}

}  // namespace
}  // namespace smaxwell::runner
