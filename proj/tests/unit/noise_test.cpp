#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "smaxwell/noise.hpp"
#include "smaxwell/parallel.hpp"
#include "test_util.hpp"

namespace smaxwell {
namespace {

// Nodes 0, 1/4, 1/2 on every axis.
Grid quarter_grid(double tau = 1.0) { return build_grid({{{0, 0.75}, {0, 0.75}, {0, 0.75}}}, {3, 3, 3}, tau, 1); }

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
  double variance_se = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = (x - m) * (x - m);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return {m, m2 * n / (n - 1), std::sqrt(m2 / n), std::sqrt((m4 - m2 * m2) / n)};
}

TEST(Basis, SineTableAndCoefficients) {
  const Grid grid = build_grid({{{0, 1}, {0, 1}, {0, 1}}}, {3, 3, 3}, 0.1, 1);
  const Grid half = build_grid({{{0, 1}, {0, 1}, {0, 1}}}, {5, 5, 5}, 0.1, 1);
  const BasisTables t = precompute_basis(build_grid({{{0, 1.5}, {0, 1}, {0, 1}}}, {3, 3, 3}, 0.1, 1), 1);
  EXPECT_EQ(t.sine(Axis::x, 1, 1), 1.0);  // node x = 1/2
  EXPECT_EQ(t.coefficient(1, 1, 1), 1.0 / std::sqrt(3.0));

  const BasisTables t3 = precompute_basis(grid, 3);
  EXPECT_DOUBLE_EQ(t3.coefficient(2, 1, 1), 0.31622776601683794);
  EXPECT_DOUBLE_EQ(t3.coefficient(1, 2, 1), 1.0 / std::sqrt(10.0));
  EXPECT_DOUBLE_EQ(t3.coefficient(3, 3, 3), 1.0 / 9.0);
  const BasisTables t5 = precompute_basis(half, 4);
  for (Axis a : kAxes)
    for (std::size_t m = 1; m <= 4; ++m)
      for (std::size_t i = 0; i < 5; ++i) {
        const double want = std::sin(static_cast<double>(m) * std::numbers::pi * half.node(a, i));
        EXPECT_NEAR(t5.sine(a, m, i), want, 2 * std::numeric_limits<double>::epsilon());
      }
}

TEST(Assemble, ZeroWeightsGiveZeroIncrement) {
  const Grid grid = test::unit_box({5, 7, 3});
  const BasisTables t = precompute_basis(grid, 4);
  const Lattice dw = assemble_increment(t, 0.5, std::vector<double>(64, 0.0));
  for (double v : dw.values()) EXPECT_EQ(v, 0.0);
}

TEST(Assemble, SingleModeValue) {
  const BasisTables t = precompute_basis(quarter_grid(), 1);
  const Lattice dw = assemble_increment(t, 0.5, std::vector<double>{1.0});
  EXPECT_NEAR(dw(1, 1, 1), 0.40824829046386296, 1e-15);
  EXPECT_EQ(dw(0, 1, 1), 0.0);
}

TEST(Assemble, MatchesNaiveTripleSum) {
  std::mt19937_64 gen(9);
  const Grid grid = test::unit_box({5, 7, 3});
  const std::size_t M = 3;
  const BasisTables t = precompute_basis(grid, M);
  std::normal_distribution<double> n01;
  std::vector<double> xi(M * M * M);
  for (double& x : xi) x = n01(gen);
  const double tau = 0.125;
  const Lattice dw = assemble_increment(t, tau, xi);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < 7; ++j)
      for (std::size_t i = 0; i < 5; ++i) {
        double sum = 0.0;
        for (std::size_t m = 1; m <= M; ++m)
          for (std::size_t l = 1; l <= M; ++l)
            for (std::size_t q = 1; q <= M; ++q)
              sum += xi[((m - 1) * M + (l - 1)) * M + (q - 1)] /
                     std::sqrt(static_cast<double>(m * m * m + l * l * l + q * q * q)) *
                     std::sin(static_cast<double>(m) * std::numbers::pi * grid.node(Axis::x, i)) *
                     std::sin(static_cast<double>(l) * std::numbers::pi * grid.node(Axis::y, j)) *
                     std::sin(static_cast<double>(q) * std::numbers::pi * grid.node(Axis::z, k));
        EXPECT_NEAR(dw(i, j, k), 2 * std::sqrt(2 * tau) * sum, 1e-13);
      }
}

TEST(Assemble, RejectsWrongWeightCount) {
  const BasisTables t = precompute_basis(quarter_grid(), 2);
  EXPECT_THROW(assemble_increment(t, 1.0, std::vector<double>(7, 0.0)), std::invalid_argument);
}

TEST(Sample, VarianceAtQuarterNodeMonteCarlo) {
  const Grid grid = quarter_grid();
  const BasisTables t = precompute_basis(grid, 1);
  EXPECT_NEAR(increment_variance(t, 1.0, 1, 1, 1), 1.0 / 3.0, 1e-15);
  NoiseRng rng(12345, 0);
  std::vector<double> xs;
  xs.reserve(100000);
  for (std::uint64_t n = 0; n < 100000; ++n) {
    rng.seek(n);
    xs.push_back(sample_increment(rng, t, 1.0)(1, 1, 1));
  }
  const Moments mo = moments(xs);
  EXPECT_LE(std::abs(mo.mean), 3 * mo.mean_se);
  EXPECT_LE(std::abs(mo.variance - 1.0 / 3.0), 3 * mo.variance_se) << mo.variance;
}

TEST(Sample, SeekRegeneratesAnyStep) {
  const BasisTables t = precompute_basis(test::unit_box({5, 5, 5}), 3);
  NoiseRng sequential(7, 3);
  std::vector<Lattice> forward;
  for (std::uint64_t n = 0; n < 5; ++n) {
    sequential.seek(n);
    forward.push_back(sample_increment(sequential, t, 0.1));
  }
  NoiseRng random_access(7, 3);
  for (std::uint64_t n : {4u, 1u, 3u, 0u, 2u}) {
    random_access.seek(n);
    EXPECT_TRUE(sample_increment(random_access, t, 0.1) == forward[n]);
  }
  NoiseRng other_path(7, 4);
  other_path.seek(0);
  EXPECT_FALSE(sample_increment(other_path, t, 0.1) == forward[0]);
}

TEST(Sample, IndependentOfThreadCount) {
  const Grid grid = test::unit_box({25, 25, 25});
  const auto t = std::make_shared<const BasisTables>(precompute_basis(grid, 10));
  const int saved = thread_count();
  set_thread_count(1);
  const auto one = record(SampledNoise(t, grid.tau(), {10, 2024, 1}, 3));
  set_thread_count(8);
  const auto eight = record(SampledNoise(t, grid.tau(), {10, 2024, 1}, 3));
  set_thread_count(saved);
  ASSERT_EQ(one.size(), 3u);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_TRUE(one[n] == eight[n]);
}

TEST(Coarsen, IdentityAndPairSums) {
  std::mt19937_64 gen(10);
  const Extents ext{3, 3, 3};
  std::vector<Lattice> w;
  for (int n = 0; n < 4; ++n) w.push_back(test::random_lattice(ext, gen));
  const auto same = coarsen_path(w, 1);
  ASSERT_EQ(same.size(), 4u);
  for (std::size_t n = 0; n < 4; ++n) EXPECT_TRUE(same[n] == w[n]);
  const auto pairs = coarsen_path(w, 2);
  ASSERT_EQ(pairs.size(), 2u);
  for (std::size_t p = 0; p < w[0].size(); ++p) {
    EXPECT_EQ(pairs[0].values()[p], w[0].values()[p] + w[1].values()[p]);
    EXPECT_EQ(pairs[1].values()[p], w[2].values()[p] + w[3].values()[p]);
  }
  EXPECT_THROW(coarsen_path(w, 3), std::invalid_argument);
  EXPECT_THROW(coarsen_path(w, 0), std::invalid_argument);
}

TEST(Coarsen, VarianceScalesWithRatio) {
  const Grid grid = quarter_grid(1.0 / 8.0);
  const BasisTables t = precompute_basis(grid, 2);
  const std::size_t r = 4;
  NoiseRng rng(99, 0);
  std::vector<Lattice> fine;
  for (std::uint64_t n = 0; n < 20000 * r; ++n) {
    rng.seek(n);
    fine.push_back(sample_increment(rng, t, 1.0 / 8.0));
  }
  const auto coarse = coarsen_path(fine, r);
  std::vector<double> xs;
  for (const auto& c : coarse) xs.push_back(c(1, 2, 1));
  const Moments mo = moments(xs);
  const double want = static_cast<double>(r) * increment_variance(t, 1.0 / 8.0, 1, 2, 1);
  EXPECT_LE(std::abs(mo.variance - want), 3 * mo.variance_se) << mo.variance << " vs " << want;
  EXPECT_LE(std::abs(mo.mean), 3 * mo.mean_se);
}

TEST(NoiseFile, RoundTrip) {
  const Grid grid = test::unit_box({5, 3, 7});
  const auto t = std::make_shared<const BasisTables>(precompute_basis(grid, 3));
  const auto increments = record(SampledNoise(t, grid.tau(), {3, 5, 6}, 4));
  const auto dir = test::scratch_dir("noise_file");
  const NoiseFileHeader header{5, 6, 3, grid.tau(), grid.counts()};
  write_increments(dir / "path.bin", header, increments);
  const NoiseFile back = read_increments(dir / "path.bin");
  EXPECT_EQ(back.header.seed, 5u);
  EXPECT_EQ(back.header.path_id, 6u);
  EXPECT_EQ(back.header.modes, 3u);
  EXPECT_EQ(back.header.tau, grid.tau());
  EXPECT_EQ(back.header.extents, grid.counts());
  ASSERT_EQ(back.increments.size(), 4u);
  for (std::size_t n = 0; n < 4; ++n) EXPECT_TRUE(back.increments[n] == increments[n]);
}

TEST(NoiseFile, RejectsForeignFile) {
  const auto dir = test::scratch_dir("noise_bad");
  std::ofstream(dir / "bad.bin") << "not a noise file at all";
  EXPECT_THROW(read_increments(dir / "bad.bin"), std::runtime_error);
  EXPECT_THROW(read_increments(dir / "missing.bin"), std::runtime_error);
}

}  // namespace
}  // namespace smaxwell
