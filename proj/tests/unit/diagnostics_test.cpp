#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "smaxwell/diagnostics.hpp"
#include "smaxwell/parallel.hpp"
#include "test_util.hpp"

namespace smaxwell {
namespace {

using C = Component;

TEST(Energy, ConstantFieldOnReferenceGrid) {
  const Grid grid = test::unit_box({25, 25, 25});
  const FieldState s = init_fields(grid, init::Constant{1.0, C::E1});
  EXPECT_NEAR(discrete_energy(s, grid, make_medium(2.0, 1.0, 0.0)), 0.25, 1e-15);
}

TEST(Energy, PlaneWaveIsThreeQuarters) {
  const Grid grid = test::unit_box({25, 25, 25});
  const FieldState s = init_fields(grid, init::PlaneWave{});
  EXPECT_NEAR(discrete_energy(s, grid, make_medium(1.0, 1.0, 0.0)), 0.75, 1e-13);
}

TEST(Energy, PlaneWaveQuadratureCrossCheck) {
  using Gauss = boost::math::quadrature::gauss<double, 30>;
  const double pi = std::numbers::pi;
  const auto density = [pi](double x, double y, double z) {
    const double c = std::cos(4 * pi * (x + y + z));
    return 12.0 * c * c;
  };
  double total = 0.0;
  for (double x0 : {0.0, 0.25})
    for (double y0 : {0.0, 0.25})
      for (double z0 : {0.0, 0.25})
        total += Gauss::integrate(
            [&](double x) {
              return Gauss::integrate(
                  [&](double y) {
                    return Gauss::integrate([&](double z) { return density(x, y, z); }, z0, z0 + 0.25);
                  },
                  y0, y0 + 0.25);
            },
            x0, x0 + 0.25);
  EXPECT_NEAR(total, 0.75, 1e-13);
}

TEST(Energy, ZeroStateAndSwapSymmetry) {
  std::mt19937_64 gen(1);
  const Grid grid = test::unit_box({7, 5, 9});
  const Medium m = make_medium(1.7, 1.7, 0.0);
  EXPECT_EQ(discrete_energy(init_fields(grid, init::Zero{}), grid, m), 0.0);
  const FieldState s = test::random_state(grid.counts(), gen);
  FieldState swapped(grid.counts());
  for (std::size_t a = 0; a < 3; ++a) {
    swapped[electric(a)] = s[magnetic(a)];
    swapped[magnetic(a)] = s[electric(a)];
  }
  EXPECT_NEAR(discrete_energy(swapped, grid, m), discrete_energy(s, grid, m), 1e-14);
}

TEST(Energy, IndependentOfThreadCount) {
  std::mt19937_64 gen(2);
  const Grid grid = test::unit_box({25, 25, 25});
  const FieldState s = test::random_state(grid.counts(), gen);
  const Medium m = make_medium(1.3, 0.4, 0.0);
  set_thread_count(1);
  const double one = discrete_energy(s, grid, m);
  set_thread_count(8);
  const double eight = discrete_energy(s, grid, m);
  set_thread_count(1);
  EXPECT_EQ(one, eight);
}

TEST(L2Error, Examples) {
  const Grid grid = test::unit_box({25, 25, 25});
  const FieldState a = init_fields(grid, init::Constant{1.0, C::E1});
  const FieldState z = init_fields(grid, init::Zero{});
  EXPECT_EQ(l2_error(a, a, grid), 0.0);
  EXPECT_NEAR(l2_error(a, z, grid), std::sqrt(0.125), 1e-15);
  FieldState b = z;
  b[C::H3](4, 17, 9) = -0.3;
  EXPECT_NEAR(l2_error(b, z, grid), std::sqrt(std::pow(1.0 / 50.0, 3)) * 0.3, 1e-17);
}

TEST(L2Error, TriangleInequality) {
  std::mt19937_64 gen(3);
  const Grid grid = test::unit_box({7, 5, 9});
  for (int trial = 0; trial < 50; ++trial) {
    const FieldState a = test::random_state(grid.counts(), gen);
    const FieldState b = test::random_state(grid.counts(), gen);
    const FieldState c = test::random_state(grid.counts(), gen);
    EXPECT_LE(l2_error(a, c, grid), l2_error(a, b, grid) + l2_error(b, c, grid) + 1e-12);
  }
}

TEST(L2Error, ShapeMismatch) {
  const Grid grid = test::unit_box({3, 3, 3});
  EXPECT_THROW(l2_error(FieldState(Extents{3, 3, 3}), FieldState(Extents{3, 3, 5}), grid), std::invalid_argument);
}

TEST(MeanSquareError, Examples) {
  const std::vector<double> one{0.42};
  EXPECT_EQ(mean_square_error(one).value, 0.42);
  EXPECT_EQ(mean_square_error(one).standard_error, 0.0);
  const std::vector<double> two{3.0, 4.0};
  EXPECT_NEAR(mean_square_error(two).value, std::sqrt(12.5), 1e-15);
  EXPECT_GT(mean_square_error(two).standard_error, 0.0);
  const std::vector<double> flat(7, 0.125);
  EXPECT_NEAR(mean_square_error(flat).value, 0.125, 1e-16);
  EXPECT_NEAR(mean_square_error(flat).standard_error, 0.0, 1e-16);
  EXPECT_THROW(mean_square_error(std::vector<double>{}), std::invalid_argument);
}

TEST(ConvergenceOrders, ReferenceTableRows) {
  const std::vector<double> taus{1.0 / 16, 1.0 / 32};
  const auto t1 = convergence_orders(taus, std::vector<double>{4.72e-1, 1.72e-1});
  ASSERT_EQ(t1.rows.size(), 2u);
  EXPECT_FALSE(t1.rows[0].order.has_value());
  EXPECT_NEAR(*t1.rows[1].order, 1.46, 0.005);
  const auto t2 = convergence_orders(taus, std::vector<double>{6.64e-1, 3.34e-1});
  EXPECT_NEAR(*t2.rows[1].order, 0.99, 0.005);
  const auto t3 = convergence_orders(taus, std::vector<double>{0.3, 0.15});
  EXPECT_EQ(*t3.rows[1].order, 1.0);
}

TEST(ConvergenceOrders, ScaleInvariant) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.01, 1.0), k(1e-6, 1e6);
  const std::vector<double> taus{0.5, 0.25, 0.125, 0.0625};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> e(4), scaled(4);
    const double s = k(gen);
    for (std::size_t i = 0; i < 4; ++i) {
      e[i] = u(gen);
      scaled[i] = s * e[i];
    }
    const auto a = convergence_orders(taus, e);
    const auto b = convergence_orders(taus, scaled);
    for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(*a.rows[i].order, *b.rows[i].order, 1e-12);
    EXPECT_NEAR(fit_order(a).slope, fit_order(b).slope, 1e-12);
  }
}

TEST(ConvergenceOrders, Rejections) {
  const std::vector<double> taus{0.5, 0.25};
  EXPECT_THROW(convergence_orders(taus, std::vector<double>{1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(convergence_orders(taus, std::vector<double>{1.0, -0.5}), std::invalid_argument);
  EXPECT_THROW(convergence_orders(std::vector<double>{0.5}, std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_THROW(convergence_orders(std::vector<double>{0.25, 0.5}, std::vector<double>{1.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(convergence_orders(taus, std::vector<double>{1.0, 0.5, 0.25}), std::invalid_argument);
}

TEST(FitOrder, ExactPowerLaw) {
  const std::vector<double> taus{0.125, 0.0625, 0.03125, 0.015625};
  std::vector<double> e;
  for (double t : taus) e.push_back(3.0 * t);
  const SlopeFit fit = fit_order(convergence_orders(taus, e));
  EXPECT_NEAR(fit.slope, 1.0, 1e-12);
  EXPECT_NEAR(fit.half_width, 0.0, 1e-10);
  const SlopeFit two = fit_order(convergence_orders(std::vector<double>{0.5, 0.25}, std::vector<double>{1.0, 0.25}));
  EXPECT_NEAR(two.slope, 2.0, 1e-12);
  EXPECT_EQ(two.half_width, 0.0);
}

TEST(EnergyTrace, Drift) {
  EnergyTrace t{{0, 1, 2}, {2.0, 2.0 + 1e-12, 2.0 - 3e-12}};
  EXPECT_NEAR(t.max_absolute_drift(), 3e-12, 1e-16);
  EXPECT_NEAR(t.max_relative_drift(), 1.5e-12, 1e-16);
  EXPECT_EQ(EnergyTrace{}.max_relative_drift(), 0.0);
}

}  // namespace
}  // namespace smaxwell
