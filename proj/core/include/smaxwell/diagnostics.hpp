#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "smaxwell/field.hpp"
#include "smaxwell/grid.hpp"

namespace smaxwell {

/// H(Z^n) sampled at t_n = n * tau.
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  /// max_n |H_n - H_0| / H_0; zero for an empty trace or H_0 == 0.
  double max_relative_drift() const;
  double max_absolute_drift() const;
};

/// eps * sum_a ||E_a||^2 + mu * sum_a ||H_a||^2 with the lattice norm
/// ||U||^2 = hx hy hz sum_{ijk} U_ijk^2.
double discrete_energy(const FieldState& state, const Grid& grid, const Medium& medium);

/// sqrt(hx hy hz sum_{ijk} sum_a [(E_a - E_a^ref)^2 + (H_a - H_a^ref)^2]).
double l2_error(const FieldState& state, const FieldState& reference, const Grid& grid);

struct MeanSquareError {
  double value = 0.0;           // sqrt(mean e^2)
  double standard_error = 0.0;  // delta-method estimate; 0 with a single sample
};

MeanSquareError mean_square_error(std::span<const double> per_path_errors);

struct OrderRow {
  double tau = 0.0;
  double error = 0.0;
  std::optional<double> order;  // log2(err_{j-1} / err_j); absent on the first row
  double standard_error = 0.0;
};

struct OrderTable {
  std::vector<OrderRow> rows;
};

/// Taus must halve from row to row; errors must be positive.
OrderTable convergence_orders(std::span<const double> taus, std::span<const double> errors,
                              std::span<const double> standard_errors = {});

struct SlopeFit {
  double slope = 0.0;
  double half_width = 0.0;  // 95% Student-t interval; 0 when only two points
};

/// Least-squares slope of log2(error) against log2(tau).
SlopeFit fit_order(const OrderTable& table);

}  // namespace smaxwell
