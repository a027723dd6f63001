#include "smaxwell/diagnostics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "smaxwell/parallel.hpp"

namespace smaxwell {

double EnergyTrace::max_relative_drift() const {
  if (values.empty() || values.front() == 0.0) return 0.0;
  return max_absolute_drift() / std::abs(values.front());
}

double EnergyTrace::max_absolute_drift() const {
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, std::abs(v - values.front()));
  return worst;
}

namespace {

// Sum of squares over one z-plane of a lattice, in index order.
void accumulate_plane(std::span<const double> v, std::size_t begin, std::size_t count, CompensatedSum& acc) {
  for (std::size_t n = begin; n < begin + count; ++n) acc.add(v[n] * v[n]);
}

void accumulate_plane_diff(std::span<const double> a, std::span<const double> b, std::size_t begin,
                           std::size_t count, CompensatedSum& acc) {
  for (std::size_t n = begin; n < begin + count; ++n) {
    const double d = a[n] - b[n];
    acc.add(d * d);
  }
}

}  // namespace

double discrete_energy(const FieldState& state, const Grid& grid, const Medium& medium) {
  if (state.extents() != grid.counts()) throw std::invalid_argument("state shape does not match grid");
  const auto& ext = grid.counts();
  const std::size_t plane = ext[0] * ext[1];
  const auto planes = static_cast<std::ptrdiff_t>(ext[2]);
  std::vector<double> e_part(ext[2]), h_part(ext[2]);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < planes; ++k) {
    CompensatedSum e_acc, h_acc;
    const std::size_t begin = static_cast<std::size_t>(k) * plane;
    for (std::size_t a = 0; a < 3; ++a) {
      accumulate_plane(state[electric(a)].values(), begin, plane, e_acc);
      accumulate_plane(state[magnetic(a)].values(), begin, plane, h_acc);
    }
    e_part[k] = e_acc.value();
    h_part[k] = h_acc.value();
  }

  CompensatedSum e_sum, h_sum;
  for (std::size_t k = 0; k < ext[2]; ++k) {
    e_sum.add(e_part[k]);
    h_sum.add(h_part[k]);
  }
  return grid.cell_volume() * (medium.eps * e_sum.value() + medium.mu * h_sum.value());
}

double l2_error(const FieldState& state, const FieldState& reference, const Grid& grid) {
  if (state.extents() != reference.extents() || state.extents() != grid.counts()) {
    throw std::invalid_argument("l2_error: state, reference and grid shapes differ");
  }
  const auto& ext = grid.counts();
  const std::size_t plane = ext[0] * ext[1];
  const auto planes = static_cast<std::ptrdiff_t>(ext[2]);
  std::vector<double> part(ext[2]);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < planes; ++k) {
    CompensatedSum acc;
    const std::size_t begin = static_cast<std::size_t>(k) * plane;
    for (Component c : kComponents) accumulate_plane_diff(state[c].values(), reference[c].values(), begin, plane, acc);
    part[k] = acc.value();
  }

  CompensatedSum total;
  for (double p : part) total.add(p);
  return std::sqrt(grid.cell_volume() * total.value());
}

MeanSquareError mean_square_error(std::span<const double> errors) {
  if (errors.empty()) throw std::invalid_argument("mean_square_error needs at least one sample");
  const auto n = static_cast<double>(errors.size());
  CompensatedSum sq;
  for (double e : errors) sq.add(e * e);
  const double mean_sq = sq.value() / n;
  MeanSquareError out{std::sqrt(mean_sq), 0.0};
  if (errors.size() > 1 && mean_sq > 0.0) {
    CompensatedSum dev;
    for (double e : errors) dev.add((e * e - mean_sq) * (e * e - mean_sq));
    const double se_mean_sq = std::sqrt(dev.value() / (n - 1.0) / n);
    out.standard_error = se_mean_sq / (2.0 * out.value);
  }
  return out;
}

OrderTable convergence_orders(std::span<const double> taus, std::span<const double> errors,
                              std::span<const double> standard_errors) {
  if (taus.size() != errors.size()) throw std::invalid_argument("tau and error counts differ");
  if (!standard_errors.empty() && standard_errors.size() != errors.size()) {
    throw std::invalid_argument("standard error count differs from error count");
  }
  if (errors.size() < 2) throw std::invalid_argument("convergence_orders needs at least two errors");
  OrderTable table;
  for (std::size_t j = 0; j < errors.size(); ++j) {
    if (!(errors[j] > 0.0) || !std::isfinite(errors[j])) {
      throw std::invalid_argument("error at row " + std::to_string(j) + " is not positive");
    }
    if (!(taus[j] > 0.0)) throw std::invalid_argument("tau at row " + std::to_string(j) + " is not positive");
    if (j > 0 && !(taus[j] < taus[j - 1])) {
      throw std::invalid_argument("taus must strictly decrease down the table");
    }
    OrderRow row{taus[j], errors[j], std::nullopt, standard_errors.empty() ? 0.0 : standard_errors[j]};
    if (j > 0) row.order = std::log2(errors[j - 1] / errors[j]);
    table.rows.push_back(row);
  }
  return table;
}

SlopeFit fit_order(const OrderTable& table) {
  const std::size_t n = table.rows.size();
  if (n < 2) throw std::invalid_argument("fit_order needs at least two rows");
  double mx = 0.0, my = 0.0;
  for (const auto& r : table.rows) {
    mx += std::log2(r.tau);
    my += std::log2(r.error);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& r : table.rows) {
    const double dx = std::log2(r.tau) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log2(r.error) - my);
  }
  SlopeFit fit{sxy / sxx, 0.0};
  if (n > 2) {
    double rss = 0.0;
    for (const auto& r : table.rows) {
      const double resid = std::log2(r.error) - (my + fit.slope * (std::log2(r.tau) - mx));
      rss += resid * resid;
    }
    const double dof = static_cast<double>(n - 2);
    const double se = std::sqrt(rss / dof / sxx);
    const boost::math::students_t dist(dof);
    fit.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
  }
  return fit;
}

}  // namespace smaxwell
