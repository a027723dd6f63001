#pragma once

#include <array>
#include <cstddef>

namespace smaxwell {

enum class Axis : int { x = 0, y = 1, z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

constexpr std::size_t axis_index(Axis axis) { return static_cast<std::size_t>(axis); }

const char* axis_name(Axis axis);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

using Bounds = std::array<Interval, 3>;
using Extents = std::array<std::size_t, 3>;

/// Periodic uniform lattice over a box.
///
/// Node index i on an axis runs 0..count-1 and sits at lo + i*h with
/// h = (hi - lo)/count; node `count` is identified with node 0. Counts are odd
/// and at least 3 because the averaging stencil (1,2,1)/2 is singular on
/// even periodic lattices. Instances come from build_grid() and never change.
class Grid {
 public:
  const Bounds& bounds() const { return bounds_; }
  const Extents& counts() const { return counts_; }
  std::size_t count(Axis axis) const { return counts_[axis_index(axis)]; }
  double step(Axis axis) const { return steps_[axis_index(axis)]; }
  const std::array<double, 3>& steps() const { return steps_; }
  double node(Axis axis, std::size_t index) const {
    return bounds_[axis_index(axis)].lo + static_cast<double>(index) * step(axis);
  }
  double cell_volume() const { return steps_[0] * steps_[1] * steps_[2]; }
  std::size_t size() const { return counts_[0] * counts_[1] * counts_[2]; }

  double tau() const { return tau_; }
  std::size_t n_steps() const { return n_steps_; }

 private:
  friend Grid build_grid(const Bounds&, const Extents&, double, std::size_t);
  Grid() = default;

  Bounds bounds_{};
  Extents counts_{};
  std::array<double, 3> steps_{};
  double tau_ = 0.0;
  std::size_t n_steps_ = 0;
};

/// Throws std::invalid_argument on even or too-small counts, unordered bounds,
/// non-positive tau, or n_steps == 0.
Grid build_grid(const Bounds& bounds, const Extents& counts, double tau, std::size_t n_steps);

/// Smallest admissible permittivity/permeability.
inline constexpr double kMinCoefficient = 1e-8;

struct Medium {
  double eps = 1.0;
  double mu = 1.0;
  double lambda = 0.0;
};

/// Validates eps, mu >= kMinCoefficient and finite lambda.
Medium make_medium(double eps, double mu, double lambda);

}  // namespace smaxwell
