#include "smaxwell/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace smaxwell {

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
  }
  return "?";
}

Grid build_grid(const Bounds& bounds, const Extents& counts, double tau, std::size_t n_steps) {
  Grid grid;
  for (Axis axis : kAxes) {
    const std::size_t a = axis_index(axis);
    const std::size_t n = counts[a];
    if (n < 3 || n % 2 == 0) {
      throw std::invalid_argument(
          std::string("point count along ") + axis_name(axis) + " is " + std::to_string(n) +
          "; counts must be odd and >= 3 so that the periodic averaging matrix "
          "(1,2,1)/2 stays invertible (its symbol 1+cos(2*pi*k/n) vanishes at k=n/2 for even n)");
    }
    const Interval& iv = bounds[a];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.hi > iv.lo)) {
      throw std::invalid_argument(std::string("bounds along ") + axis_name(axis) +
                                  " must be finite with lo < hi");
    }
    grid.steps_[a] = (iv.hi - iv.lo) / static_cast<double>(n);
  }
  if (!std::isfinite(tau) || !(tau > 0.0)) {
    throw std::invalid_argument("time step tau must be positive and finite");
  }
  if (n_steps == 0) {
    throw std::invalid_argument("number of time steps must be at least 1");
  }
  grid.bounds_ = bounds;
  grid.counts_ = counts;
  grid.tau_ = tau;
  grid.n_steps_ = n_steps;
  return grid;
}

Medium make_medium(double eps, double mu, double lambda) {
  if (!std::isfinite(eps) || eps < kMinCoefficient) {
    throw std::invalid_argument("permittivity eps must be finite and >= " +
                                std::to_string(kMinCoefficient));
  }
  if (!std::isfinite(mu) || mu < kMinCoefficient) {
    throw std::invalid_argument("permeability mu must be finite and >= " +
                                std::to_string(kMinCoefficient));
  }
  if (!std::isfinite(lambda)) {
    throw std::invalid_argument("noise intensity lambda must be finite");
  }
  return Medium{eps, mu, lambda};
}

}  // namespace smaxwell
