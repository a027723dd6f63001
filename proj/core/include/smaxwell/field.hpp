#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "smaxwell/grid.hpp"

namespace smaxwell {

/// Scalar function on the lattice, stored x-fastest: index = i + I*(j + J*k).
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(const Extents& extents, double fill = 0.0);

  const Extents& extents() const { return extents_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + extents_[0] * (j + extents_[1] * k);
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) { return values_[index(i, j, k)]; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[index(i, j, k)];
  }

  /// Periodic accessor: any integer index is reduced modulo the axis count.
  double wrapped(std::ptrdiff_t i, std::ptrdiff_t j, std::ptrdiff_t k) const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  Extents extents_{};
  std::vector<double> values_;
};

enum class Component : int { E1 = 0, E2, E3, H1, H2, H3 };

inline constexpr std::array<Component, 6> kComponents{Component::E1, Component::E2, Component::E3,
                                                      Component::H1, Component::H2, Component::H3};

constexpr std::size_t component_index(Component c) { return static_cast<std::size_t>(c); }
constexpr Component electric(std::size_t a) { return static_cast<Component>(a); }
constexpr Component magnetic(std::size_t a) { return static_cast<Component>(a + 3); }
constexpr bool is_electric(Component c) { return component_index(c) < 3; }

const char* component_name(Component c);

/// The six field components E1..E3, H1..H3 on a common lattice.
class FieldState {
 public:
  FieldState() = default;
  explicit FieldState(const Extents& extents);

  const Extents& extents() const { return fields_[0].extents(); }

  Lattice& operator[](Component c) { return fields_[component_index(c)]; }
  const Lattice& operator[](Component c) const { return fields_[component_index(c)]; }

  bool all_finite() const;

  friend bool operator==(const FieldState&, const FieldState&) = default;

 private:
  std::array<Lattice, 6> fields_;
};

namespace init {

/// Plane wave E1 = cos(4*pi*(x+y+z)), E2 = -2 E1, E3 = E1, H1 = sqrt(3) E1,
/// H2 = 0, H3 = -sqrt(3) E1.
struct PlaneWave {};

struct Zero {};

struct Constant {
  double value = 0.0;
  Component component = Component::E1;
};

/// Returns (E1, E2, E3, H1, H2, H3) at a node position.
struct Custom {
  std::function<std::array<double, 6>(double, double, double)> fn;
};

}  // namespace init

using FieldInit = std::variant<init::PlaneWave, init::Zero, init::Constant, init::Custom>;

FieldState init_fields(const Grid& grid, const FieldInit& selector);

/// A copy of one component along one axis. `transverse` holds the two fixed
/// indices of the other axes in ascending axis order: (j,k) for x, (i,k)
/// for y, (i,j) for z.
struct Line {
  Component component = Component::E1;
  Axis axis = Axis::x;
  std::array<std::size_t, 2> transverse{};
  std::vector<double> values;
};

Line line_view(const FieldState& state, Component component, Axis axis,
               std::array<std::size_t, 2> transverse);
void write_line(FieldState& state, const Line& line);

/// Strided addressing of the lines of a lattice along one axis. Line number
/// l enumerates the transverse index pairs with the lower axis fastest.
class LineLayout {
 public:
  LineLayout(const Extents& extents, Axis axis);

  std::size_t length() const { return length_; }
  std::size_t stride() const { return stride_; }
  std::size_t line_count() const { return line_count_; }

  std::size_t offset(std::size_t line) const;
  std::size_t offset(std::array<std::size_t, 2> transverse) const;

  void gather(std::span<const double> lattice, std::size_t line, std::span<double> out) const {
    const std::size_t base = offset(line);
    for (std::size_t n = 0; n < length_; ++n) out[n] = lattice[base + n * stride_];
  }
  void scatter(std::span<const double> in, std::size_t line, std::span<double> lattice) const {
    const std::size_t base = offset(line);
    for (std::size_t n = 0; n < length_; ++n) lattice[base + n * stride_] = in[n];
  }

 private:
  Axis axis_;
  Extents extents_;
  std::size_t length_ = 0;
  std::size_t stride_ = 1;
  std::size_t line_count_ = 0;
};

}  // namespace smaxwell
