#include "smaxwell/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smaxwell {

namespace {

std::size_t wrap_index(std::ptrdiff_t i, std::size_t n) {
  const auto m = static_cast<std::ptrdiff_t>(n);
  const std::ptrdiff_t r = i % m;
  return static_cast<std::size_t>(r < 0 ? r + m : r);
}

}  // namespace

Lattice::Lattice(const Extents& extents, double fill)
    : extents_(extents), values_(extents[0] * extents[1] * extents[2], fill) {}

double Lattice::wrapped(std::ptrdiff_t i, std::ptrdiff_t j, std::ptrdiff_t k) const {
  return (*this)(wrap_index(i, extents_[0]), wrap_index(j, extents_[1]), wrap_index(k, extents_[2]));
}

const char* component_name(Component c) {
  static constexpr const char* kNames[] = {"E1", "E2", "E3", "H1", "H2", "H3"};
  return kNames[component_index(c)];
}

FieldState::FieldState(const Extents& extents) {
  for (auto& f : fields_) f = Lattice(extents);
}

bool FieldState::all_finite() const {
  return std::all_of(fields_.begin(), fields_.end(), [](const Lattice& f) {
    const auto v = f.values();
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  });
}

namespace {

template <class Fn>
void fill_nodes(const Grid& grid, FieldState& state, Fn&& fn) {
  const auto& n = grid.counts();
  for (std::size_t k = 0; k < n[2]; ++k) {
    const double z = grid.node(Axis::z, k);
    for (std::size_t j = 0; j < n[1]; ++j) {
      const double y = grid.node(Axis::y, j);
      for (std::size_t i = 0; i < n[0]; ++i) {
        const double x = grid.node(Axis::x, i);
        const std::array<double, 6> v = fn(x, y, z);
        for (Component c : kComponents) state[c](i, j, k) = v[component_index(c)];
      }
    }
  }
}

}  // namespace

FieldState init_fields(const Grid& grid, const FieldInit& selector) {
  FieldState state(grid.counts());
  std::visit(
      [&](const auto& sel) {
        using T = std::decay_t<decltype(sel)>;
        if constexpr (std::is_same_v<T, init::PlaneWave>) {
          const double root3 = std::numbers::sqrt3;
          fill_nodes(grid, state, [&](double x, double y, double z) {
            const double e1 = std::cos(4.0 * std::numbers::pi * (x + y + z));
            return std::array<double, 6>{e1, -2.0 * e1, e1, root3 * e1, 0.0, -root3 * e1};
          });
        } else if constexpr (std::is_same_v<T, init::Zero>) {
          // already zero
        } else if constexpr (std::is_same_v<T, init::Constant>) {
          auto v = state[sel.component].values();
          std::fill(v.begin(), v.end(), sel.value);
        } else {
          if (!sel.fn) throw std::invalid_argument("custom initializer has no callable");
          fill_nodes(grid, state, sel.fn);
        }
      },
      selector);
  return state;
}

LineLayout::LineLayout(const Extents& extents, Axis axis) : axis_(axis), extents_(extents) {
  length_ = extents[axis_index(axis)];
  switch (axis) {
    case Axis::x: stride_ = 1; break;
    case Axis::y: stride_ = extents[0]; break;
    case Axis::z: stride_ = extents[0] * extents[1]; break;
  }
  line_count_ = extents[0] * extents[1] * extents[2] / length_;
}

std::size_t LineLayout::offset(std::size_t line) const {
  switch (axis_) {
    case Axis::x: return line * extents_[0];
    case Axis::y: {
      const std::size_t i = line % extents_[0];
      const std::size_t k = line / extents_[0];
      return i + extents_[0] * extents_[1] * k;
    }
    case Axis::z: return line;
  }
  return 0;
}

std::size_t LineLayout::offset(std::array<std::size_t, 2> t) const {
  switch (axis_) {
    case Axis::x: return extents_[0] * (t[0] + extents_[1] * t[1]);
    case Axis::y: return t[0] + extents_[0] * extents_[1] * t[1];
    case Axis::z: return t[0] + extents_[0] * t[1];
  }
  return 0;
}

namespace {

void check_transverse(const Extents& extents, Axis axis, std::array<std::size_t, 2> t) {
  std::size_t slot = 0;
  for (Axis other : kAxes) {
    if (other == axis) continue;
    if (t[slot] >= extents[axis_index(other)]) {
      throw std::out_of_range(std::string("transverse index along ") + axis_name(other) + " is " +
                              std::to_string(t[slot]) + ", lattice count is " +
                              std::to_string(extents[axis_index(other)]));
    }
    ++slot;
  }
}

}  // namespace

Line line_view(const FieldState& state, Component component, Axis axis,
               std::array<std::size_t, 2> transverse) {
  check_transverse(state.extents(), axis, transverse);
  const LineLayout layout(state.extents(), axis);
  Line line{component, axis, transverse, std::vector<double>(layout.length())};
  const auto src = state[component].values();
  const std::size_t base = layout.offset(transverse);
  for (std::size_t n = 0; n < layout.length(); ++n) line.values[n] = src[base + n * layout.stride()];
  return line;
}

void write_line(FieldState& state, const Line& line) {
  check_transverse(state.extents(), line.axis, line.transverse);
  const LineLayout layout(state.extents(), line.axis);
  if (line.values.size() != layout.length()) {
    throw std::invalid_argument("line length " + std::to_string(line.values.size()) +
                                " does not match axis count " + std::to_string(layout.length()));
  }
  auto dst = state[line.component].values();
  const std::size_t base = layout.offset(line.transverse);
  for (std::size_t n = 0; n < layout.length(); ++n) dst[base + n * layout.stride()] = line.values[n];
}

}  // namespace smaxwell
