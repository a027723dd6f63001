#include "smaxwell/rotation.hpp"

#include <cmath>
#include <stdexcept>

namespace smaxwell {

void apply_rotation(FieldState& state, const Lattice& increment, const Medium& medium) {
  if (increment.extents() != state.extents()) throw std::invalid_argument("increment shape differs from state");
  if (medium.lambda == 0.0) return;

  const double scale = medium.lambda / std::sqrt(medium.eps * medium.mu);
  const double e_from_h = std::sqrt(medium.mu / medium.eps);
  const double h_from_e = std::sqrt(medium.eps / medium.mu);
  const auto dw = increment.values();
  std::array<std::span<double>, 3> e{state[Component::E1].values(), state[Component::E2].values(),
                                     state[Component::E3].values()};
  std::array<std::span<double>, 3> h{state[Component::H1].values(), state[Component::H2].values(),
                                     state[Component::H3].values()};

  const auto nodes = static_cast<std::ptrdiff_t>(dw.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < nodes; ++p) {
    const double phi = scale * dw[p];
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    for (std::size_t a = 0; a < 3; ++a) {
      const double ev = e[a][p];
      const double hv = h[a][p];
      e[a][p] = c * ev - e_from_h * s * hv;
      h[a][p] = h_from_e * s * ev + c * hv;
    }
  }
}

}  // namespace smaxwell
