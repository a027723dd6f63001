#pragma once

#include "smaxwell/field.hpp"
#include "smaxwell/grid.hpp"

namespace smaxwell {

/// Exact flow of eps dE = -lambda H o dW, mu dH = lambda E o dW over one
/// increment. At each node, with phi = lambda dW / sqrt(eps mu), every pair
/// (E_a, H_a) is rotated:
///   E' = cos(phi) E - sqrt(mu/eps) sin(phi) H
///   H' = sqrt(eps/mu) sin(phi) E + cos(phi) H
/// which preserves eps |E|^2 + mu |H|^2 node by node.
void apply_rotation(FieldState& state, const Lattice& increment, const Medium& medium);

}  // namespace smaxwell
