#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "smaxwell/circulant.hpp"
#include "smaxwell/diagnostics.hpp"
#include "smaxwell/field.hpp"
#include "smaxwell/grid.hpp"
#include "smaxwell/noise.hpp"

namespace smaxwell {

/// One family of coupled line solves: every line of `axis` solves the pair
/// (e, h) with orientation `sign`.
struct Sweep {
  Axis axis = Axis::x;
  Component e = Component::E1;
  Component h = Component::H1;
  int sign = 1;
};

/// Deterministic substep. Sweeps inside a stage write disjoint components,
/// so their execution order is irrelevant.
struct StageDescriptor {
  std::vector<Sweep> sweeps;
};

/// Throws if a component appears twice, a pair is not (electric, magnetic),
/// or a sign is not +-1.
void validate(const StageDescriptor& stage);

enum class Method { SplittingI, SplittingII };

const char* method_name(Method method);

/// Splitting I (curl = M+ + M-):
///   stage 1, s=+1: x:(E3,H2) y:(E1,H3) z:(E2,H1)
///   stage 2, s=-1: x:(E2,H3) y:(E3,H1) z:(E1,H2)
/// Splitting II (one axis per stage, the axis-aligned pair frozen):
///   stage 1 along x: (E2,H3) s=-1, (E3,H2) s=+1
///   stage 2 along y: (E3,H1) s=-1, (E1,H3) s=+1
///   stage 3 along z: (E1,H2) s=-1, (E2,H1) s=+1
/// Both finish with the pointwise stochastic rotation.
std::span<const StageDescriptor> stage_table(Method method);

/// Applies full steps of one splitting method on a fixed grid and medium.
/// The line solvers for every (axis, sign) are built once here.
class SplittingStepper {
 public:
  SplittingStepper(Method method, const Grid& grid, const Medium& medium);
  /// Overrides the grid's time step; tau == 0 yields identity stages.
  SplittingStepper(Method method, const Grid& grid, const Medium& medium, double tau);

  Method method() const { return method_; }
  double tau() const { return tau_; }

  void apply_stage(FieldState& state, const StageDescriptor& stage) const;
  void step(FieldState& state, const Lattice& increment) const;

 private:
  const PairLineSolver& solver(Axis axis, int sign) const;

  Method method_;
  Extents extents_;
  Medium medium_;
  double tau_;
  std::array<std::array<std::optional<PairLineSolver>, 2>, 3> solvers_;
};

void deterministic_stage(FieldState& state, const StageDescriptor& stage, const Grid& grid, const Medium& medium);

void step(Method method, FieldState& state, const Lattice& increment, const Grid& grid, const Medium& medium);

/// Called at every step boundary n = 0..N with t_n = n tau.
using StepObserver = std::function<void(std::size_t step, double time, const FieldState& state)>;

struct EvolveResult {
  FieldState state;
  EnergyTrace energy;  // length n_steps + 1
};

/// Runs n_steps steps driven by increments 0..n_steps-1 of `noise`. An
/// exception from an observer is rethrown as std::runtime_error naming the step.
EvolveResult evolve(Method method, FieldState state0, const NoiseSource& noise, const Grid& grid,
                    const Medium& medium, std::size_t n_steps, std::span<const StepObserver> observers = {});

}  // namespace smaxwell
