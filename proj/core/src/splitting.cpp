#include "smaxwell/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "smaxwell/rotation.hpp"

namespace smaxwell {

namespace {

using enum Component;

const std::array<StageDescriptor, 2> kSplittingI{{
    {{{Axis::x, E3, H2, +1}, {Axis::y, E1, H3, +1}, {Axis::z, E2, H1, +1}}},
    {{{Axis::x, E2, H3, -1}, {Axis::y, E3, H1, -1}, {Axis::z, E1, H2, -1}}},
}};

const std::array<StageDescriptor, 3> kSplittingII{{
    {{{Axis::x, E2, H3, -1}, {Axis::x, E3, H2, +1}}},
    {{{Axis::y, E3, H1, -1}, {Axis::y, E1, H3, +1}}},
    {{{Axis::z, E1, H2, -1}, {Axis::z, E2, H1, +1}}},
}};

std::size_t sign_slot(int sign) { return sign > 0 ? 0 : 1; }

}  // namespace

void validate(const StageDescriptor& stage) {
  std::array<bool, 6> used{};
  for (const Sweep& s : stage.sweeps) {
    if (!is_electric(s.e) || is_electric(s.h)) {
      throw std::invalid_argument("sweep pair must be (electric, magnetic)");
    }
    if (s.sign != 1 && s.sign != -1) throw std::invalid_argument("sweep sign must be +1 or -1");
    for (Component c : {s.e, s.h}) {
      if (used[component_index(c)]) {
        throw std::invalid_argument(std::string("component ") + component_name(c) + " written by two sweeps");
      }
      used[component_index(c)] = true;
    }
  }
}

const char* method_name(Method method) { return method == Method::SplittingI ? "I" : "II"; }

std::span<const StageDescriptor> stage_table(Method method) {
  if (method == Method::SplittingI) return kSplittingI;
  return kSplittingII;
}

SplittingStepper::SplittingStepper(Method method, const Grid& grid, const Medium& medium)
    : SplittingStepper(method, grid, medium, grid.tau()) {}

SplittingStepper::SplittingStepper(Method method, const Grid& grid, const Medium& medium, double tau)
    : method_(method), extents_(grid.counts()), medium_(medium), tau_(tau) {
  if (!std::isfinite(tau) || tau < 0.0) throw std::invalid_argument("stepper tau must be finite and >= 0");
  for (Axis axis : kAxes) {
    for (int sign : {1, -1}) {
      const LineSystemParams params{sign, tau / (2.0 * grid.step(axis)), medium.eps, medium.mu};
      solvers_[axis_index(axis)][sign_slot(sign)].emplace(grid.count(axis), params);
    }
  }
}

const PairLineSolver& SplittingStepper::solver(Axis axis, int sign) const {
  return *solvers_[axis_index(axis)][sign_slot(sign)];
}

void SplittingStepper::apply_stage(FieldState& state, const StageDescriptor& stage) const {
  if (state.extents() != extents_) throw std::invalid_argument("state shape does not match stepper grid");

  struct Task {
    const PairLineSolver* solver;
    LineLayout layout;
    std::span<double> e;
    std::span<double> h;
    std::size_t first_line;
  };
  std::vector<Task> tasks;
  std::size_t total = 0;
  std::size_t longest = 0;
  for (const Sweep& s : stage.sweeps) {
    Task t{&solver(s.axis, s.sign), LineLayout(extents_, s.axis), state[s.e].values(), state[s.h].values(), total};
    total += t.layout.line_count();
    longest = std::max(longest, t.layout.length());
    tasks.push_back(t);
  }

  const auto lines = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel
  {
    PairLineSolver::Workspace ws(longest);
#pragma omp for schedule(static)
    for (std::ptrdiff_t g = 0; g < lines; ++g) {
      const auto global = static_cast<std::size_t>(g);
      std::size_t t = 0;
      while (t + 1 < tasks.size() && global >= tasks[t + 1].first_line) ++t;
      const Task& task = tasks[t];
      const std::size_t line = global - task.first_line;
      const std::size_t n = task.layout.length();
      auto e = ws.e_line().first(n);
      auto h = ws.h_line().first(n);
      task.layout.gather(task.e, line, e);
      task.layout.gather(task.h, line, h);
      task.solver->solve(e, h, e, h, ws);
      task.layout.scatter(e, line, task.e);
      task.layout.scatter(h, line, task.h);
    }
  }
}

void SplittingStepper::step(FieldState& state, const Lattice& increment) const {
  for (const StageDescriptor& stage : stage_table(method_)) apply_stage(state, stage);
  apply_rotation(state, increment, medium_);
}

void deterministic_stage(FieldState& state, const StageDescriptor& stage, const Grid& grid, const Medium& medium) {
  validate(stage);
  SplittingStepper(Method::SplittingI, grid, medium).apply_stage(state, stage);
}

void step(Method method, FieldState& state, const Lattice& increment, const Grid& grid, const Medium& medium) {
  SplittingStepper(method, grid, medium).step(state, increment);
}

EvolveResult evolve(Method method, FieldState state0, const NoiseSource& noise, const Grid& grid,
                    const Medium& medium, std::size_t n_steps, std::span<const StepObserver> observers) {
  if (noise.size() < n_steps) {
    throw std::invalid_argument("noise path has " + std::to_string(noise.size()) + " increments, need " +
                                std::to_string(n_steps));
  }
  const SplittingStepper stepper(method, grid, medium);
  EvolveResult result{std::move(state0), {}};
  result.energy.times.reserve(n_steps + 1);
  result.energy.values.reserve(n_steps + 1);

  auto observe = [&](std::size_t n) {
    const double t = static_cast<double>(n) * grid.tau();
    result.energy.times.push_back(t);
    result.energy.values.push_back(discrete_energy(result.state, grid, medium));
    for (const StepObserver& hook : observers) {
      try {
        hook(n, t, result.state);
      } catch (const std::exception& ex) {
        throw std::runtime_error("observer failed at step " + std::to_string(n) + ": " + ex.what());
      }
    }
  };

  observe(0);
  for (std::size_t n = 0; n < n_steps; ++n) {
    stepper.step(result.state, noise.increment(n));
    observe(n + 1);
  }
  return result;
}

}  // namespace smaxwell
