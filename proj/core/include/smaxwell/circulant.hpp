#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace smaxwell {

/// Fourier symbols of the periodic compact-difference pair on n points:
///   A = (1/2) * circ(1, 2, 1),  (A u)_i = (u_{i-1} + 2 u_i + u_{i+1}) / 2
///   B = circ(-1, 0, +1),        (B u)_i = u_{i+1} - u_{i-1}
/// Both are circulant, so mode k of A is a_hat[k] = 1 + cos(2 pi k / n) and
/// mode k of B is i * b[k] with b[k] = 2 sin(2 pi k / n).
struct CirculantSpectra {
  std::size_t n = 0;
  std::vector<double> a_hat;
  std::vector<double> b;
};

/// Throws std::invalid_argument unless n is odd and >= 3.
CirculantSpectra circulant_spectra(std::size_t n);

enum class Stencil { A, B };

void apply_stencil(std::span<const double> line, Stencil which, std::span<double> out);
std::vector<double> apply_stencil(std::span<const double> line, Stencil which);

/// Coefficients of one coupled implicit-midpoint line system
///   eps A x - s c B y = eps A e + s c B h
///   mu  A y - s c B x = mu  A h + s c B e
/// with c = tau / (2 h) for the sweep axis.
struct LineSystemParams {
  int sign = 1;
  double c = 0.0;
  double eps = 1.0;
  double mu = 1.0;
};

void validate(const LineSystemParams& params);

/// Direct spectral solver for the coupled (E, H) line system of fixed size.
///
/// Each Fourier mode decouples into a 2x2 complex system
///   [[eps a_k, -s c i b_k], [-s c i b_k, mu a_k]] (x_k, y_k) = rhs_k
/// with determinant eps mu a_k^2 + c^2 b_k^2 > 0; its closed-form inverse is
/// folded into three real mode multipliers at construction. The solver is
/// immutable; concurrent solve() calls are safe as long as each thread owns
/// its Workspace.
class PairLineSolver {
 public:
  class Workspace {
   public:
    explicit Workspace(std::size_t capacity);
    Workspace(Workspace&&) noexcept;
    Workspace& operator=(Workspace&&) noexcept;
    ~Workspace();

    std::size_t capacity() const { return capacity_; }

    /// Scratch for callers that gather strided lines.
    std::span<double> e_line() { return {e_line_.data(), capacity_}; }
    std::span<double> h_line() { return {h_line_.data(), capacity_}; }

   private:
    friend class PairLineSolver;
    struct Buffers;
    std::size_t capacity_ = 0;
    std::unique_ptr<Buffers> buffers_;
    std::vector<double> e_line_;
    std::vector<double> h_line_;
  };

  PairLineSolver(std::size_t n, const LineSystemParams& params);
  ~PairLineSolver();
  PairLineSolver(PairLineSolver&&) noexcept;
  PairLineSolver& operator=(PairLineSolver&&) noexcept;

  std::size_t size() const { return n_; }
  const LineSystemParams& params() const { return params_; }
  const CirculantSpectra& spectra() const { return spectra_; }

  Workspace make_workspace() const { return Workspace(n_); }

  /// Outputs may alias the inputs.
  void solve(std::span<const double> e, std::span<const double> h, std::span<double> e_out,
             std::span<double> h_out, Workspace& ws) const;

 private:
  struct Transform;
  std::size_t n_ = 0;
  LineSystemParams params_;
  CirculantSpectra spectra_;
  std::shared_ptr<const Transform> transform_;
  // x_k = diag_k e_k + i coupling_e_k h_k ; y_k = i coupling_h_k e_k + diag_k h_k
  std::vector<double> diag_;
  std::vector<double> coupling_e_;
  std::vector<double> coupling_h_;
};

/// One-shot convenience wrapper around PairLineSolver. Rejects nonfinite input.
std::pair<std::vector<double>, std::vector<double>> solve_pair_line(std::span<const double> e,
                                                                     std::span<const double> h,
                                                                     const LineSystemParams& params);

/// Max-norm residual of the assembled real system for a candidate solution.
double pair_line_residual(std::span<const double> e, std::span<const double> h,
                          std::span<const double> e_new, std::span<const double> h_new,
                          const LineSystemParams& params);

}  // namespace smaxwell
