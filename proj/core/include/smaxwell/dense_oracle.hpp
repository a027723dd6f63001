#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "smaxwell/circulant.hpp"
#include "smaxwell/field.hpp"
#include "smaxwell/grid.hpp"
#include "smaxwell/splitting.hpp"

// Slow dense reference implementations. They assemble every matrix entry by
// entry from the stencils and use LU / eigen solvers, sharing nothing with
// the spectral fast path. Sizes are capped; tests only.
namespace smaxwell::oracle {

using DenseMatrix = Eigen::MatrixXd;

inline constexpr std::size_t kMaxLineSize = 64;
inline constexpr std::size_t kMaxGridSize = 7 * 7 * 7;

struct DenseOperators {
  DenseMatrix a;         // n x n
  DenseMatrix b;         // n x n
  DenseMatrix block_a;   // blockdiag(A, A)
  DenseMatrix block_b;   // [[0, B], [B, 0]]
  std::optional<DenseMatrix> block_a_inv_b;  // empty when A is singular
  bool singular = false;
  double min_eigenvalue = 0.0;
};

/// Any n >= 3; even n reports `singular` instead of failing.
DenseOperators build_dense_operators(std::size_t n);

struct PropertyReport {
  std::size_t n = 0;
  double symmetry_defect = 0.0;       // max |A - A^T| of the block matrix
  double min_eigenvalue = 0.0;
  double eigenvalue_mismatch = 0.0;   // vs sorted 1 + cos(2 pi k / n)
  double b_skew_defect = 0.0;         // max |B + B^T| of the block matrix
  double a_inv_b_skew_defect = 0.0;   // max |K + K^T|, K = A^{-1} B; NaN if singular
  bool symmetric = false;
  bool positive_definite = false;
  bool b_skew = false;
  bool a_inv_b_skew = false;

  bool all_pass() const { return symmetric && positive_definite && b_skew && a_inv_b_skew; }
};

PropertyReport matrix_property_report(std::size_t n);

/// Solves [[eps A, -s c B], [-s c B, mu A]] (x, y) = (eps A e + s c B h, mu A h + s c B e)
/// by partial-pivot LU. Throws std::domain_error when A is singular.
std::pair<std::vector<double>, std::vector<double>> dense_solve_pair_line(std::span<const double> e,
                                                                           std::span<const double> h,
                                                                           const LineSystemParams& params);

/// Whole-stage reference: assembles the global 6N x 6N implicit-midpoint
/// system D (u' - u) = S (u' + u) / 2 with S built from s (tau/h) A^{-1} B
/// blocks, and solves it densely.
FieldState dense_stage(const FieldState& state, const StageDescriptor& stage, const Grid& grid,
                       const Medium& medium, double tau);

}  // namespace smaxwell::oracle
