#include "smaxwell/dense_oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smaxwell::oracle {

namespace {

DenseMatrix stencil_a(std::size_t n) {
  DenseMatrix a = DenseMatrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) += 1.0;
    a(i, (i + 1) % n) += 0.5;
    a(i, (i + n - 1) % n) += 0.5;
  }
  return a;
}

DenseMatrix stencil_b(std::size_t n) {
  DenseMatrix b = DenseMatrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    b(i, (i + 1) % n) += 1.0;
    b(i, (i + n - 1) % n) -= 1.0;
  }
  return b;
}

Eigen::VectorXd to_vector(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

DenseOperators build_dense_operators(std::size_t n) {
  if (n < 3) throw std::invalid_argument("dense operators need n >= 3");
  if (n > kMaxLineSize) throw std::invalid_argument("dense oracle is capped at n = " + std::to_string(kMaxLineSize));
  const auto m = static_cast<Eigen::Index>(n);
  DenseOperators ops;
  ops.a = stencil_a(n);
  ops.b = stencil_b(n);
  ops.block_a = DenseMatrix::Zero(2 * m, 2 * m);
  ops.block_a.topLeftCorner(m, m) = ops.a;
  ops.block_a.bottomRightCorner(m, m) = ops.a;
  ops.block_b = DenseMatrix::Zero(2 * m, 2 * m);
  ops.block_b.topRightCorner(m, m) = ops.b;
  ops.block_b.bottomLeftCorner(m, m) = ops.b;

  const Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(ops.block_a);
  ops.min_eigenvalue = eig.eigenvalues().minCoeff();
  ops.singular = ops.min_eigenvalue <= 1e-12 * eig.eigenvalues().maxCoeff();
  if (!ops.singular) ops.block_a_inv_b = ops.block_a.partialPivLu().solve(ops.block_b);
  return ops;
}

PropertyReport matrix_property_report(std::size_t n) {
  const DenseOperators ops = build_dense_operators(n);
  PropertyReport r;
  r.n = n;
  r.symmetry_defect = (ops.block_a - ops.block_a.transpose()).cwiseAbs().maxCoeff();
  r.b_skew_defect = (ops.block_b + ops.block_b.transpose()).cwiseAbs().maxCoeff();
  r.min_eigenvalue = ops.min_eigenvalue;

  // Block eigenvalues are those of A, each twice.
  const Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(ops.a);
  std::vector<double> computed(eig.eigenvalues().data(), eig.eigenvalues().data() + n);
  std::vector<double> expected(n);
  for (std::size_t k = 0; k < n; ++k) {
    expected[k] = 1.0 + std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
  std::sort(computed.begin(), computed.end());
  std::sort(expected.begin(), expected.end());
  for (std::size_t k = 0; k < n; ++k) {
    r.eigenvalue_mismatch = std::max(r.eigenvalue_mismatch, std::abs(computed[k] - expected[k]));
  }

  r.symmetric = r.symmetry_defect == 0.0;
  r.b_skew = r.b_skew_defect == 0.0;
  r.positive_definite = !ops.singular && r.min_eigenvalue > 0.0 && r.eigenvalue_mismatch <= 1e-12;
  if (ops.block_a_inv_b) {
    const DenseMatrix& k = *ops.block_a_inv_b;
    r.a_inv_b_skew_defect = (k + k.transpose()).cwiseAbs().maxCoeff();
    r.a_inv_b_skew = r.a_inv_b_skew_defect <= 1e-12;
  } else {
    r.a_inv_b_skew_defect = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

std::pair<std::vector<double>, std::vector<double>> dense_solve_pair_line(std::span<const double> e,
                                                                           std::span<const double> h,
                                                                           const LineSystemParams& p) {
  if (e.size() != h.size()) throw std::invalid_argument("E and H lines differ in length");
  const std::size_t n = e.size();
  const DenseOperators ops = build_dense_operators(n);
  if (ops.singular) {
    throw std::domain_error("averaging matrix A is singular for even size n = " + std::to_string(n));
  }
  const auto m = static_cast<Eigen::Index>(n);
  const double sc = p.sign * p.c;
  DenseMatrix lhs(2 * m, 2 * m);
  lhs << p.eps * ops.a, -sc * ops.b, -sc * ops.b, p.mu * ops.a;
  const Eigen::VectorXd ev = to_vector(e), hv = to_vector(h);
  Eigen::VectorXd rhs(2 * m);
  rhs << p.eps * ops.a * ev + sc * ops.b * hv, p.mu * ops.a * hv + sc * ops.b * ev;
  const Eigen::VectorXd sol = lhs.partialPivLu().solve(rhs);
  return {std::vector<double>(sol.data(), sol.data() + n), std::vector<double>(sol.data() + n, sol.data() + 2 * n)};
}

FieldState dense_stage(const FieldState& state, const StageDescriptor& stage, const Grid& grid,
                       const Medium& medium, double tau) {
  const std::size_t nodes = grid.size();
  if (nodes > kMaxGridSize) throw std::invalid_argument("dense_stage is capped at 7^3 nodes");
  if (state.extents() != grid.counts()) throw std::invalid_argument("state shape does not match grid");
  validate(stage);

  const auto dim = static_cast<Eigen::Index>(6 * nodes);
  auto global = [&](Component c, std::size_t node) {
    return static_cast<Eigen::Index>(component_index(c) * nodes + node);
  };

  DenseMatrix s = DenseMatrix::Zero(dim, dim);
  const auto& ext = grid.counts();
  for (const Sweep& sweep : stage.sweeps) {
    const std::size_t n = grid.count(sweep.axis);
    const DenseOperators ops = build_dense_operators(n);
    const DenseMatrix k = ops.a.partialPivLu().solve(ops.b);
    const double w = sweep.sign * tau / grid.step(sweep.axis);
    for (std::size_t kk = 0; kk < ext[2]; ++kk) {
      for (std::size_t j = 0; j < ext[1]; ++j) {
        for (std::size_t i = 0; i < ext[0]; ++i) {
          const std::array<std::size_t, 3> at{i, j, kk};
          const std::size_t row_pos = at[axis_index(sweep.axis)];
          const std::size_t row_node = i + ext[0] * (j + ext[1] * kk);
          for (std::size_t col_pos = 0; col_pos < n; ++col_pos) {
            std::array<std::size_t, 3> other = at;
            other[axis_index(sweep.axis)] = col_pos;
            const std::size_t col_node = other[0] + ext[0] * (other[1] + ext[1] * other[2]);
            const double v = w * k(static_cast<Eigen::Index>(row_pos), static_cast<Eigen::Index>(col_pos));
            s(global(sweep.e, row_node), global(sweep.h, col_node)) += v;
            s(global(sweep.h, row_node), global(sweep.e, col_node)) += v;
          }
        }
      }
    }
  }

  Eigen::VectorXd d(dim);
  Eigen::VectorXd u(dim);
  for (Component c : kComponents) {
    const double weight = is_electric(c) ? medium.eps : medium.mu;
    const auto v = state[c].values();
    for (std::size_t p = 0; p < nodes; ++p) {
      d(global(c, p)) = weight;
      u(global(c, p)) = v[p];
    }
  }
  const DenseMatrix lhs = DenseMatrix(d.asDiagonal()) - 0.5 * s;
  const Eigen::VectorXd rhs = d.asDiagonal() * u + 0.5 * s * u;
  const Eigen::VectorXd next = lhs.partialPivLu().solve(rhs);

  FieldState out(state.extents());
  for (Component c : kComponents) {
    auto v = out[c].values();
    for (std::size_t p = 0; p < nodes; ++p) v[p] = next(global(c, p));
  }
  return out;
}

}  // namespace smaxwell::oracle
