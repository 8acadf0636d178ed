#pragma once

// Dense symmetric eigensolver: cyclic Jacobi rotations.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rabispec/errors.hpp"

namespace rabispec {

struct JacobiOptions {
  int max_sweeps = 100;
  /// Converged once the off-diagonal Frobenius norm drops below
  /// tolerance * ||A||_F.
  double tolerance = 1e-12;
  /// Relative asymmetry accepted on input.
  double symmetry_tolerance = 1e-12;
  /// Accumulate eigenvectors; when false `vectors` is left empty.
  bool compute_vectors = true;
};

/// Eigenvalues sorted ascending; column k of `vectors` belongs to `values[k]`.
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};

namespace detail {

inline double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i) sum += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(sum);
}

}  // namespace detail

inline double asymmetry(const Eigen::MatrixXd& a) {
  return (a - a.transpose()).norm();
}

inline EigenSystem jacobi_eigensystem(Eigen::MatrixXd a, const JacobiOptions& opts = {}) {
  if (a.rows() != a.cols()) throw InvalidArgument("eigendecompose: matrix is not square");
  if (!a.allFinite()) throw InvalidArgument("eigendecompose: matrix has non-finite entries");
  const Eigen::Index n = a.rows();
  const double fro = a.norm();
  if (asymmetry(a) > opts.symmetry_tolerance * std::max(fro, 1e-300) && fro > 0.0)
    throw InvalidArgument("eigendecompose: matrix is not symmetric");
  // Work on the exactly symmetric part.
  a = 0.5 * (a + a.transpose()).eval();

  const bool want_vectors = opts.compute_vectors;
  Eigen::MatrixXd v = want_vectors ? Eigen::MatrixXd::Identity(n, n) : Eigen::MatrixXd();
  const double target = opts.tolerance * fro;
  int sweep = 0;
  while (detail::off_diagonal_norm(a) > target) {
    if (sweep == opts.max_sweeps)
      throw ConvergenceError("eigendecompose: Jacobi did not converge in " +
                             std::to_string(opts.max_sweeps) + " sweeps");
    ++sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Skip entries that are already negligible against both diagonals.
        if (sweep > 3 && std::abs(apq) * 1e18 < std::abs(app) &&
            std::abs(apq) * 1e18 < std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // A <- J^T A J with J the (p, q) rotation; columns first, then rows.
        auto col_p = a.col(p);
        auto col_q = a.col(q);
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = col_p(k);
          const double akq = col_q(k);
          col_p(k) = c * akp - s * akq;
          col_q(k) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          a(p, k) = a(k, p);
          a(q, k) = a(k, q);
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;

        if (!want_vectors) continue;
        auto vp = v.col(p);
        auto vq = v.col(q);
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = vp(k);
          const double vkq = vq(k);
          vp(k) = c * vkp - s * vkq;
          vq(k) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  EigenSystem out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src);
    if (!want_vectors) continue;
    Eigen::VectorXd col = v.col(src);
    // Sign fix: largest-magnitude component positive (first one on ties).
    Eigen::Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col(imax) < 0.0) col = -col;
    out.vectors.col(k) = col;
  }
  return out;
}

}  // namespace rabispec
