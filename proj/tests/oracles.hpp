#pragma once

// Test-only reference computations, kept independent of the library paths
// they check.

#include <cmath>

#include <Eigen/Dense>

namespace rabispec::testing {

/// exp(A) by scaling and squaring of a truncated Taylor series.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd scaled = a / std::pow(2.0, squarings);
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// Annihilation operator on Fock states 0..dim-1.
inline Eigen::MatrixXd annihilation(int dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// Rabi Hamiltonian from Kronecker products of Pauli and ladder matrices.
inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::MatrixXd rabi_hamiltonian_kron(double delta, double epsilon, double omega,
                                             double g, int n_max) {
  const int nf = n_max + 1;
  Eigen::MatrixXd sx(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  const Eigen::MatrixXd a = annihilation(nf);
  const Eigen::MatrixXd id2 = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd idf = Eigen::MatrixXd::Identity(nf, nf);
  return -0.5 * (delta * kron(sx, idf) + epsilon * kron(sz, idf)) +
         omega * kron(id2, a.transpose() * a) + g * kron(sz, a + a.transpose());
}

}  // namespace rabispec::testing
