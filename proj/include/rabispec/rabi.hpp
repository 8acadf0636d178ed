#pragma once

// Biased quantum Rabi model in a truncated qubit (x) Fock basis.
//
// H = -(1/2)(delta sigma_x + epsilon sigma_z) + omega a^dag a + g sigma_z (a + a^dag)
//
// with every coefficient a linear frequency in GHz (h = 1). Basis index is
// q * (n_max + 1) + n, where q = 0 is the sigma_z = +1 persistent-current
// state (anticlockwise) and q = 1 the sigma_z = -1 state (clockwise).

#include <cmath>
#include <compare>
#include <map>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "rabispec/errors.hpp"
#include "rabispec/jacobi.hpp"

namespace rabispec {

struct CircuitParams {
  double delta = 0.0;    ///< bare qubit splitting, GHz
  double epsilon = 0.0;  ///< energy bias, GHz
  double omega = 0.0;    ///< oscillator frequency, GHz
  double g = 0.0;        ///< coupling, GHz

  /// Throws InvalidArgument unless all fields are finite, delta >= 0,
  /// omega > 0 and g >= 0.
  void validate() const {
    if (!std::isfinite(delta) || !std::isfinite(epsilon) || !std::isfinite(omega) ||
        !std::isfinite(g))
      throw InvalidArgument("circuit parameters must be finite");
    if (delta < 0.0) throw InvalidArgument("delta must be >= 0");
    if (omega <= 0.0) throw InvalidArgument("omega must be > 0");
    if (g < 0.0) throw InvalidArgument("g must be >= 0");
  }

  double beta() const { return g / omega; }

  friend bool operator==(const CircuitParams&, const CircuitParams&) = default;
};

/// Highest retained Fock state.
class TruncationSize {
public:
  static constexpr int kMinimum = 10;
  static constexpr int kDefault = 40;

  constexpr TruncationSize() = default;
  explicit TruncationSize(int n_max) : n_max_(n_max) {
    if (n_max < kMinimum)
      throw InvalidArgument("truncation n_max must be >= " + std::to_string(kMinimum));
  }
  constexpr int n_max() const noexcept { return n_max_; }
  constexpr int fock_dim() const noexcept { return n_max_ + 1; }
  constexpr int dim() const noexcept { return 2 * (n_max_ + 1); }

  friend bool operator==(TruncationSize, TruncationSize) = default;

private:
  int n_max_ = kDefault;
};

inline Eigen::MatrixXd build_hamiltonian(const CircuitParams& p, TruncationSize trunc = {}) {
  p.validate();
  const int nf = trunc.fock_dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(trunc.dim(), trunc.dim());
  for (int q = 0; q < 2; ++q) {
    const double sz = q == 0 ? 1.0 : -1.0;
    const int off = q * nf;
    for (int n = 0; n < nf; ++n) {
      h(off + n, off + n) = -0.5 * p.epsilon * sz + p.omega * n;
      if (n + 1 < nf) {
        const double x = p.g * sz * std::sqrt(static_cast<double>(n + 1));
        h(off + n, off + n + 1) = x;
        h(off + n + 1, off + n) = x;
      }
    }
  }
  for (int n = 0; n < nf; ++n) {
    h(n, nf + n) = -0.5 * p.delta;
    h(nf + n, n) = -0.5 * p.delta;
  }
  return h;
}

struct Spectrum {
  Eigen::VectorXd eigenvalues;   ///< ascending, GHz
  Eigen::MatrixXd eigenvectors;  ///< orthonormal columns
  TruncationSize truncation;

  Eigen::Index size() const { return eigenvalues.size(); }
  double energy(Eigen::Index k) const { return eigenvalues(k); }
  Eigen::VectorXd state(Eigen::Index k) const { return eigenvectors.col(k); }
};

inline Spectrum eigendecompose(const Eigen::MatrixXd& h, TruncationSize trunc,
                               const JacobiOptions& opts = {}) {
  if (h.rows() != trunc.dim())
    throw InvalidArgument("eigendecompose: matrix size does not match truncation");
  EigenSystem es = jacobi_eigensystem(h, opts);
  return Spectrum{std::move(es.values), std::move(es.vectors), trunc};
}

inline Spectrum solve(const CircuitParams& p, TruncationSize trunc = {}) {
  return eigendecompose(build_hamiltonian(p, trunc), trunc);
}

/// Sorted eigenvalues without eigenvectors; for inner loops of fits.
inline Eigen::VectorXd eigenvalues_only(const CircuitParams& p, TruncationSize trunc = {}) {
  JacobiOptions opts;
  opts.compute_vectors = false;
  return jacobi_eigensystem(build_hamiltonian(p, trunc), opts).values;
}

/// max_k ||H v_k - lambda_k v_k||_2
inline double max_residual(const Eigen::MatrixXd& h, const Spectrum& s) {
  const Eigen::MatrixXd r =
      h * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal();
  return r.colwise().norm().maxCoeff();
}

/// max |V^T V - I|
inline double orthonormality_defect(const Spectrum& s) {
  const Eigen::Index n = s.eigenvectors.cols();
  return (s.eigenvectors.transpose() * s.eigenvectors - Eigen::MatrixXd::Identity(n, n))
      .cwiseAbs()
      .maxCoeff();
}

/// Applies (a + a^dag) acting on the oscillator factor.
inline Eigen::VectorXd apply_position(const Eigen::VectorXd& v, TruncationSize trunc) {
  const int nf = trunc.fock_dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (int q = 0; q < 2; ++q) {
    const int off = q * nf;
    for (int n = 0; n < nf; ++n) {
      if (n > 0) out(off + n) += std::sqrt(static_cast<double>(n)) * v(off + n - 1);
      if (n + 1 < nf) out(off + n) += std::sqrt(static_cast<double>(n + 1)) * v(off + n + 1);
    }
  }
  return out;
}

/// Applies sigma_x (-1)^(a^dag a): the parity operator in this gauge.
inline Eigen::VectorXd apply_parity(const Eigen::VectorXd& v, TruncationSize trunc) {
  const int nf = trunc.fock_dim();
  Eigen::VectorXd out(v.size());
  for (int n = 0; n < nf; ++n) {
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    out(n) = sign * v(nf + n);
    out(nf + n) = sign * v(n);
  }
  return out;
}

enum class Parity : int { odd = -1, undefined = 0, even = 1 };

inline const char* to_string(Parity p) {
  switch (p) {
    case Parity::odd: return "odd";
    case Parity::even: return "even";
    default: return "undefined";
  }
}

inline double parity_expectation(const Eigen::VectorXd& v, TruncationSize trunc) {
  return v.dot(apply_parity(v, trunc));
}

inline Parity total_parity(const Eigen::VectorXd& v, TruncationSize trunc) {
  if (v.size() != trunc.dim()) throw InvalidArgument("state size does not match truncation");
  const double p = parity_expectation(v, trunc);
  if (p > 0.999) return Parity::even;
  if (p < -0.999) return Parity::odd;
  return Parity::undefined;
}

/// |<k|(a + a^dag)|l>|
inline double transition_matrix_element(const Spectrum& s, Eigen::Index k, Eigen::Index l) {
  if (k < 0 || l < 0 || k >= s.size() || l >= s.size())
    throw InvalidArgument("transition_matrix_element: index out of range");
  return std::abs(s.eigenvectors.col(k).dot(apply_position(s.eigenvectors.col(l), s.truncation)));
}

// ----------------------------------------------------------------------------
// Parity-based labelling

enum class QubitState { g, e };

struct Label {
  QubitState qubit = QubitState::g;
  int n = 0;

  friend auto operator<=>(const Label&, const Label&) = default;
};

inline std::string to_string(const Label& l) {
  return std::string(l.qubit == QubitState::g ? "g" : "e") + std::to_string(l.n);
}

struct LevelEntry {
  double energy = 0.0;
  Eigen::Index index = 0;
};

struct LabeledLevels {
  std::map<Label, LevelEntry> entries;

  bool contains(const Label& l) const { return entries.count(l) != 0; }
  const LevelEntry& at(const Label& l) const {
    auto it = entries.find(l);
    if (it == entries.end()) throw MissingLabelError("no level labelled " + to_string(l));
    return it->second;
  }
  double energy(const Label& l) const { return at(l).energy; }
  Eigen::Index index(const Label& l) const { return at(l).index; }
};

struct LabelOptions {
  int max_photon = 2;
  double dominance_ratio = 10.0;
  double absolute_floor = 1e-6;
};

/// Labels the lowest 2 * (max_photon + 1) eigenstates as |g n>, |e n>.
///
/// |g0>, |e0> are the two lowest states. For each n, of the eigenstates with
/// ordinals 2n+2 and 2n+3 the one coupled to |g n> by (a + a^dag) is
/// |g n+1>, the other |e n+1>. A candidate wins only if its element exceeds
/// `dominance_ratio` times the other's and `absolute_floor`.
inline LabeledLevels assign_labels(const Spectrum& s, const CircuitParams& p,
                                   const LabelOptions& opts = {}) {
  p.validate();
  if (p.epsilon != 0.0) throw InvalidArgument("assign_labels requires epsilon == 0");
  if (!(p.delta > 0.0 && p.delta < p.omega))
    throw InvalidArgument("assign_labels requires 0 < delta < omega");
  if (opts.max_photon < 0) throw InvalidArgument("max_photon must be >= 0");
  if (2 * (opts.max_photon + 1) > s.size())
    throw InvalidArgument("assign_labels: spectrum too small for requested labels");

  LabeledLevels out;
  auto put = [&](QubitState q, int n, Eigen::Index idx) {
    out.entries[Label{q, n}] = LevelEntry{s.energy(idx), idx};
  };
  put(QubitState::g, 0, 0);
  put(QubitState::e, 0, 1);
  for (int n = 0; n < opts.max_photon; ++n) {
    const Eigen::Index gn = out.index({QubitState::g, n});
    const Eigen::Index first = 2 * n + 2;
    const Eigen::Index second = 2 * n + 3;
    const double m1 = transition_matrix_element(s, gn, first);
    const double m2 = transition_matrix_element(s, gn, second);
    const bool first_wins = m1 > opts.dominance_ratio * m2 && m1 > opts.absolute_floor;
    const bool second_wins = m2 > opts.dominance_ratio * m1 && m2 > opts.absolute_floor;
    if (first_wins == second_wins) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "ambiguous assignment of g" << n + 1 << ": |<g" << n << "|X|" << first
          << ">| = " << m1 << ", |<g" << n << "|X|" << second << ">| = " << m2;
      throw AmbiguousLabelError(msg.str(), m1, m2);
    }
    put(QubitState::g, n + 1, first_wins ? first : second);
    put(QubitState::e, n + 1, first_wins ? second : first);
  }
  return out;
}

/// Delta_n = E(e n) - E(g n); negative when the levels are inverted.
inline double photon_number_qubit_frequency(const LabeledLevels& labels, int n) {
  return labels.energy({QubitState::e, n}) - labels.energy({QubitState::g, n});
}

}  // namespace rabispec
