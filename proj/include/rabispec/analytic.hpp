#pragma once

// Deep-strong-coupling closed forms: cat-state eigenstates, the Laguerre
// expression for the photon-number-dependent qubit frequency, and the
// displaced-Fock overlap integral.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rabispec/errors.hpp"
#include "rabispec/rabi.hpp"
#include "rabispec/specfun.hpp"

namespace rabispec {

/// Delta * exp(-2 beta^2) * L_n(4 beta^2), beta = g / omega.
inline double delta_n_closed_form(double delta, double beta, PolyOrder n) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be > 0");
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be >= 0");
  return delta * std::exp(-2.0 * beta * beta) * laguerre(n, 4.0 * beta * beta);
}

/// The two couplings beta = sqrt(2 -+ sqrt(2)) / 2 where Delta_2 vanishes.
inline std::pair<double, double> delta_2_zeros() {
  return {std::sqrt(2.0 - std::numbers::sqrt2) / 2.0,
          std::sqrt(2.0 + std::numbers::sqrt2) / 2.0};
}

/// Roots of beta -> L_n(4 beta^2) on (lo, hi): sign changes on a uniform
/// grid refined by bisection.
inline std::vector<double> closed_form_zeros(PolyOrder n, double lo, double hi,
                                             int grid_points = 2000) {
  auto f = [&](double b) { return laguerre(n, 4.0 * b * b); };
  std::vector<double> roots;
  const double h = (hi - lo) / grid_points;
  double a = lo;
  double fa = f(a);
  for (int i = 1; i <= grid_points; ++i) {
    const double b = lo + h * i;
    const double fb = f(b);
    if (fa == 0.0 && i > 1) {
      roots.push_back(a);
    } else if (fa * fb < 0.0) {
      double left = a, right = b, fl = fa;
      for (int it = 0; it < 200 && right - left > 1e-15 * std::max(1.0, right); ++it) {
        const double mid = 0.5 * (left + right);
        const double fm = f(mid);
        if ((fm < 0.0) == (fl < 0.0)) {
          left = mid;
          fl = fm;
        } else {
          right = mid;
        }
      }
      roots.push_back(0.5 * (left + right));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

struct OverlapResult {
  int n = 0;
  double beta = 0.0;
  double value_quadrature = 0.0;
  double value_closed_form = 0.0;
};

/// I_n(beta) = <n|D^dag(-beta) D(beta)|n>, by quadrature of the normalized
/// wavefunctions and by exp(-2 beta^2) L_n(4 beta^2).
inline OverlapResult overlap_integral(PolyOrder n, double beta, std::size_t points = 4001) {
  if (n.n > 10) throw InvalidArgument("overlap_integral supports n <= 10");
  if (!(beta >= 0.0 && beta <= 2.0)) throw InvalidArgument("overlap_integral needs 0 <= beta <= 2");
  const QuadratureGrid grid = displaced_fock_grid(beta, points);
  auto integrand = [&](double x) {
    return displaced_fock_wavefunction(n, -beta, x) * displaced_fock_wavefunction(n, beta, x);
  };
  const double fine = integrate_trapezoid(integrand, grid.lower, grid.upper, grid.points);
  const double coarse =
      integrate_trapezoid(integrand, grid.lower, grid.upper, (grid.points + 1) / 2);
  if (std::abs(fine - coarse) > 1e-10)
    throw QuadratureError("overlap quadrature did not converge");
  return {n, beta, fine, std::exp(-2.0 * beta * beta) * laguerre(n, 4.0 * beta * beta)};
}

/// I_n(beta) / I_n(0); I_n(0) = 1 for normalized states.
inline double normalized_overlap(PolyOrder n, double beta) {
  const OverlapResult r = overlap_integral(n, beta);
  return r.value_quadrature / overlap_integral(n, 0.0).value_quadrature;
}

// ----------------------------------------------------------------------------

struct CatState {
  Label label;
  Eigen::VectorXd amplitudes;  ///< qubit (x) Fock layout of rabi.hpp
  double beta = 0.0;
  double leakage = 0.0;        ///< 1 - ||D(beta)|n>||^2 inside the truncation
};

/// (|ccw> D(-beta)|n> +- |cw> D(beta)|n>) / sqrt(2), + for g and - for e.
inline CatState cat_state(const CircuitParams& p, Label label, TruncationSize trunc = {},
                          double max_leakage = 1e-6) {
  p.validate();
  if (p.epsilon != 0.0) throw InvalidArgument("cat_state requires epsilon == 0");
  if (label.n < 0) throw InvalidArgument("photon index must be >= 0");
  const int nf = trunc.fock_dim();
  const double beta = p.beta();

  Eigen::VectorXd shifted_left(nf), shifted_right(nf);
  for (int m = 0; m < nf; ++m) {
    shifted_left(m) = displacement_matrix_element(m, label.n, -beta);
    shifted_right(m) = displacement_matrix_element(m, label.n, beta);
  }
  // Both branches have the same weight inside the truncation.
  const double leakage = std::max(0.0, 1.0 - shifted_right.squaredNorm());
  if (leakage > max_leakage)
    throw TruncationLeakageError("cat state " + to_string(label) + " leaks " +
                                     std::to_string(leakage) + " of its norm past n_max = " +
                                     std::to_string(trunc.n_max()),
                                 leakage);

  const double sign = label.qubit == QubitState::g ? 1.0 : -1.0;
  Eigen::VectorXd v(trunc.dim());
  v.head(nf) = shifted_left;
  v.tail(nf) = sign * shifted_right;
  v.normalize();
  return {label, std::move(v), beta, leakage};
}

/// |<cat|v>|^2
inline double fidelity(const CatState& cat, const Eigen::VectorXd& v) {
  const double o = cat.amplitudes.dot(v);
  return o * o;
}

// ----------------------------------------------------------------------------

struct Fig4Row {
  double beta = 0.0;
  std::vector<double> ratios;  ///< Delta_n / Delta for n = 0..n_max_label
};

inline std::vector<Fig4Row> fig4_curves(const std::vector<double>& beta_grid, int n_max_label) {
  if (n_max_label < 0) throw InvalidArgument("n_max_label must be >= 0");
  std::vector<Fig4Row> rows;
  rows.reserve(beta_grid.size());
  for (double b : beta_grid) {
    if (!(b >= 0.0 && b <= 1.6)) throw InvalidArgument("fig4 grid must lie in [0, 1.6]");
    Fig4Row row{b, {}};
    for (int n = 0; n <= n_max_label; ++n) row.ratios.push_back(delta_n_closed_form(1.0, b, n));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct DeltaComparison {
  double numeric = 0.0;
  double closed_form = 0.0;
};

inline DeltaComparison delta_n_numeric_vs_closed(const CircuitParams& p, TruncationSize trunc,
                                                 int n) {
  const Spectrum s = solve(p, trunc);
  LabelOptions opts;
  opts.max_photon = std::max(n, 0);
  const LabeledLevels labels = assign_labels(s, p, opts);
  return {photon_number_qubit_frequency(labels, n), delta_n_closed_form(p.delta, p.beta(), n)};
}

}  // namespace rabispec
