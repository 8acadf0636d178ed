#pragma once

// Small dense Levenberg-Marquardt solver with central-difference Jacobians.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "rabispec/errors.hpp"

namespace rabispec {

struct LmOptions {
  int max_iterations = 200;
  /// Stop once an accepted step changes the cost by less than this fraction.
  double relative_cost_tolerance = 1e-10;
  /// Central-difference step, relative to max(|p_i|, step_floor).
  double jacobian_step = 1e-6;
  double step_floor = 1e-3;
  double initial_damping = 1e-3;
};

struct LmResult {
  Eigen::VectorXd params;
  double cost = 0.0;  ///< 0.5 * ||r||^2
  int iterations = 0;
  int evaluations = 0;
  /// Ratio of smallest to largest singular value of the final Jacobian.
  double inverse_condition = 0.0;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

namespace detail {

inline Eigen::MatrixXd central_jacobian(const ResidualFn& f, const Eigen::VectorXd& p,
                                        Eigen::Index m, const LmOptions& opts, int& evals) {
  Eigen::MatrixXd j(m, p.size());
  Eigen::VectorXd probe = p;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double h = opts.jacobian_step * std::max(std::abs(p(i)), opts.step_floor);
    probe(i) = p(i) + h;
    const Eigen::VectorXd up = f(probe);
    probe(i) = p(i) - h;
    const Eigen::VectorXd down = f(probe);
    probe(i) = p(i);
    evals += 2;
    j.col(i) = (up - down) / (2.0 * h);
  }
  return j;
}

}  // namespace detail

/// Minimizes 0.5 * ||f(p)||^2 from `start`. Throws ConvergenceError when the
/// iteration cap is reached first.
inline LmResult levenberg_marquardt(const ResidualFn& f, Eigen::VectorXd start,
                                    const LmOptions& opts = {}) {
  LmResult out;
  Eigen::VectorXd p = std::move(start);
  Eigen::VectorXd r = f(p);
  out.evaluations = 1;
  if (!r.allFinite()) throw InvalidArgument("levenberg_marquardt: non-finite initial residual");
  double cost = 0.5 * r.squaredNorm();
  double lambda = opts.initial_damping;
  bool converged = false;
  Eigen::MatrixXd j;

  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    j = detail::central_jacobian(f, p, r.size(), opts, out.evaluations);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd grad = j.transpose() * r;
    if (cost == 0.0 || grad.norm() == 0.0) {
      converged = true;
      break;
    }
    const Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-12 * jtj.diagonal().maxCoeff());

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * diag;
      const Eigen::VectorXd step = a.ldlt().solve(-grad);
      const Eigen::VectorXd trial = p + step;
      const Eigen::VectorXd rt = f(trial);
      ++out.evaluations;
      const double trial_cost = rt.allFinite() ? 0.5 * rt.squaredNorm() : INFINITY;
      if (trial_cost < cost) {
        const double change = (cost - trial_cost) / cost;
        p = trial;
        r = rt;
        cost = trial_cost;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        if (change < opts.relative_cost_tolerance) converged = true;
      } else {
        lambda *= 10.0;
        // No descent direction left at working precision: stationary point.
        if (lambda > 1e16) {
          converged = true;
          break;
        }
      }
    }
    if (converged) {
      ++iter;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("levenberg_marquardt: no convergence after " +
                           std::to_string(opts.max_iterations) + " iterations");

  j = detail::central_jacobian(f, p, r.size(), opts, out.evaluations);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
  const Eigen::VectorXd sv = svd.singularValues();
  out.inverse_condition = sv.size() == 0 || sv(0) == 0.0 ? 0.0 : sv(sv.size() - 1) / sv(0);
  out.params = std::move(p);
  out.cost = cost;
  out.iterations = iter;
  return out;
}

}  // namespace rabispec
