#pragma once

// Orthogonal polynomials and displaced Fock-state machinery.
//
// Conventions: physicists' Hermite polynomials, position operator
// x = (a + a^dagger) / 2, displacement D(alpha) = exp(alpha a^dagger - alpha a)
// for real alpha.

#include <cmath>
#include <cstddef>
#include <numbers>

#include "rabispec/errors.hpp"

namespace rabispec {

/// Polynomial index / photon number.
struct PolyOrder {
  int n = 0;

  constexpr PolyOrder() = default;
  constexpr PolyOrder(int value) : n(value) {  // NOLINT: implicit by intent
    if (value < 0) throw InvalidArgument("polynomial order must be >= 0");
  }
  constexpr operator int() const noexcept { return n; }
};

/// Laguerre polynomial L_n(x) by the three-term recurrence.
inline double laguerre(PolyOrder order, double x) {
  const int n = order;
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Associated Laguerre polynomial L_n^(alpha)(x), integer alpha >= 0.
inline double assoc_laguerre(PolyOrder order, int alpha, double x) {
  if (alpha < 0) throw InvalidArgument("associated Laguerre index must be >= 0");
  const int n = order;
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next =
        ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Physicists' Hermite polynomial H_n(x).
inline double hermite(PolyOrder order, double x) {
  const int n = order;
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Normalization of exp(-u^2) H_n(sqrt(2) u) over the real line:
/// (2/pi)^(1/4) / sqrt(2^n n!).
inline double displaced_fock_norm(PolyOrder order) {
  double norm = std::pow(2.0 / std::numbers::pi, 0.25);
  for (int k = 1; k <= order.n; ++k) norm /= std::sqrt(2.0 * k);
  return norm;
}

/// Normalized coordinate wavefunction <x|D(beta)|n>.
inline double displaced_fock_wavefunction(PolyOrder order, double beta, double x) {
  const double u = x - beta;
  return displaced_fock_norm(order) * std::exp(-u * u) *
         hermite(order, std::numbers::sqrt2 * u);
}

/// <m|D(alpha)|n> for real alpha, associated-Laguerre closed form.
inline double displacement_matrix_element(PolyOrder row, PolyOrder col, double alpha) {
  const int m = row;
  const int n = col;
  const int lo = m < n ? m : n;
  const int hi = m < n ? n : m;
  const int diff = hi - lo;
  // sqrt(lo!/hi!)
  double ratio = 1.0;
  for (int k = lo + 1; k <= hi; ++k) ratio /= std::sqrt(static_cast<double>(k));
  const double signed_alpha = m >= n ? alpha : -alpha;
  return ratio * std::pow(signed_alpha, diff) * std::exp(-0.5 * alpha * alpha) *
         assoc_laguerre(lo, diff, alpha * alpha);
}

/// Composite trapezoid rule on a uniform grid of `points` nodes.
template <class F>
double integrate_trapezoid(F&& f, double a, double b, std::size_t points) {
  if (points < 2) throw InvalidArgument("trapezoid rule needs at least two nodes");
  const double h = (b - a) / static_cast<double>(points - 1);
  double sum = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i + 1 < points; ++i) sum += f(a + h * static_cast<double>(i));
  return sum * h;
}

/// Integration window and node count for displaced-Fock integrals.
struct QuadratureGrid {
  double lower;
  double upper;
  std::size_t points;
};

inline QuadratureGrid displaced_fock_grid(double beta, std::size_t points = 4001) {
  const double half_width = 8.0 + std::abs(beta);
  return {-half_width, half_width, points};
}

}  // namespace rabispec
