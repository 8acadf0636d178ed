#pragma once

// Single-tone spectroscopy: transition maps versus bias, hanger S21
// lineshape with a polynomial background, circuit-parameter fitting and the
// SQUID coupler inductance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rabispec/errors.hpp"
#include "rabispec/levenberg_marquardt.hpp"
#include "rabispec/rabi.hpp"

namespace rabispec {

// ----------------------------------------------------------------------------
// Transition maps

/// Ordinal transition |from> -> |to> between eigenstates sorted by energy.
struct TransitionLabel {
  int from = 0;
  int to = 1;

  friend auto operator<=>(const TransitionLabel&, const TransitionLabel&) = default;
};

inline std::string to_string(const TransitionLabel& t) {
  return std::to_string(t.from) + "->" + std::to_string(t.to);
}

/// 0->1, 0->2, 0->3, 1->2, 1->3.
inline std::vector<TransitionLabel> standard_transitions() {
  return {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}};
}

struct TransitionPoint {
  double epsilon = 0.0;
  double frequency = 0.0;
  double element = 0.0;  ///< |<from|(a + a^dag)|to>|
};

struct TransitionMap {
  std::vector<double> epsilon_grid;
  std::map<TransitionLabel, std::vector<TransitionPoint>> curves;
  double element_floor = 1e-3;
};

inline TransitionMap transition_map(const std::function<CircuitParams(double)>& params_at_eps,
                                    const std::vector<double>& epsilon_grid,
                                    TruncationSize trunc = {}, double element_floor = 1e-3) {
  TransitionMap out;
  out.epsilon_grid = epsilon_grid;
  out.element_floor = element_floor;
  const auto transitions = standard_transitions();
  for (const auto& t : transitions) out.curves[t];
  for (double eps : epsilon_grid) {
    if (!std::isfinite(eps)) throw InvalidArgument("transition_map: non-finite bias");
    const Spectrum s = solve(params_at_eps(eps), trunc);
    for (const auto& t : transitions) {
      const double element = transition_matrix_element(s, t.from, t.to);
      const double freq = s.energy(t.to) - s.energy(t.from);
      if (element > element_floor && freq > 0.0)
        out.curves[t].push_back({eps, freq, element});
    }
  }
  return out;
}

/// Caller-side helper: fixed (delta, omega, g), only epsilon varies.
inline std::function<CircuitParams(double)> vary_epsilon(CircuitParams base) {
  return [base](double eps) {
    CircuitParams p = base;
    p.epsilon = eps;
    return p;
  };
}

// ----------------------------------------------------------------------------
// Lineshape

struct LineshapeParams {
  double omega0 = 0.0;      ///< resonance, GHz
  double q_total = 0.0;     ///< Q_L
  double q_external = 0.0;  ///< Q_e
  double phi = 0.0;         ///< asymmetry phase, rad

  void validate() const {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw InvalidArgument("omega0 must be > 0");
    if (!(q_total > 0.0) || !std::isfinite(q_total)) throw InvalidArgument("Q_L must be > 0");
    if (!(q_external > 0.0) || !std::isfinite(q_external))
      throw InvalidArgument("Q_e must be > 0");
    if (!std::isfinite(phi)) throw InvalidArgument("phi must be finite");
  }
};

/// 1 - (Q_L/Q_e) e^{i phi} / (1 + 2i Q_L (w_p - w0)/w0)
inline std::complex<double> s21(const LineshapeParams& p, double omega_p) {
  using namespace std::complex_literals;
  const std::complex<double> num = (p.q_total / p.q_external) * std::exp(1i * p.phi);
  const std::complex<double> den = 1.0 + 2.0i * p.q_total * (omega_p - p.omega0) / p.omega0;
  return 1.0 - num / den;
}

/// sum_k c_k (w - center)^k, a real transmission envelope.
struct BackgroundPoly {
  static constexpr std::size_t kMaxDegree = 8;

  double center = 0.0;
  std::vector<double> coefficients{1.0, 0.0, 0.0, 0.0};

  static BackgroundPoly flat(double level = 1.0, std::size_t degree = 3, double center = 0.0) {
    BackgroundPoly bg;
    bg.center = center;
    bg.coefficients.assign(degree + 1, 0.0);
    bg.coefficients[0] = level;
    return bg;
  }

  std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }

  void validate() const {
    if (coefficients.empty()) throw InvalidArgument("background polynomial has no coefficients");
    if (degree() > kMaxDegree) throw InvalidArgument("background polynomial degree must be <= 8");
  }

  double operator()(double omega_p) const {
    const double x = omega_p - center;
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
};

struct SpectrumPoint {
  double omega_p = 0.0;
  double s21_abs = 0.0;
};

/// |S21_bg(w_p) S21(w_p)|
inline double s21_magnitude(const LineshapeParams& p, const BackgroundPoly& bg, double omega_p) {
  return std::abs(bg(omega_p) * s21(p, omega_p));
}

struct LineshapeFit {
  LineshapeParams params;
  BackgroundPoly background;
  double rms_residual = 0.0;
  int iterations = 0;
};

/// Rough starting point from a single trace: dip position, half-depth width
/// and edge level.
inline std::pair<LineshapeParams, BackgroundPoly> estimate_lineshape(
    std::span<const SpectrumPoint> data, std::size_t degree = 3) {
  if (data.size() < 3) throw InvalidArgument("estimate_lineshape needs at least 3 points");
  std::vector<SpectrumPoint> d(data.begin(), data.end());
  std::sort(d.begin(), d.end(), [](auto& a, auto& b) { return a.omega_p < b.omega_p; });
  const auto dip = std::min_element(d.begin(), d.end(),
                                    [](auto& a, auto& b) { return a.s21_abs < b.s21_abs; });
  const double base = 0.5 * (d.front().s21_abs + d.back().s21_abs);
  const double depth = std::clamp(1.0 - dip->s21_abs / base, 1e-3, 1.0);
  const double half = base * (1.0 - 0.5 * depth);
  auto left = dip;
  while (left != d.begin() && left->s21_abs < half) --left;
  auto right = dip;
  while (right + 1 != d.end() && right->s21_abs < half) ++right;
  double fwhm = right->omega_p - left->omega_p;
  if (!(fwhm > 0.0)) fwhm = (d.back().omega_p - d.front().omega_p) / 10.0;

  LineshapeParams p;
  p.omega0 = dip->omega_p;
  p.q_total = p.omega0 / fwhm;
  p.q_external = p.q_total / depth;
  p.phi = 0.0;
  double center = 0.0;
  for (const auto& pt : d) center += pt.omega_p;
  center /= static_cast<double>(d.size());
  return {p, BackgroundPoly::flat(base, degree, center)};
}

/// Joint least-squares fit of |S21_bg * S21| to magnitude data.
inline LineshapeFit fit_lineshape(std::span<const SpectrumPoint> data,
                                  const LineshapeParams& init, const BackgroundPoly& bg_init,
                                  const LmOptions& lm = {}) {
  init.validate();
  bg_init.validate();
  if (data.size() < 20) throw InvalidArgument("fit_lineshape needs at least 20 points");
  double lo = INFINITY, hi = -INFINITY, wmin = INFINITY, wmax = -INFINITY;
  for (const auto& pt : data) {
    if (!std::isfinite(pt.omega_p) || !std::isfinite(pt.s21_abs) || pt.omega_p <= 0.0)
      throw InvalidArgument("fit_lineshape: invalid data point");
    lo = std::min(lo, pt.s21_abs);
    hi = std::max(hi, pt.s21_abs);
    wmin = std::min(wmin, pt.omega_p);
    wmax = std::max(wmax, pt.omega_p);
  }
  if (hi - lo <= 1e-6 * std::abs(hi))
    throw IllConditionedError("fit_lineshape: data is flat, no resonance to fit");

  // Internal coordinates: resonance offset in initial linewidths, quality
  // factors relative to their start values, background in powers of the
  // half-span-normalized detuning.
  const double linewidth = init.omega0 / init.q_total;
  const double half_span = 0.5 * (wmax - wmin);
  const std::size_t nc = bg_init.coefficients.size();
  Eigen::VectorXd x0(4 + static_cast<Eigen::Index>(nc));
  x0(0) = 0.0;
  x0(1) = 1.0;
  x0(2) = 1.0;
  x0(3) = init.phi;
  for (std::size_t k = 0; k < nc; ++k)
    x0(4 + static_cast<Eigen::Index>(k)) = bg_init.coefficients[k] * std::pow(half_span, k);

  auto unpack = [&](const Eigen::VectorXd& x) {
    LineshapeParams p;
    p.omega0 = init.omega0 + x(0) * linewidth;
    p.q_total = init.q_total * x(1);
    p.q_external = init.q_external * x(2);
    p.phi = x(3);
    BackgroundPoly bg;
    bg.center = bg_init.center;
    bg.coefficients.resize(nc);
    for (std::size_t k = 0; k < nc; ++k)
      bg.coefficients[k] = x(4 + static_cast<Eigen::Index>(k)) / std::pow(half_span, k);
    return std::pair{p, bg};
  };

  const auto residual = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(data.size()));
    if (!(x(1) > 0.0) || !(x(2) > 0.0)) {
      r.setConstant(NAN);
      return r;
    }
    const auto [p, bg] = unpack(x);
    for (std::size_t i = 0; i < data.size(); ++i)
      r(static_cast<Eigen::Index>(i)) = s21_magnitude(p, bg, data[i].omega_p) - data[i].s21_abs;
    return r;
  };

  const LmResult res = levenberg_marquardt(residual, x0, lm);
  if (res.inverse_condition < 1e-12)
    throw IllConditionedError("fit_lineshape: Jacobian is rank deficient at the solution");
  auto [p, bg] = unpack(res.params);
  // phi and phi + 2 pi describe the same lineshape.
  p.phi = std::remainder(p.phi, 2.0 * std::numbers::pi);
  return {p, bg, std::sqrt(2.0 * res.cost / static_cast<double>(data.size())), res.iterations};
}

// ----------------------------------------------------------------------------
// Circuit-parameter fitting

struct TransitionObservation {
  double epsilon = 0.0;
  TransitionLabel transition;
  double frequency = 0.0;
};

struct CircuitFitOptions {
  /// RMS residual (GHz) above which the fit is flagged as inconsistent.
  double residual_threshold = 5e-3;
  LmOptions lm;
};

struct CircuitFit {
  CircuitParams params;  ///< epsilon is left at 0
  double rms_residual = 0.0;
  bool flagged = false;
  int iterations = 0;
};

/// Model frequencies E(to) - E(from) for every observation.
inline Eigen::VectorXd model_frequencies(const CircuitParams& base,
                                         std::span<const TransitionObservation> obs,
                                         TruncationSize trunc) {
  std::map<double, Eigen::VectorXd> cache;
  Eigen::VectorXd out(static_cast<Eigen::Index>(obs.size()));
  for (std::size_t i = 0; i < obs.size(); ++i) {
    auto it = cache.find(obs[i].epsilon);
    if (it == cache.end()) {
      CircuitParams p = base;
      p.epsilon = obs[i].epsilon;
      it = cache.emplace(obs[i].epsilon, eigenvalues_only(p, trunc)).first;
    }
    const auto& e = it->second;
    out(static_cast<Eigen::Index>(i)) = e(obs[i].transition.to) - e(obs[i].transition.from);
  }
  return out;
}

/// Least-squares (delta, omega, g) over observed transition frequencies at
/// fixed biases.
inline CircuitFit fit_circuit_params(std::span<const TransitionObservation> obs,
                                     const CircuitParams& init, TruncationSize trunc = {},
                                     const CircuitFitOptions& opts = {}) {
  init.validate();
  if (obs.size() < 6) throw InvalidArgument("fit_circuit_params needs at least 6 observations");
  std::set<TransitionLabel> kinds;
  for (const auto& o : obs) {
    if (o.transition.from < 0 || o.transition.to <= o.transition.from ||
        o.transition.to >= trunc.dim())
      throw InvalidArgument("fit_circuit_params: invalid transition label");
    if (!std::isfinite(o.epsilon) || !std::isfinite(o.frequency))
      throw InvalidArgument("fit_circuit_params: non-finite observation");
    kinds.insert(o.transition);
  }
  if (kinds.size() < 2)
    throw InvalidArgument("fit_circuit_params needs observations of at least 2 transitions");

  const Eigen::Vector3d scale(init.delta > 0.0 ? init.delta : 1.0, init.omega,
                              init.g > 0.0 ? init.g : 1.0);
  auto unpack = [&](const Eigen::VectorXd& x) {
    CircuitParams p;
    p.delta = x(0) * scale(0);
    p.omega = x(1) * scale(1);
    p.g = x(2) * scale(2);
    return p;
  };
  Eigen::VectorXd observed(static_cast<Eigen::Index>(obs.size()));
  for (std::size_t i = 0; i < obs.size(); ++i)
    observed(static_cast<Eigen::Index>(i)) = obs[i].frequency;

  const auto residual = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const CircuitParams p = unpack(x);
    if (!(p.delta >= 0.0 && p.omega > 0.0 && p.g >= 0.0))
      return Eigen::VectorXd::Constant(observed.size(), NAN);
    return model_frequencies(p, obs, trunc) - observed;
  };

  Eigen::VectorXd x0(3);
  x0 << init.delta / scale(0), 1.0, init.g / scale(2);
  const LmResult res = levenberg_marquardt(residual, x0, opts.lm);
  CircuitFit out;
  out.params = unpack(res.params);
  out.rms_residual = std::sqrt(2.0 * res.cost / static_cast<double>(obs.size()));
  out.flagged = out.rms_residual > opts.residual_threshold;
  out.iterations = res.iterations;
  return out;
}

// ----------------------------------------------------------------------------
// SQUID coupler

/// Flux quantum h / 2e in Wb.
inline constexpr double kFluxQuantum = 2.067833848e-15;

struct SquidParams {
  double i_c = 0.0;      ///< junction critical current, uA
  double n_phi_c = 0.0;  ///< coupler flux in flux quanta
  double i_b = 0.0;      ///< bias current, uA
  double r_c = 0.05;     ///< coupler / qubit loop-area ratio
};

/// Josephson inductance of the dc SQUID in nH.
inline double squid_inductance(const SquidParams& s) {
  if (!std::isfinite(s.i_c) || !std::isfinite(s.n_phi_c) || !std::isfinite(s.i_b))
    throw InvalidArgument("squid parameters must be finite");
  if (!(s.i_c > 0.0)) throw InvalidArgument("critical current must be > 0");
  const double switching = 2.0 * s.i_c * std::cos(std::abs(std::numbers::pi * s.n_phi_c));
  const double radicand = switching * switching - s.i_b * s.i_b;
  if (radicand <= 1e-12 * (2.0 * s.i_c) * (2.0 * s.i_c))
    throw ImaginaryInductanceError("squid bias exceeds the flux-modulated critical current");
  const double current_amps = std::sqrt(radicand) * 1e-6;
  return kFluxQuantum / (2.0 * std::numbers::pi * current_amps) * 1e9;
}

inline double coupler_flux(double n_phi_qubit, double r_c) { return r_c * n_phi_qubit; }

}  // namespace rabispec
