#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "rabispec/io.hpp"
#include "rabispec/spectro.hpp"

namespace rs = rabispec;
using rs::QubitState;

namespace {

const std::vector<rs::io::ReferenceSet>& sets() {
  static const auto s = rs::io::load_reference_sets();
  return s;
}

const rs::CircuitParams& set_params(const std::string& id) {
  return rs::io::find_set(sets(), id).params;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

const rs::LineshapeParams kTruth{6.3, 2.0e4, 3.0e4, 0.3};

rs::BackgroundPoly truth_background() {
  rs::BackgroundPoly bg;
  bg.center = 6.3;
  bg.coefficients = {0.8, 2.0, -300.0, 1.0e4};
  return bg;
}

std::vector<rs::SpectrumPoint> synthetic_trace(double noise, unsigned seed, int points = 301) {
  const double lw = kTruth.omega0 / kTruth.q_total;
  const auto bg = truth_background();
  std::mt19937 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<rs::SpectrumPoint> out;
  for (double w : linspace(kTruth.omega0 - 8 * lw, kTruth.omega0 + 8 * lw, points))
    out.push_back({w, rs::s21_magnitude(kTruth, bg, w) * (1.0 + noise * n01(rng))});
  return out;
}

rs::LineshapeFit fit(const std::vector<rs::SpectrumPoint>& data) {
  const auto [init, bg] = rs::estimate_lineshape(data);
  return rs::fit_lineshape(data, init, bg);
}

}  // namespace

// ---- transition maps --------------------------------------------------------

TEST(TransitionMap, BareQubit) {
  const rs::CircuitParams base{1.4, 0.0, 6.0, 0.0};
  const auto grid = linspace(-3.0, 3.0, 13);
  const auto map = rs::transition_map(rs::vary_epsilon(base), grid);
  EXPECT_EQ(map.epsilon_grid, grid);
  EXPECT_EQ(map.element_floor, 1e-3);
  ASSERT_EQ(map.curves.count({0, 1}), 1u);
  // sigma_z couples to (a + a^dag) only through g, so the bare qubit line is
  // invisible; set a tiny coupling and compare against the two-level formula.
  rs::CircuitParams weak = base;
  weak.g = 1e-2;
  const auto seen = rs::transition_map(rs::vary_epsilon(weak), grid, {}, 0.0);
  for (const auto& pt : seen.curves.at({0, 1}))
    EXPECT_NEAR(pt.frequency, std::hypot(1.4, pt.epsilon), 1e-4);
  // Without coupling the decoupled spectrum gives the formula to rounding.
  for (double eps : grid) {
    rs::CircuitParams p = base;
    p.epsilon = eps;
    const auto s = rs::solve(p);
    EXPECT_NEAR(s.energy(1) - s.energy(0), std::hypot(1.4, eps), 1e-12);
  }
}

TEST(TransitionMap, SetAPassesThroughZeroPhotonGap) {
  const auto& a = set_params("A");
  const auto map = rs::transition_map(rs::vary_epsilon(a), {0.0, 8.0, -8.0});
  const auto& c01 = map.curves.at({0, 1});
  ASSERT_FALSE(c01.empty());
  EXPECT_EQ(c01.front().epsilon, 0.0);
  EXPECT_NEAR(c01.front().frequency, 1.235, 2e-3);
  // Far from the symmetry point the lowest line is the oscillator.
  for (const auto& pt : c01)
    if (std::abs(pt.epsilon) > 1.0) EXPECT_NEAR(pt.frequency, 6.365, 0.02);
}

TEST(TransitionMap, ParityForbiddenPairsAbsentAtZeroBias) {
  for (const auto& ref : sets()) {
    const auto map = rs::transition_map(rs::vary_epsilon(ref.params), {0.0});
    const auto s = rs::solve(ref.params);
    for (const auto& t : rs::standard_transitions()) {
      const auto pk = rs::total_parity(s.state(t.from), s.truncation);
      const auto pl = rs::total_parity(s.state(t.to), s.truncation);
      const bool present = !map.curves.at(t).empty();
      EXPECT_EQ(present, pk != pl) << ref.id << " " << rs::to_string(t);
      for (const auto& pt : map.curves.at(t)) {
        EXPECT_GT(pt.frequency, 0.0);
        EXPECT_GT(pt.element, map.element_floor);
      }
    }
  }
}

TEST(TransitionMap, ZeroBiasMatchesLabelledGap) {
  for (const auto& ref : sets()) {
    const auto labels = rs::assign_labels(rs::solve(ref.params), ref.params);
    const auto map = rs::transition_map(rs::vary_epsilon(ref.params), {0.0}, {}, 0.0);
    ASSERT_EQ(map.curves.at({0, 1}).size(), 1u);
    EXPECT_NEAR(map.curves.at({0, 1})[0].frequency,
                labels.energy({QubitState::e, 0}) - labels.energy({QubitState::g, 0}), 1e-12);
  }
}

TEST(TransitionMap, RejectsNonFiniteBias) {
  EXPECT_THROW(rs::transition_map(rs::vary_epsilon(set_params("A")), {0.0, NAN}),
               rs::InvalidArgument);
}

// ---- lineshape ---------------------------------------------------------------

TEST(S21, Examples) {
  const rs::LineshapeParams crit{5.0, 1e4, 1e4, 0.0};
  EXPECT_NEAR(std::abs(rs::s21(crit, 5.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(rs::s21(crit, 7.0)), 1.0, 1e-3);
  const rs::LineshapeParams flipped{5.0, 1e4, 1e4, std::numbers::pi};
  EXPECT_NEAR(std::abs(rs::s21(flipped, 5.0)), 2.0, 1e-15);
}

TEST(S21, SymmetricAtZeroPhase) {
  const rs::LineshapeParams p{6.0, 5e3, 8e3, 0.0};
  for (double d : {1e-5, 3e-4, 2e-3, 0.1})
    EXPECT_NEAR(std::abs(rs::s21(p, 6.0 + d)), std::abs(rs::s21(p, 6.0 - d)), 1e-14);
}

TEST(LineshapeParams, Validation) {
  EXPECT_THROW((rs::LineshapeParams{0.0, 1.0, 1.0, 0.0}.validate()), rs::InvalidArgument);
  EXPECT_THROW((rs::LineshapeParams{1.0, -1.0, 1.0, 0.0}.validate()), rs::InvalidArgument);
  EXPECT_THROW((rs::LineshapeParams{1.0, 1.0, 0.0, 0.0}.validate()), rs::InvalidArgument);
  // Q_L > Q_e is allowed.
  EXPECT_NO_THROW((rs::LineshapeParams{1.0, 5.0, 1.0, 0.0}.validate()));
}

TEST(BackgroundPoly, EvaluationAndDegree) {
  rs::BackgroundPoly bg;
  bg.center = 2.0;
  bg.coefficients = {1.0, -1.0, 0.5};
  EXPECT_DOUBLE_EQ(bg(4.0), 1.0 - 2.0 + 2.0);
  EXPECT_EQ(bg.degree(), 2u);
  EXPECT_EQ(rs::BackgroundPoly{}.degree(), 3u);
  bg.coefficients.assign(10, 0.0);
  EXPECT_THROW(bg.validate(), rs::InvalidArgument);
}

TEST(FitLineshape, NoiselessRoundTrip) {
  const auto r = fit(synthetic_trace(0.0, 1));
  EXPECT_NEAR(r.params.omega0 / kTruth.omega0, 1.0, 1e-3);
  EXPECT_NEAR(r.params.q_total / kTruth.q_total, 1.0, 1e-3);
  EXPECT_NEAR(r.params.q_external / kTruth.q_external, 1.0, 1e-3);
  EXPECT_NEAR(r.params.phi, kTruth.phi, 1e-3);
  EXPECT_LT(r.rms_residual, 1e-8);
  const auto bg = truth_background();
  for (std::size_t k = 0; k < 4; ++k)
    EXPECT_NEAR(r.background.coefficients[k], bg.coefficients[k],
                1e-4 * std::max(1.0, std::abs(bg.coefficients[k])));
}

TEST(FitLineshape, NoisyResonanceOverManySeeds) {
  int within = 0;
  for (unsigned seed = 0; seed < 100; ++seed) {
    const auto r = fit(synthetic_trace(1e-2, seed));
    if (std::abs(r.params.omega0 / kTruth.omega0 - 1.0) < 1e-5) ++within;
  }
  EXPECT_EQ(within, 100);
}

TEST(FitLineshape, ErrorShrinksWithNoise) {
  double prev = INFINITY;
  for (double noise : {1e-2, 1e-3, 1e-4}) {
    double err = 0.0;
    for (unsigned seed = 0; seed < 5; ++seed) {
      const auto r = fit(synthetic_trace(noise, 100 + seed));
      err += std::abs(r.params.q_total / kTruth.q_total - 1.0) +
             std::abs(r.params.q_external / kTruth.q_external - 1.0) +
             std::abs(r.params.omega0 / kTruth.omega0 - 1.0);
    }
    EXPECT_LT(err, prev) << "noise=" << noise;
    prev = err;
  }
}

TEST(FitLineshape, RejectsDegenerateInput) {
  std::vector<rs::SpectrumPoint> flat;
  for (double w : linspace(6.0, 6.1, 50)) flat.push_back({w, 0.7});
  EXPECT_THROW(rs::fit_lineshape(flat, kTruth, rs::BackgroundPoly::flat(0.7, 3, 6.05)),
               rs::IllConditionedError);
  const auto few = synthetic_trace(0.0, 1, 19);
  EXPECT_THROW(rs::fit_lineshape(few, kTruth, truth_background()), rs::InvalidArgument);
}

TEST(FitLineshape, IterationCapIsReported) {
  rs::LmOptions lm;
  lm.max_iterations = 1;
  const auto data = synthetic_trace(1e-2, 3);
  const auto [init, bg] = rs::estimate_lineshape(data);
  EXPECT_THROW(rs::fit_lineshape(data, init, bg, lm), rs::ConvergenceError);
}

// ---- circuit fit -----------------------------------------------------------------

namespace {

std::vector<rs::TransitionObservation> synthetic_observations(const rs::CircuitParams& truth) {
  std::vector<rs::TransitionObservation> obs;
  for (double eps : {0.0, 0.4, 0.8, 1.2, 1.6, 2.0}) {
    rs::CircuitParams p = truth;
    p.epsilon = eps;
    const auto e = rs::eigenvalues_only(p);
    for (const auto& t : std::vector<rs::TransitionLabel>{{0, 1}, {0, 2}, {1, 2}})
      obs.push_back({eps, t, e(t.to) - e(t.from)});
  }
  return obs;
}

void expect_round_trip(const std::string& id) {
  const auto& truth = set_params(id);
  const auto obs = synthetic_observations(truth);
  rs::CircuitParams init = truth;
  init.delta *= 1.03;
  init.omega *= 0.99;
  init.g *= 1.02;
  const auto fit = rs::fit_circuit_params(obs, init);
  EXPECT_NEAR(fit.params.delta, truth.delta, 1e-3) << id;
  EXPECT_NEAR(fit.params.omega, truth.omega, 1e-3) << id;
  EXPECT_NEAR(fit.params.g, truth.g, 1e-3) << id;
  EXPECT_FALSE(fit.flagged);
  EXPECT_LT(fit.rms_residual, 1e-6);
}

}  // namespace

TEST(FitCircuitParams, RoundTripSetH) { expect_round_trip("H"); }
TEST(FitCircuitParams, RoundTripSetA) { expect_round_trip("A"); }

TEST(FitCircuitParams, ContradictoryObservationsAreFlagged) {
  const auto& truth = set_params("A");
  auto obs = synthetic_observations(truth);
  obs.push_back({0.0, {0, 1}, obs[0].frequency + 0.5});
  obs.push_back({0.4, {0, 1}, obs[3].frequency - 0.5});
  const auto fit = rs::fit_circuit_params(obs, truth);
  EXPECT_TRUE(fit.flagged);
  EXPECT_GT(fit.rms_residual, 5e-3);
}

TEST(FitCircuitParams, Preconditions) {
  const auto& truth = set_params("A");
  auto obs = synthetic_observations(truth);
  std::vector<rs::TransitionObservation> five(obs.begin(), obs.begin() + 5);
  EXPECT_THROW(rs::fit_circuit_params(five, truth), rs::InvalidArgument);
  std::vector<rs::TransitionObservation> single;
  for (const auto& o : obs)
    if (o.transition == rs::TransitionLabel{0, 1}) single.push_back(o);
  ASSERT_GE(single.size(), 6u);
  EXPECT_THROW(rs::fit_circuit_params(single, truth), rs::InvalidArgument);
}

// ---- SQUID ---------------------------------------------------------------------

TEST(SquidInductance, Examples) {
  EXPECT_NEAR(rs::squid_inductance({1.0, 0.0, 0.0}),
              rs::kFluxQuantum / (2 * std::numbers::pi * 2e-6) * 1e9, 1e-15);
  EXPECT_NEAR(rs::squid_inductance({1.0, 0.0, 0.0}), 0.1645, 1e-4);
  EXPECT_THROW(rs::squid_inductance({1.0, 0.5, 0.0}), rs::ImaginaryInductanceError);
  EXPECT_THROW(rs::squid_inductance({1.0, 0.0, 2.5}), rs::ImaginaryInductanceError);
  for (double n : {0.01, 0.1, 0.3, -0.45})
    EXPECT_NEAR(rs::squid_inductance({1.7, n, 0.0}) / rs::squid_inductance({1.7, 0.0, 0.0}),
                1.0 / std::cos(std::abs(std::numbers::pi * n)), 1e-12);
}

TEST(SquidInductance, EvenInFluxAndIncreasingInBias) {
  for (double n : {0.0, 0.05, 0.2, 0.4}) {
    double prev = 0.0;
    for (double ib = 0.0; ib < 2.0 * std::cos(std::numbers::pi * n) * 0.99; ib += 0.05) {
      const double l = rs::squid_inductance({1.0, n, ib});
      EXPECT_DOUBLE_EQ(l, rs::squid_inductance({1.0, -n, ib}));
      EXPECT_DOUBLE_EQ(l, rs::squid_inductance({1.0, n, -ib}));
      EXPECT_GT(l, prev);
      prev = l;
    }
  }
}

TEST(CouplerFlux, Examples) {
  EXPECT_DOUBLE_EQ(rs::coupler_flux(0.5, 0.05), 0.025);
  EXPECT_DOUBLE_EQ(rs::coupler_flux(-1.5, 0.05), -0.075);
  EXPECT_EQ(rs::coupler_flux(0.0, 0.37), 0.0);
  EXPECT_EQ(rs::SquidParams{}.r_c, 0.05);
}
