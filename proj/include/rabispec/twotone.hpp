#pragma once

// Two-tone spectroscopy: driven three-level dressed states, avoided-crossing
// branches, diagonal-line slopes and level reconstruction from five measured
// transition frequencies.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rabispec/errors.hpp"
#include "rabispec/jacobi.hpp"
#include "rabispec/rabi.hpp"

namespace rabispec {

enum class LevelOrdering { b_below_c, c_below_b };

/// Levels a, b, c under a drive coupling b and c. The a -> c transition is
/// forbidden at zero drive.
struct ThreeLevelDrive {
  double omega_a = 0.0;
  double omega_b = 0.0;
  double omega_c = 0.0;
  double rabi_bc = 0.0;  ///< Omega_bc = chi_bc sqrt(N), GHz
  LevelOrdering ordering = LevelOrdering::b_below_c;

  void validate() const {
    if (!std::isfinite(omega_a) || !std::isfinite(omega_b) || !std::isfinite(omega_c) ||
        !std::isfinite(rabi_bc))
      throw InvalidArgument("three-level drive: non-finite input");
    if (!(omega_a < std::min(omega_b, omega_c)))
      throw InvalidArgument("three-level drive: a must be the lowest level");
    if (rabi_bc < 0.0) throw InvalidArgument("three-level drive: Omega_bc must be >= 0");
    const bool b_low = omega_b < omega_c;
    if (b_low != (ordering == LevelOrdering::b_below_c))
      throw InvalidArgument("three-level drive: ordering flag contradicts the level energies");
  }

  double omega_ab() const { return omega_b - omega_a; }
  double omega_ac() const { return omega_c - omega_a; }
  /// omega_bc for b below c, omega_cb for c below b; positive either way.
  double bc_splitting() const { return std::abs(omega_c - omega_b); }
};

struct Branches {
  double lower = 0.0;
  double upper = 0.0;
};

/// Probe transition frequencies out of |a> near the b-c drive resonance.
inline Branches avoided_crossing_branches(const ThreeLevelDrive& t, double omega_d) {
  t.validate();
  const double detuning = t.bc_splitting() - omega_d;
  const double half_gap = std::sqrt(0.25 * detuning * detuning + t.rabi_bc * t.rabi_bc);
  const double mid = t.ordering == LevelOrdering::b_below_c
                         ? 0.5 * (t.omega_ab() + t.omega_ac() - omega_d)
                         : 0.5 * (t.omega_ab() + t.omega_ac() + omega_d);
  return {mid - half_gap, mid + half_gap};
}

/// Bare (Omega_bc = 0) lines: horizontal omega_ab and the diagonal
/// omega_ac -+ omega_d.
inline std::pair<double, double> bare_lines(const ThreeLevelDrive& t, double omega_d) {
  const double diag = t.ordering == LevelOrdering::b_below_c ? t.omega_ac() - omega_d
                                                             : t.omega_ac() + omega_d;
  return {t.omega_ab(), diag};
}

struct DressedEnergies {
  double spectator = 0.0;    ///< omega_a + N omega_d
  double lower = 0.0;        ///< closed-form lower block energy
  double upper = 0.0;
  double block_lower = 0.0;  ///< same, from diagonalizing the 2x2 block
  double block_upper = 0.0;
  bool near_resonant = false;
};

/// Dressed energies in the near-degenerate two-state reduction:
/// |b,N>, |c,N-1> for b below c; |b,N>, |c,N+1> for c below b.
inline DressedEnergies dressed_eigen(const ThreeLevelDrive& t, double omega_d, int n_drive) {
  t.validate();
  if (n_drive < 1) throw InvalidArgument("drive photon number must be >= 1");
  const double n = n_drive;
  const bool b_low = t.ordering == LevelOrdering::b_below_c;
  const double e_b = t.omega_b + n * omega_d;
  const double e_c = t.omega_c + (b_low ? n - 1.0 : n + 1.0) * omega_d;
  const double detuning = t.bc_splitting() - omega_d;

  DressedEnergies out;
  out.spectator = t.omega_a + n * omega_d;
  const double mid = 0.5 * (t.omega_b + t.omega_c + (b_low ? 2.0 * n - 1.0 : 2.0 * n + 1.0) * omega_d);
  const double half_gap = std::sqrt(0.25 * detuning * detuning + t.rabi_bc * t.rabi_bc);
  out.lower = mid - half_gap;
  out.upper = mid + half_gap;

  Eigen::MatrixXd block(2, 2);
  block << e_b, t.rabi_bc, t.rabi_bc, e_c;
  JacobiOptions opts;
  opts.compute_vectors = false;
  const EigenSystem es = jacobi_eigensystem(block, opts);
  out.block_lower = es.values(0);
  out.block_upper = es.values(1);
  out.near_resonant = std::abs(detuning) <= 10.0 * t.rabi_bc;
  return out;
}

enum class TransitionKind { absorb_drive, emit_drive };

/// d omega_p / d omega_d of the diagonal line.
constexpr int classify_slope(TransitionKind kind) {
  return kind == TransitionKind::absorb_drive ? -1 : +1;
}

constexpr TransitionKind transition_kind(LevelOrdering ordering) {
  return ordering == LevelOrdering::b_below_c ? TransitionKind::absorb_drive
                                              : TransitionKind::emit_drive;
}

// ----------------------------------------------------------------------------
// Level reconstruction

struct FiveFrequencies {
  double w_g0g1 = 0.0;
  double w_g0g2 = 0.0;
  double w_e0e1 = 0.0;
  double w_e0e2 = 0.0;
  double w_g0e1 = 0.0;

  void validate() const {
    for (double w : {w_g0g1, w_g0g2, w_e0e1, w_e0e2, w_g0e1})
      if (!(w > 0.0) || !std::isfinite(w))
        throw InvalidArgument("transition frequencies must be positive and finite");
  }

  friend bool operator==(const FiveFrequencies&, const FiveFrequencies&) = default;
};

/// Six lowest levels with E(g0) = 0.
///
/// Stored in extended precision: differences of the input doubles are then
/// exact (x86-64 long double keeps 64 mantissa bits), so the five transition
/// frequencies regenerate bit-for-bit. Where long double is plain double the
/// round trip is exact only up to one rounding per level.
struct SixLevels {
  long double g0 = 0.0L;
  long double e0 = 0.0L;
  long double g1 = 0.0L;
  long double e1 = 0.0L;
  long double g2 = 0.0L;
  long double e2 = 0.0L;

  /// Delta_n = E(e n) - E(g n), rounded to double.
  double delta(int n) const {
    switch (n) {
      case 0: return static_cast<double>(e0 - g0);
      case 1: return static_cast<double>(e1 - g1);
      case 2: return static_cast<double>(e2 - g2);
      default: throw InvalidArgument("SixLevels holds photon numbers 0..2 only");
    }
  }
};

inline SixLevels reconstruct_levels(const FiveFrequencies& f) {
  f.validate();
  SixLevels s;
  s.g0 = 0.0L;
  s.g1 = f.w_g0g1;
  s.g2 = f.w_g0g2;
  s.e1 = f.w_g0e1;
  s.e0 = s.e1 - static_cast<long double>(f.w_e0e1);
  s.e2 = s.e0 + static_cast<long double>(f.w_e0e2);
  return s;
}

/// Inverse of reconstruct_levels.
inline FiveFrequencies transition_frequencies(const SixLevels& s) {
  auto d = [](long double hi, long double lo) { return static_cast<double>(hi - lo); };
  return {d(s.g1, s.g0), d(s.g2, s.g0), d(s.e1, s.e0), d(s.e2, s.e0), d(s.e1, s.g0)};
}

// ----------------------------------------------------------------------------
// Two-tone line maps from the labelled Rabi spectrum

enum class TwoTonePanel { a, b, c };

struct TwoToneRow {
  double omega_d = 0.0;
  double branch_lo = 0.0;
  double branch_hi = 0.0;
};

/// Level triple for a panel: (g0, g1, g2), (e0, e1, e2) or (g0, g1, e1).
inline ThreeLevelDrive panel_drive(const LabeledLevels& labels, TwoTonePanel panel,
                                   double rabi_bc) {
  using Q = QubitState;
  ThreeLevelDrive t;
  t.rabi_bc = rabi_bc;
  switch (panel) {
    case TwoTonePanel::a:
      t.omega_a = labels.energy({Q::g, 0});
      t.omega_b = labels.energy({Q::g, 1});
      t.omega_c = labels.energy({Q::g, 2});
      t.ordering = LevelOrdering::b_below_c;
      break;
    case TwoTonePanel::b:
      t.omega_a = labels.energy({Q::e, 0});
      t.omega_b = labels.energy({Q::e, 1});
      t.omega_c = labels.energy({Q::e, 2});
      t.ordering = LevelOrdering::b_below_c;
      break;
    case TwoTonePanel::c:
      t.omega_a = labels.energy({Q::g, 0});
      t.omega_b = labels.energy({Q::g, 1});
      t.omega_c = labels.energy({Q::e, 1});
      t.ordering = LevelOrdering::c_below_b;
      break;
  }
  t.validate();
  return t;
}

inline std::vector<TwoToneRow> twotone_linemap(const CircuitParams& p, TruncationSize trunc,
                                               TwoTonePanel panel,
                                               const std::vector<double>& omega_d_grid,
                                               double rabi_bc) {
  const LabeledLevels labels = assign_labels(solve(p, trunc), p);
  const ThreeLevelDrive t = panel_drive(labels, panel, rabi_bc);
  std::vector<TwoToneRow> rows;
  rows.reserve(omega_d_grid.size());
  for (double wd : omega_d_grid) {
    const Branches b = avoided_crossing_branches(t, wd);
    rows.push_back({wd, b.lower, b.upper});
  }
  return rows;
}

}  // namespace rabispec
