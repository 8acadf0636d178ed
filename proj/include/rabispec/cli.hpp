#pragma once

// Command-line front end. Each command builds a result table; `run` parses
// arguments, dispatches, and writes CSV, JSON or SVG.
//
// Exit codes: 0 success, 1 usage error, 2 computation error or failed
// internal check. Errors go to stderr as one JSON line.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rabispec/analytic.hpp"
#include "rabispec/errors.hpp"
#include "rabispec/io.hpp"
#include "rabispec/rabi.hpp"
#include "rabispec/spectro.hpp"
#include "rabispec/twotone.hpp"

namespace rabispec::cli {

class UsageError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "usage"; }
};

/// A computation failure re-raised with context; keeps the original tag.
class ComputationError : public Error {
public:
  explicit ComputationError(const std::string& what, std::string kind = "computation")
      : Error(what), kind_(std::move(kind)) {}
  const char* kind() const noexcept override { return kind_.c_str(); }

private:
  std::string kind_;
};

class InternalCheckError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "internal_check"; }
};

struct Grid {
  std::optional<double> start;
  std::optional<double> stop;
  std::optional<int> points;

  /// Uniform grid; unset fields fall back to the command's defaults.
  std::vector<double> resolve(double def_start, double def_stop, int def_points) const {
    const double a = start.value_or(def_start);
    const double b = stop.value_or(def_stop);
    const int n = points.value_or(def_points);
    if (!std::isfinite(a) || !std::isfinite(b)) throw UsageError("grid bounds must be finite");
    if (n < 1) throw UsageError("--grid-points must be >= 1");
    if (n > 1 && !(b > a)) throw UsageError("grid must be increasing: --grid-stop > --grid-start");
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return g;
  }
};

struct RunConfig {
  std::string command;
  std::optional<std::string> set;
  std::optional<double> delta, omega, g, epsilon;
  int nmax = TruncationSize::kDefault;
  std::string out;  ///< empty: stdout
  std::string format = "csv";
  Grid grid;
  std::string input;
  std::string data;  ///< reference table; empty: bundled
  std::optional<int> n;
  std::string panel = "a";
  double rabi = 0.05;
  int degree = 3;
  // levels
  std::string config;
  std::optional<double> w_g0g1, w_g0g2, w_e0e1, w_e0e2, w_g0e1;
  // squid
  double i_c = 1.0;
  double i_b = 0.0;
  double r_c = 0.05;
};

struct CommandOutput {
  io::Table table;
  io::PlotSpec plot;
};

// ----------------------------------------------------------------------------
// Helpers

namespace detail {

inline std::vector<io::ReferenceSet> reference_sets(const RunConfig& c) {
  try {
    return c.data.empty() ? io::load_reference_sets() : io::load_reference_sets(c.data);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

inline TruncationSize truncation(const RunConfig& c) {
  if (c.nmax < TruncationSize::kMinimum)
    throw UsageError("--nmax must be >= " + std::to_string(TruncationSize::kMinimum));
  return TruncationSize(c.nmax);
}

/// --set, optionally overridden field by field by explicit flags.
inline CircuitParams circuit(const RunConfig& c) {
  CircuitParams p;
  if (c.set) {
    const auto sets = reference_sets(c);
    try {
      p = io::find_set(sets, *c.set).params;
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  } else if (!c.delta || !c.omega || !c.g) {
    throw UsageError("give --set or all of --delta, --omega, --g");
  }
  if (c.delta) p.delta = *c.delta;
  if (c.omega) p.omega = *c.omega;
  if (c.g) p.g = *c.g;
  if (c.epsilon) p.epsilon = *c.epsilon;
  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return p;
}

inline std::string set_label(const RunConfig& c) { return c.set ? *c.set : "custom"; }

/// Diagonalization with the residual and orthonormality checks applied.
inline Spectrum checked_solve(const CircuitParams& p, TruncationSize t) {
  const Eigen::MatrixXd h = build_hamiltonian(p, t);
  Spectrum s = eigendecompose(h, t);
  const double res = max_residual(h, s);
  const double ortho = orthonormality_defect(s);
  if (res > 1e-9 * h.norm() || ortho > 1e-9)
    throw InternalCheckError("eigensolver check failed: residual " + std::to_string(res) +
                             ", orthonormality defect " + std::to_string(ortho));
  return s;
}

inline std::ifstream input_file(const RunConfig& c) {
  if (c.input.empty()) throw UsageError("--input is required for " + c.command);
  std::ifstream in(c.input);
  if (!in) throw UsageError("cannot open input file '" + c.input + "'");
  return in;
}

}  // namespace detail

// ----------------------------------------------------------------------------
// Commands

inline CommandOutput cmd_table1(const RunConfig& c) {
  const TruncationSize t = detail::truncation(c);
  auto sets = detail::reference_sets(c);
  if (c.set) {
    std::vector<io::ReferenceSet> keep;
    for (const auto& s : sets)
      if (s.id == *c.set) keep.push_back(s);
    if (keep.empty()) throw UsageError("unknown parameter set '" + *c.set + "'");
    sets = keep;
  }
  CommandOutput out;
  auto& tab = out.table;
  tab.columns = {"set", "delta_ghz", "omega_ghz", "g_ghz", "nmax"};
  for (int n = 0; n < 3; ++n)
    for (const char* suffix : {"_ghz", "_published_ghz", "_diff_ghz", "_measured_ghz"})
      tab.columns.push_back("d" + std::to_string(n) + suffix);
  tab.columns.push_back("lamb_ratio");

  for (const auto& ref : sets) {
    LabeledLevels labels;
    try {
      labels = assign_labels(detail::checked_solve(ref.params, t), ref.params);
    } catch (const Error& e) {
      throw ComputationError("set " + ref.id + ": " + e.what(), e.kind());
    }
    std::vector<io::Cell> row{ref.id, ref.params.delta, ref.params.omega, ref.params.g,
                              std::to_string(t.n_max())};
    double d0 = 0.0;
    for (int n = 0; n < 3; ++n) {
      const double d = photon_number_qubit_frequency(labels, n);
      if (n == 0) d0 = d;
      row.push_back(d);
      row.push_back(io::opt_cell(ref.calculated[n]));
      row.push_back(ref.calculated[n] ? io::Cell{d - *ref.calculated[n]} : io::Cell{});
      row.push_back(io::opt_cell(ref.measured[n]));
    }
    row.push_back(1.0 - d0 / ref.params.delta);
    tab.add_row(std::move(row));
  }
  out.plot = {"Delta_n by parameter set", "g_ghz", {"d0_ghz", "d1_ghz", "d2_ghz"}, "", ""};
  return out;
}

inline CommandOutput cmd_fig4(const RunConfig& c) {
  const int nl = c.n.value_or(2);
  if (nl < 0 || nl > 10) throw UsageError("--n must be in 0..10");
  const auto grid = c.grid.resolve(0.0, 1.6, 161);
  for (double b : grid)
    if (b < 0.0 || b > 1.6) throw UsageError("fig4 grid must lie in [0, 1.6]");
  CommandOutput out;
  auto& tab = out.table;
  tab.columns = {"kind", "set", "beta"};
  for (int n = 0; n <= nl; ++n) tab.columns.push_back("r" + std::to_string(n));
  for (const auto& row : fig4_curves(grid, nl)) {
    std::vector<io::Cell> r{std::string("curve"), std::string(""), row.beta};
    for (double v : row.ratios) r.push_back(v);
    tab.add_row(std::move(r));
  }
  for (const auto& ref : detail::reference_sets(c)) {
    std::vector<io::Cell> r{std::string("point"), ref.id, ref.params.beta()};
    for (int n = 0; n <= nl; ++n)
      r.push_back(n < 3 && ref.measured[n] ? io::Cell{*ref.measured[n] / ref.params.delta}
                                           : io::Cell{});
    tab.add_row(std::move(r));
  }
  std::vector<std::string> ys;
  for (int n = 0; n <= nl; ++n) ys.push_back("r" + std::to_string(n));
  out.plot = {"Delta_n / Delta versus g / omega", "beta", ys, "kind", "point"};
  return out;
}

inline CommandOutput cmd_spectrum(const RunConfig& c) {
  const CircuitParams base = detail::circuit(c);
  const TruncationSize t = detail::truncation(c);
  const auto grid = c.grid.resolve(-2.0, 2.0, 81);
  const auto transitions = standard_transitions();
  CommandOutput out;
  auto& tab = out.table;
  tab.columns = {"epsilon_ghz"};
  for (const auto& tr : transitions)
    tab.columns.push_back("f_" + std::to_string(tr.from) + "_" + std::to_string(tr.to) + "_ghz");
  for (const auto& tr : transitions)
    tab.columns.push_back("x_" + std::to_string(tr.from) + "_" + std::to_string(tr.to));
  for (double eps : grid) {
    CircuitParams p = base;
    p.epsilon = eps;
    const Spectrum s = detail::checked_solve(p, t);
    std::vector<io::Cell> row{eps};
    for (const auto& tr : transitions) row.push_back(s.energy(tr.to) - s.energy(tr.from));
    for (const auto& tr : transitions) row.push_back(transition_matrix_element(s, tr.from, tr.to));
    tab.add_row(std::move(row));
  }
  std::vector<std::string> ys;
  for (const auto& tr : transitions)
    ys.push_back("f_" + std::to_string(tr.from) + "_" + std::to_string(tr.to) + "_ghz");
  out.plot = {"transition frequencies versus bias, set " + detail::set_label(c), "epsilon_ghz", ys,
              "", ""};
  return out;
}

/// For SVG only: hide lines whose matrix element is below the visibility floor.
inline io::Table visible_spectrum(const io::Table& t, double floor = 1e-3) {
  io::Table v = t;
  const std::size_t nf = (t.columns.size() - 1) / 2;
  for (auto& row : v.rows)
    for (std::size_t k = 0; k < nf; ++k) {
      const auto* x = std::get_if<double>(&row[1 + nf + k]);
      if (!x || *x <= floor) row[1 + k] = io::Cell{};
    }
  return v;
}

inline TwoTonePanel parse_panel(const std::string& s) {
  if (s == "a") return TwoTonePanel::a;
  if (s == "b") return TwoTonePanel::b;
  if (s == "c") return TwoTonePanel::c;
  throw UsageError("--panel must be a, b or c");
}

inline CommandOutput cmd_twotone(const RunConfig& c) {
  const CircuitParams p = detail::circuit(c);
  const TruncationSize t = detail::truncation(c);
  const TwoTonePanel panel = parse_panel(c.panel);
  if (!(c.rabi >= 0.0) || !std::isfinite(c.rabi)) throw UsageError("--rabi must be >= 0");
  const LabeledLevels labels = assign_labels(detail::checked_solve(p, t), p);
  const ThreeLevelDrive drive = panel_drive(labels, panel, c.rabi);
  const double centre = drive.bc_splitting();
  const auto grid =
      c.grid.resolve(std::max(1e-3, centre - 0.5), centre + 0.5, 201);
  CommandOutput out;
  auto& tab = out.table;
  tab.columns = {"omega_d_ghz", "branch_lo_ghz", "branch_hi_ghz"};
  for (double wd : grid) {
    const Branches b = avoided_crossing_branches(drive, wd);
    tab.add_row({wd, b.lower, b.upper});
  }
  out.plot = {"two-tone branches, panel " + c.panel + ", set " + detail::set_label(c),
              "omega_d_ghz", {"branch_lo_ghz", "branch_hi_ghz"}, "", ""};
  return out;
}

inline CommandOutput cmd_overlap(const RunConfig& c) {
  const int n = c.n.value_or(2);
  if (n < 0 || n > 10) throw UsageError("--n must be in 0..10");
  const auto grid = c.grid.resolve(0.0, 1.5, 151);
  for (double b : grid)
    if (b < 0.0 || b > 2.0) throw UsageError("overlap grid must lie in [0, 2]");
  const double norm0 = overlap_integral(n, 0.0).value_quadrature;
  CommandOutput out;
  auto& tab = out.table;
  tab.columns = {"beta", "overlap_quadrature", "overlap_closed_form", "ratio"};
  tab.precision = 6;
  for (double b : grid) {
    const OverlapResult r = overlap_integral(n, b);
    if (std::abs(r.value_quadrature - r.value_closed_form) > 1e-8)
      throw InternalCheckError("overlap quadrature disagrees with the closed form at beta = " +
                               std::to_string(b));
    tab.add_row({b, r.value_quadrature, r.value_closed_form, r.value_quadrature / norm0});
  }
  out.plot = {"overlap I_" + std::to_string(n) + "(beta) / I_" + std::to_string(n) + "(0)",
              "beta", {"ratio"}, "", ""};
  return out;
}

inline CommandOutput cmd_fit_s21(const RunConfig& c) {
  if (c.degree < 0 || c.degree > static_cast<int>(BackgroundPoly::kMaxDegree))
    throw UsageError("--degree must be in 0..8");
  auto in = detail::input_file(c);
  const auto rows = io::read_spectrum_csv(in);
  // One trace per bias value, in order of first appearance.
  std::vector<double> order;
  std::map<double, std::vector<SpectrumPoint>> traces;
  for (const auto& r : rows) {
    if (!traces.count(r.epsilon)) order.push_back(r.epsilon);
    traces[r.epsilon].push_back({r.omega_p, r.s21_abs});
  }
  if (order.empty()) throw ComputationError("spectrum file has no data rows");
  CommandOutput out;
  auto& tab = out.table;
  tab.columns = {"epsilon_ghz", "omega0_ghz", "q_total", "q_external", "phi_rad",
                 "rms_residual", "iterations"};
  tab.precision = 6;
  for (double eps : order) {
    const auto& d = traces[eps];
    const auto [init, bg] = estimate_lineshape(d, static_cast<std::size_t>(c.degree));
    const LineshapeFit f = fit_lineshape(d, init, bg);
    tab.add_row({eps, f.params.omega0, f.params.q_total, f.params.q_external, f.params.phi,
                 f.rms_residual, std::to_string(f.iterations)});
  }
  out.plot = {"fitted resonance versus bias", "epsilon_ghz", {"omega0_ghz"}, "", ""};
  return out;
}

inline CommandOutput cmd_fit_params(const RunConfig& c) {
  const CircuitParams init = detail::circuit(c);
  const TruncationSize t = detail::truncation(c);
  auto in = detail::input_file(c);
  const auto obs = io::read_observations_csv(in);
  const CircuitFit fit = fit_circuit_params(obs, init, t);
  CommandOutput out;
  auto& tab = out.table;
  tab.columns = {"delta_ghz", "omega_ghz", "g_ghz", "rms_residual_ghz", "flagged", "iterations",
                 "observations"};
  tab.precision = 6;
  tab.add_row({fit.params.delta, fit.params.omega, fit.params.g, fit.rms_residual,
               std::string(fit.flagged ? "true" : "false"), std::to_string(fit.iterations),
               std::to_string(obs.size())});
  out.plot = {"fitted circuit parameters", "rms_residual_ghz", {"delta_ghz", "omega_ghz", "g_ghz"},
              "", ""};
  return out;
}

inline CommandOutput cmd_compare(const RunConfig& c) {
  // g is swept, so it is optional here
  RunConfig cc = c;
  if (!cc.set && !cc.g) cc.g = 0.0;
  const CircuitParams base = detail::circuit(cc);
  const TruncationSize t = detail::truncation(c);
  const int nl = c.n.value_or(2);
  if (nl < 0 || nl > 10) throw UsageError("--n must be in 0..10");
  if (!(base.delta > 0.0 && base.delta < base.omega))
    throw UsageError("compare needs 0 < delta < omega");
  const auto grid = c.grid.resolve(0.0, 1.5, 31);
  CommandOutput out;
  auto& tab = out.table;
  tab.columns = {"beta"};
  for (int n = 0; n <= nl; ++n) {
    tab.columns.push_back("d" + std::to_string(n) + "_numeric_ghz");
    tab.columns.push_back("d" + std::to_string(n) + "_closed_ghz");
  }
  for (double b : grid) {
    if (b < 0.0) throw UsageError("compare grid must be >= 0");
    CircuitParams p = base;
    p.epsilon = 0.0;
    p.g = b * p.omega;
    LabelOptions lo;
    lo.max_photon = nl;
    const LabeledLevels labels = assign_labels(detail::checked_solve(p, t), p, lo);
    std::vector<io::Cell> row{b};
    for (int n = 0; n <= nl; ++n) {
      row.push_back(photon_number_qubit_frequency(labels, n));
      row.push_back(delta_n_closed_form(p.delta, b, n));
    }
    tab.add_row(std::move(row));
  }
  std::vector<std::string> ys(tab.columns.begin() + 1, tab.columns.end());
  out.plot = {"numeric versus closed-form Delta_n", "beta", ys, "", ""};
  return out;
}

inline FiveFrequencies five_frequencies(const RunConfig& c) {
  FiveFrequencies f;
  std::optional<double> vals[5] = {c.w_g0g1, c.w_g0g2, c.w_e0e1, c.w_e0e2, c.w_g0e1};
  static const char* keys[5] = {"w_g0g1", "w_g0g2", "w_e0e1", "w_e0e2", "w_g0e1"};
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    if (!in) throw UsageError("cannot open config file '" + c.config + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    for (int k = 0; k < 5; ++k)
      if (!vals[k] && j.contains(keys[k])) {
        if (!j[keys[k]].is_number()) throw UsageError(std::string(keys[k]) + " must be a number");
        vals[k] = j[keys[k]].get<double>();
      }
  }
  for (int k = 0; k < 5; ++k)
    if (!vals[k]) throw UsageError(std::string("missing transition frequency ") + keys[k]);
  f = {*vals[0], *vals[1], *vals[2], *vals[3], *vals[4]};
  try {
    f.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return f;
}

inline CommandOutput cmd_levels(const RunConfig& c) {
  const SixLevels lv = reconstruct_levels(five_frequencies(c));
  CommandOutput out;
  auto& tab = out.table;
  tab.columns = {"quantity", "value_ghz"};
  tab.add_row({std::string("E_g0"), static_cast<double>(lv.g0)});
  tab.add_row({std::string("E_e0"), static_cast<double>(lv.e0)});
  tab.add_row({std::string("E_g1"), static_cast<double>(lv.g1)});
  tab.add_row({std::string("E_e1"), static_cast<double>(lv.e1)});
  tab.add_row({std::string("E_g2"), static_cast<double>(lv.g2)});
  tab.add_row({std::string("E_e2"), static_cast<double>(lv.e2)});
  for (int n = 0; n < 3; ++n) tab.add_row({"Delta_" + std::to_string(n), lv.delta(n)});
  // Plotted against row position.
  out.plot = {"reconstructed levels", "index", {"value_ghz"}, "", ""};
  return out;
}

inline CommandOutput cmd_squid(const RunConfig& c) {
  if (!(c.i_c > 0.0)) throw UsageError("--ic must be > 0");
  const auto grid = c.grid.resolve(-0.4, 0.4, 81);
  CommandOutput out;
  auto& tab = out.table;
  tab.columns = {"n_phi_c", "n_phi_qubit", "l_j_nh"};
  tab.precision = 6;
  for (double nc : grid) {
    const double lj = squid_inductance({c.i_c, nc, c.i_b, c.r_c});
    tab.add_row({nc, c.r_c != 0.0 ? io::Cell{nc / c.r_c} : io::Cell{}, lj});
  }
  out.plot = {"SQUID Josephson inductance", "n_phi_c", {"l_j_nh"}, "", ""};
  return out;
}

inline CommandOutput dispatch(const RunConfig& c) {
  if (c.command == "table1") return cmd_table1(c);
  if (c.command == "fig4") return cmd_fig4(c);
  if (c.command == "spectrum") return cmd_spectrum(c);
  if (c.command == "twotone") return cmd_twotone(c);
  if (c.command == "overlap") return cmd_overlap(c);
  if (c.command == "fit-s21") return cmd_fit_s21(c);
  if (c.command == "fit-params") return cmd_fit_params(c);
  if (c.command == "compare") return cmd_compare(c);
  if (c.command == "levels") return cmd_levels(c);
  if (c.command == "squid") return cmd_squid(c);
  throw UsageError("unknown command '" + c.command + "'");
}

// ----------------------------------------------------------------------------
// Output

inline void emit(const RunConfig& c, const CommandOutput& r, std::ostream& os) {
  if (c.format == "csv") {
    io::write_csv(os, r.table);
  } else if (c.format == "json") {
    nlohmann::ordered_json j;
    j["command"] = c.command;
    const auto body = io::table_to_json(r.table);
    j["columns"] = body["columns"];
    j["rows"] = body["rows"];
    io::write_json(os, j);
  } else {
    io::Table t = c.command == "spectrum" ? visible_spectrum(r.table) : r.table;
    io::PlotSpec spec = r.plot;
    if (spec.x_column == "index") {
      t.columns.insert(t.columns.begin(), "index");
      for (std::size_t i = 0; i < t.rows.size(); ++i)
        t.rows[i].insert(t.rows[i].begin(), io::Cell{static_cast<double>(i)});
    }
    io::write_svg(os, t, spec);
  }
}

inline std::string error_json(const std::string& kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  return j.dump();
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "table1", "fig4", "spectrum", "twotone", "overlap", "fit-s21", "fit-params", "compare",
      "levels", "squid"};
  return names;
}

/// Parses `args` (without the program name) and runs one command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Deep-strong-coupling qubit-oscillator spectroscopy toolkit", "rabispec"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--set", c.set, "Reference parameter set A..I");
  app.add_option("--delta", c.delta, "Qubit splitting Delta, GHz");
  app.add_option("--omega", c.omega, "Oscillator frequency omega, GHz");
  app.add_option("--g", c.g, "Coupling g, GHz");
  app.add_option("--epsilon", c.epsilon, "Bias epsilon, GHz");
  app.add_option("--nmax", c.nmax, "Fock truncation n_max")->capture_default_str();
  app.add_option("--out", c.out, "Output path (default stdout)");
  app.add_option("--format", c.format, "csv | json | svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->capture_default_str();
  app.add_option("--grid-start", c.grid.start, "First grid value");
  app.add_option("--grid-stop", c.grid.stop, "Last grid value");
  app.add_option("--grid-points", c.grid.points, "Number of grid points");
  app.add_option("--input", c.input, "Input CSV");
  app.add_option("--data", c.data, "Reference table CSV (default bundled)");
  app.add_option("--n", c.n, "Photon number / highest label");
  app.add_option("--panel", c.panel, "Two-tone panel a | b | c")
      ->check(CLI::IsMember({"a", "b", "c"}))
      ->capture_default_str();
  app.add_option("--rabi", c.rabi, "Drive Rabi frequency Omega_bc, GHz")->capture_default_str();
  app.add_option("--degree", c.degree, "Background polynomial degree")->capture_default_str();
  app.add_option("--config", c.config, "JSON file with the five transition frequencies");
  app.add_option("--w-g0g1", c.w_g0g1, "omega_{g0,g1}, GHz");
  app.add_option("--w-g0g2", c.w_g0g2, "omega_{g0,g2}, GHz");
  app.add_option("--w-e0e1", c.w_e0e1, "omega_{e0,e1}, GHz");
  app.add_option("--w-e0e2", c.w_e0e2, "omega_{e0,e2}, GHz");
  app.add_option("--w-g0e1", c.w_g0e1, "omega_{g0,e1}, GHz");
  app.add_option("--ic", c.i_c, "SQUID junction critical current, uA")->capture_default_str();
  app.add_option("--ib", c.i_b, "SQUID bias current, uA")->capture_default_str();
  app.add_option("--rc", c.r_c, "Coupler / qubit loop-area ratio")->capture_default_str();

  static const std::map<std::string, std::string> blurbs = {
      {"table1", "Delta_0..2 for the reference sets, computed vs published"},
      {"fig4", "closed-form Delta_n / Delta curves plus measured points"},
      {"spectrum", "transition frequencies and matrix elements versus bias"},
      {"twotone", "avoided-crossing branches versus drive frequency"},
      {"overlap", "displaced-Fock overlap integral versus beta"},
      {"fit-s21", "fit the hanger lineshape to |S21| traces"},
      {"fit-params", "fit (Delta, omega, g) to observed transition frequencies"},
      {"compare", "numeric versus closed-form Delta_n over beta at fixed Delta / omega"},
      {"levels", "six levels from five two-tone transition frequencies"},
      {"squid", "SQUID coupler Josephson inductance versus coupler flux"}};
  for (const auto& name : command_names()) app.add_subcommand(name, blurbs.at(name));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << error_json("usage", e.what()) << '\n';
    return 1;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    const CommandOutput r = dispatch(c);
    std::ostringstream buf;
    emit(c, r, buf);
    if (c.out.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!f) throw UsageError("cannot open output file '" + c.out + "'");
      f << buf.str();
      f.close();
      if (!f) throw ComputationError("failed writing '" + c.out + "'");
    }
    return 0;
  } catch (const UsageError& e) {
    err << error_json(e.kind(), e.what()) << '\n';
    return 1;
  } catch (const Error& e) {
    err << error_json(e.kind(), e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << error_json("internal", e.what()) << '\n';
    return 2;
  }
}

}  // namespace rabispec::cli
