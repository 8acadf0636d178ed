#pragma once

// Tabular input and output: reference-data and spectrum CSV readers, and
// CSV / JSON / SVG writers for result tables.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rabispec/errors.hpp"
#include "rabispec/rabi.hpp"
#include "rabispec/spectro.hpp"

namespace rabispec::io {

// ----------------------------------------------------------------------------
// Low-level CSV helpers

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double parse_double(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
    throw ParseError("line " + std::to_string(line_no) + ": not a number: '" +
                     std::string(field) + "'");
  return value;
}

inline int parse_int(std::string_view field, std::size_t line_no) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError("line " + std::to_string(line_no) + ": not an integer: '" +
                     std::string(field) + "'");
  return value;
}

/// Reads data lines, skipping blanks and '#' comments; checks the header.
class CsvReader {
public:
  CsvReader(std::istream& in, std::string_view expected_header) : in_(in) {
    std::string line;
    while (next_raw(line)) {
      std::string_view view = line;
      if (line_no_ == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
      view = trim(view);
      if (view.empty() || view.front() == '#') continue;
      if (view != expected_header)
        throw ParseError("unexpected CSV header '" + std::string(view) + "', expected '" +
                         std::string(expected_header) + "'");
      return;
    }
    throw ParseError("missing CSV header '" + std::string(expected_header) + "'");
  }

  /// Next data row, or empty optional at end of input.
  std::optional<std::vector<std::string_view>> next(std::size_t expected_fields) {
    while (next_raw(line_)) {
      const std::string_view view = trim(line_);
      if (view.empty() || view.front() == '#') continue;
      auto fields = split_csv_line(view);
      if (fields.size() != expected_fields)
        throw ParseError("line " + std::to_string(line_no_) + ": expected " +
                         std::to_string(expected_fields) + " fields, got " +
                         std::to_string(fields.size()));
      return fields;
    }
    return std::nullopt;
  }

  std::size_t line_no() const { return line_no_; }

private:
  bool next_raw(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    return true;
  }

  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open input file '" + path + "'");
  return in;
}

// ----------------------------------------------------------------------------
// Reference data

struct ReferenceSet {
  std::string id;
  CircuitParams params;
  std::array<std::optional<double>, 3> measured;
  std::array<std::optional<double>, 3> calculated;
};

inline constexpr std::string_view kTableOneHeader =
    "set,delta,omega,g,d0_measured,d1_measured,d2_measured,d0_calculated,d1_calculated,"
    "d2_calculated";

inline std::vector<ReferenceSet> read_reference_sets(std::istream& in) {
  CsvReader reader(in, kTableOneHeader);
  std::vector<ReferenceSet> out;
  while (auto row = reader.next(10)) {
    const auto& f = *row;
    const std::size_t ln = reader.line_no();
    ReferenceSet r;
    r.id = std::string(f[0]);
    r.params.delta = parse_double(f[1], ln);
    r.params.omega = parse_double(f[2], ln);
    r.params.g = parse_double(f[3], ln);
    for (int n = 0; n < 3; ++n) {
      if (!f[4 + n].empty()) r.measured[n] = parse_double(f[4 + n], ln);
      if (!f[7 + n].empty()) r.calculated[n] = parse_double(f[7 + n], ln);
    }
    r.params.validate();
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string default_data_dir() {
#ifdef RABISPEC_DATA_DIR
  return RABISPEC_DATA_DIR;
#else
  return "data";
#endif
}

inline std::vector<ReferenceSet> load_reference_sets(const std::string& path) {
  auto in = open_input(path);
  return read_reference_sets(in);
}

inline std::vector<ReferenceSet> load_reference_sets() {
  return load_reference_sets(default_data_dir() + "/table1.csv");
}

inline const ReferenceSet& find_set(const std::vector<ReferenceSet>& sets, std::string_view id) {
  for (const auto& s : sets)
    if (s.id == id) return s;
  throw InvalidArgument("unknown parameter set '" + std::string(id) + "'");
}

// ----------------------------------------------------------------------------
// Spectrum and observation files

inline constexpr std::string_view kSpectrumHeader = "epsilon_ghz,omega_p_ghz,s21_abs";

struct SpectrumRow {
  double epsilon = 0.0;
  double omega_p = 0.0;
  double s21_abs = 0.0;
};

inline std::vector<SpectrumRow> read_spectrum_csv(std::istream& in) {
  CsvReader reader(in, kSpectrumHeader);
  std::vector<SpectrumRow> out;
  while (auto row = reader.next(3)) {
    const std::size_t ln = reader.line_no();
    out.push_back({parse_double((*row)[0], ln), parse_double((*row)[1], ln),
                   parse_double((*row)[2], ln)});
  }
  return out;
}

inline constexpr std::string_view kObservationHeader = "epsilon_ghz,from,to,freq_ghz";

inline std::vector<TransitionObservation> read_observations_csv(std::istream& in) {
  CsvReader reader(in, kObservationHeader);
  std::vector<TransitionObservation> out;
  while (auto row = reader.next(4)) {
    const std::size_t ln = reader.line_no();
    TransitionObservation o;
    o.epsilon = parse_double((*row)[0], ln);
    o.transition.from = parse_int((*row)[1], ln);
    o.transition.to = parse_int((*row)[2], ln);
    o.frequency = parse_double((*row)[3], ln);
    out.push_back(o);
  }
  return out;
}

// ----------------------------------------------------------------------------
// Result tables

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  int precision = 4;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw Error("table row width does not match header");
    rows.push_back(std::move(row));
  }

  std::size_t column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw Error("no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
};

inline Cell opt_cell(const std::optional<double>& v) {
  return v ? Cell{*v} : Cell{};
}

/// Fixed-point formatting; "-0.0000" is printed as "0.0000".
inline std::string format_number(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  std::string s = buf;
  if (s.starts_with('-') && s.find_first_not_of("0.", 1) == std::string::npos) s.erase(0, 1);
  return s;
}

inline std::string format_cell(const Cell& c, int precision) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d, precision);
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return {};
}

inline void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_cell(row[i], t.precision);
    out << '\n';
  }
}

/// Numbers are rounded to the table's print precision so JSON and CSV agree.
inline nlohmann::ordered_json table_to_json(const Table& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (const auto* d = std::get_if<double>(&c))
        obj[t.columns[i]] = std::stod(format_number(*d, t.precision));
      else if (const auto* s = std::get_if<std::string>(&c))
        obj[t.columns[i]] = *s;
      else
        obj[t.columns[i]] = nullptr;
    }
    rows.push_back(std::move(obj));
  }
  nlohmann::ordered_json j;
  j["columns"] = t.columns;
  j["rows"] = std::move(rows);
  return j;
}

inline void write_json(std::ostream& out, const nlohmann::ordered_json& j) {
  out << j.dump(2) << '\n';
}

// ----------------------------------------------------------------------------
// Minimal SVG line plots

struct PlotSpec {
  std::string title;
  std::string x_column;
  std::vector<std::string> y_columns;
  /// Optional column whose string value splits rows into separate series
  /// rendered as markers instead of lines (e.g. measured points).
  std::string marker_filter_column;
  std::string marker_filter_value;
};

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Polylines carry the data in table units (same print precision as the
/// CSV); a group transform maps them onto the canvas.
inline void write_svg(std::ostream& out, const Table& t, const PlotSpec& spec) {
  constexpr double kWidth = 640.0, kHeight = 420.0, kMargin = 50.0;
  static const char* colors[] = {"#000000", "#d62728", "#1f77b4", "#ff7f0e",
                                 "#e377c2", "#2ca02c", "#9467bd"};
  const std::size_t xc = t.column(spec.x_column);
  std::vector<std::size_t> ycs;
  for (const auto& name : spec.y_columns) ycs.push_back(t.column(name));
  const bool has_filter = !spec.marker_filter_column.empty();
  const std::size_t fc = has_filter ? t.column(spec.marker_filter_column) : 0;

  auto rounded = [&](double v) { return std::stod(format_number(v, t.precision)); };
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& row : t.rows) {
    const auto* x = std::get_if<double>(&row[xc]);
    if (!x) continue;
    for (std::size_t yc : ycs) {
      const auto* y = std::get_if<double>(&row[yc]);
      if (!y) continue;
      xmin = std::min(xmin, rounded(*x));
      xmax = std::max(xmax, rounded(*x));
      ymin = std::min(ymin, rounded(*y));
      ymax = std::max(ymax, rounded(*y));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double sx = (kWidth - 2 * kMargin) / (xmax - xmin);
  const double sy = (kHeight - 2 * kMargin) / (ymax - ymin);
  const double tx = kMargin - sx * xmin;
  const double ty = kHeight - kMargin + sy * ymin;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<title>" << xml_escape(spec.title) << "</title>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<g stroke=\"#444444\" stroke-width=\"1\" fill=\"none\">\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
      << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin << "\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kHeight - kMargin << "\"/>\n";
  out << "</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#222222\">\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
      << xml_escape(spec.x_column) << " [" << format_number(xmin, t.precision) << ", "
      << format_number(xmax, t.precision) << "]</text>\n";
  out << "<text x=\"12\" y=\"" << kMargin - 20 << "\">y [" << format_number(ymin, t.precision)
      << ", " << format_number(ymax, t.precision) << "]</text>\n";
  out << "</g>\n";

  char matrix[160];
  std::snprintf(matrix, sizeof matrix, "matrix(%.10g 0 0 %.10g %.10g %.10g)", sx, -sy, tx, ty);
  out << "<g transform=\"" << matrix << "\">\n";
  for (std::size_t k = 0; k < ycs.size(); ++k) {
    const char* color = colors[k % std::size(colors)];
    std::vector<std::string> segment;
    auto flush = [&] {
      if (segment.size() >= 2) {
        out << "<polyline data-series=\"" << xml_escape(spec.y_columns[k])
            << "\" vector-effect=\"non-scaling-stroke\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < segment.size(); ++i) out << (i ? " " : "") << segment[i];
        out << "\"/>\n";
      }
      segment.clear();
    };
    for (const auto& row : t.rows) {
      const bool is_marker = has_filter && std::get_if<std::string>(&row[fc]) &&
                             std::get<std::string>(row[fc]) == spec.marker_filter_value;
      const auto* x = std::get_if<double>(&row[xc]);
      const auto* y = std::get_if<double>(&row[ycs[k]]);
      if (is_marker) {
        if (x && y)
          out << "<ellipse data-series=\"" << xml_escape(spec.y_columns[k]) << "\" cx=\""
              << format_number(*x, t.precision) << "\" cy=\"" << format_number(*y, t.precision)
              << "\" rx=\"" << format_number(3.0 / sx, 6) << "\" ry=\""
              << format_number(3.0 / sy, 6) << "\" fill=\"" << color << "\"/>\n";
        continue;
      }
      if (!x || !y) {
        flush();
        continue;
      }
      segment.push_back(format_number(*x, t.precision) + "," + format_number(*y, t.precision));
    }
    flush();
  }
  out << "</g>\n</svg>\n";
}

}  // namespace rabispec::io
