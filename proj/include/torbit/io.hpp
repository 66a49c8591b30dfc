#pragma once

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "orbits.hpp"

#ifndef TORBIT_VERSION
#define TORBIT_VERSION "0.0.0"
#endif

namespace torbit {

using Json = nlohmann::ordered_json;

inline constexpr const char* version() { return TORBIT_VERSION; }

/// Shortest round-trippable rendering at 12 significant digits.
inline std::string format_real(double x) {
  if (!std::isfinite(x)) return x != x ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// JSON number holding x rounded to 12 significant digits.
inline Json real_json(double x) {
  if (!std::isfinite(x)) return format_real(x);
  return std::stod(format_real(x));
}

inline std::string poly_string(const IntPoly& f) {
  std::string s;
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? " " : "") + f[i].get_str();
  return s;
}

/// {degree, min_poly (c_0 .. c_{n-1}, monic term implied), order_basis, disc}.
inline Json order_json(const Order& o) {
  Json j;
  const auto& f = o.field().min_poly();
  j["degree"] = o.degree();
  Json poly = Json::array();
  for (int i = 0; i < o.degree(); ++i) poly.push_back(f[i].get_str());
  j["min_poly"] = poly;
  Json rows = Json::array();
  for (int i = 0; i < o.degree(); ++i) {
    Json r = Json::array();
    for (int k = 0; k < o.degree(); ++k) r.push_back(to_string(o.basis()(i, k)));
    rows.push_back(r);
  }
  j["order_basis"] = rows;
  j["disc"] = o.disc().get_str();
  return j;
}

inline Json orbit_json(const TorusOrbit& o, std::size_t class_index) {
  Json j;
  j["field"] = order_json(Order::maximal(o.field));
  j["class_index"] = class_index;
  j["theta"] = o.theta;
  j["disc"] = o.disc_order_route.get_str();
  j["disc_wedge"] = o.disc_wedge_route.get_str();
  j["volume"] = real_json(o.volume);
  j["classical_regulator"] = real_json(o.classical_regulator);
  j["cusp_excursion_num"] = to_string(o.cusp.min_norm_ratio);
  j["cusp_excursion_den_sq"] = o.cusp.disc.get_str();
  return j;
}

/// Provenance of an output file: tool version, experiment tag and config.
struct RunHeader {
  std::string experiment;
  Json config;

  Json json() const {
    Json j;
    j["tool"] = "torbit";
    j["version"] = version();
    j["experiment"] = experiment;
    j["config"] = config;
    return j;
  }

  std::string comment_line() const { return "# " + json().dump() + "\n"; }
};

/// Comma-separated table with a provenance comment line and a header row.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const RunHeader& header, std::vector<std::string> columns)
      : out_(out), columns_(std::move(columns)) {
    out_ << header.comment_line();
    write_row(columns_);
  }

  CsvWriter& cell(const std::string& s) {
    row_.push_back(s);
    return *this;
  }
  CsvWriter& cell(double x) { return cell(format_real(x)); }
  CsvWriter& cell(const Int& x) { return cell(x.get_str()); }
  CsvWriter& cell(const Rat& x) { return cell(to_string(x)); }
  template <class I>
    requires std::is_integral_v<I>
  CsvWriter& cell(I x) {
    return cell(std::to_string(x));
  }

  void end_row() {
    require(row_.size() == columns_.size(), ErrorKind::invalid_argument, "row width does not match the header");
    write_row(row_);
    row_.clear();
  }

  void comment(const std::string& text) { out_ << "# " << text << "\n"; }

 private:
  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        out_ << cells[i];
        continue;
      }
      out_ << '"';
      for (char c : cells[i]) out_ << (c == '"' ? "\"\"" : std::string(1, c));
      out_ << '"';
    }
    out_ << '\n';
  }

  std::ostream& out_;
  std::vector<std::string> columns_;
  std::vector<std::string> row_;
};

}  // namespace torbit
