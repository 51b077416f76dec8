#pragma once

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "numfmt.hpp"
#include "sweep.hpp"

namespace wbansim {

inline const char* metric_unit(HeatmapMetric m) {
  return m == HeatmapMetric::pd ? "W/m2" : "W/kg";
}

/// Heatmap CSV layout: one `#` metadata line, then length_cm rows of
/// width_cm comma-separated values (row i is x = i, column j is y = j).
/// Masked cells are written as empty fields. Values use the shortest
/// round-trip decimal form, so reading the file back reproduces the doubles
/// bit for bit.
inline void write_heatmap_csv(std::ostream& out, const Heatmap& h) {
  out << "# heatmap metric=" << to_string(h.metric) << " unit=" << metric_unit(h.metric)
      << " length_cm=" << h.grid.length_cm << " width_cm=" << h.grid.width_cm
      << " cell_size_cm=" << h.grid.cell_size_cm << " scenario=" << h.scenario << "\n";
  for (int x = 1; x <= h.grid.length_cm; ++x) {
    for (int y = 1; y <= h.grid.width_cm; ++y) {
      if (y > 1) out << ",";
      const NodePosition p{x, y};
      if (!h.is_masked(p) && !std::isnan(h.at(p))) {
        out << format_double(h.at(p));
      }
    }
    out << "\n";
  }
}

namespace detail {

inline std::string header_field(const std::string& header, std::string_view key) {
  std::istringstream tokens(header);
  std::string token;
  while (tokens >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    if (std::string_view(token).substr(0, eq) == key) {
      return token.substr(eq + 1);
    }
  }
  throw std::runtime_error("heatmap csv: missing header field '" + std::string(key) + "'");
}

}  // namespace detail

inline Heatmap read_heatmap_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.empty() || header[0] != '#') {
    throw std::runtime_error("heatmap csv: missing '#' metadata line");
  }

  GridSpec grid;
  if (!parse_int(detail::header_field(header, "length_cm"), grid.length_cm) ||
      !parse_int(detail::header_field(header, "width_cm"), grid.width_cm) ||
      !parse_int(detail::header_field(header, "cell_size_cm"), grid.cell_size_cm)) {
    throw std::runtime_error("heatmap csv: bad grid dimensions in header");
  }
  const std::string metric = detail::header_field(header, "metric");
  if (metric != "pd" && metric != "sar") {
    throw std::runtime_error("heatmap csv: unknown metric '" + metric + "'");
  }

  Heatmap h = Heatmap::make(grid, metric == "pd" ? HeatmapMetric::pd : HeatmapMetric::sar,
                            detail::header_field(header, "scenario"));
  for (int x = 1; x <= grid.length_cm; ++x) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("heatmap csv: truncated matrix");
    std::size_t start = 0;
    for (int y = 1; y <= grid.width_cm; ++y) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field =
          trim(std::string_view(line).substr(start, comma == std::string::npos ? line.size() - start
                                                                               : comma - start));
      const NodePosition p{x, y};
      if (field.empty()) {
        h.mask(p);
      } else {
        double v = 0.0;
        if (!parse_double(field, v)) throw std::runtime_error("heatmap csv: bad value in matrix");
        h.set(p, v);
      }
      if (comma == std::string::npos) {
        if (y != grid.width_cm) throw std::runtime_error("heatmap csv: short row");
        break;
      }
      start = comma + 1;
    }
  }
  return h;
}

/// CDF CSV layout: `#` metadata line carrying the limit, a column-name row,
/// then one (value, cumulative probability) pair per line in ascending
/// value order.
inline void write_cdf_csv(std::ostream& out, const EmpiricalCdf& cdf, HeatmapMetric metric) {
  out << "# cdf metric=" << to_string(metric) << " unit=" << metric_unit(metric)
      << " limit=" << format_double(cdf.limit) << " samples=" << cdf.values.size() << "\n";
  out << "value,cum_prob\n";
  for (std::size_t i = 0; i < cdf.values.size(); ++i) {
    out << format_double(cdf.values[i]) << "," << format_double(cdf.probabilities[i]) << "\n";
  }
}

inline EmpiricalCdf read_cdf_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.empty() || header[0] != '#') {
    throw std::runtime_error("cdf csv: missing '#' metadata line");
  }
  EmpiricalCdf cdf;
  if (!parse_double(detail::header_field(header, "limit"), cdf.limit)) {
    throw std::runtime_error("cdf csv: bad limit in header");
  }
  std::string line;
  if (!std::getline(in, line) || trim(line) != "value,cum_prob") {
    throw std::runtime_error("cdf csv: missing column-name row");
  }
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("cdf csv: bad row");
    double v = 0.0;
    double p = 0.0;
    if (!parse_double(std::string_view(line).substr(0, comma), v) ||
        !parse_double(std::string_view(line).substr(comma + 1), p)) {
      throw std::runtime_error("cdf csv: bad row");
    }
    cdf.values.push_back(v);
    cdf.probabilities.push_back(p);
  }
  return cdf;
}

}  // namespace wbansim
