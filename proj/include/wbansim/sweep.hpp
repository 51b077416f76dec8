#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "protocol.hpp"

namespace wbansim {

enum class SweepKind { relay_sweep, tx_sweep, rx_sweep };
enum class Role { tx, relay, rx };
enum class HeatmapMetric { pd, sar };

inline const char* to_string(SweepKind k) {
  switch (k) {
    case SweepKind::relay_sweep: return "relay_sweep";
    case SweepKind::tx_sweep: return "tx_sweep";
    case SweepKind::rx_sweep: return "rx_sweep";
  }
  return "?";
}

inline const char* to_string(Role r) {
  switch (r) {
    case Role::tx: return "tx";
    case Role::relay: return "relay";
    case Role::rx: return "rx";
  }
  return "?";
}

inline const char* to_string(HeatmapMetric m) {
  return m == HeatmapMetric::pd ? "pd" : "sar";
}

/// The node role that moves across the grid for each sweep kind.
inline Role swept_role(SweepKind k) {
  switch (k) {
    case SweepKind::relay_sweep: return Role::relay;
    case SweepKind::tx_sweep: return Role::tx;
    case SweepKind::rx_sweep: return Role::rx;
  }
  throw std::invalid_argument("swept_role: unknown sweep kind");
}

/// Per-cell scalar field over the grid, row-major with x fastest. Cells
/// holding fixed nodes are masked and carry no value (NaN internally).
struct Heatmap {
  GridSpec grid{};
  HeatmapMetric metric = HeatmapMetric::pd;
  std::string scenario;  // free-form tag carried into the CSV header
  std::vector<double> values;
  std::vector<std::uint8_t> masked;

  static Heatmap make(const GridSpec& g, HeatmapMetric m, std::string scenario_tag) {
    g.validate();
    Heatmap h;
    h.grid = g;
    h.metric = m;
    h.scenario = std::move(scenario_tag);
    const std::size_t n = static_cast<std::size_t>(g.length_cm) * static_cast<std::size_t>(g.width_cm);
    h.values.assign(n, std::numeric_limits<double>::quiet_NaN());
    h.masked.assign(n, 0);
    return h;
  }

  std::size_t index(NodePosition p) const {
    if (!on_grid(p, grid)) throw std::out_of_range("Heatmap: position off the grid");
    return static_cast<std::size_t>(p.y - 1) * static_cast<std::size_t>(grid.length_cm) +
           static_cast<std::size_t>(p.x - 1);
  }
  double at(NodePosition p) const { return values[index(p)]; }
  void set(NodePosition p, double v) { values[index(p)] = v; }
  bool is_masked(NodePosition p) const { return masked[index(p)] != 0; }
  void mask(NodePosition p) { masked[index(p)] = 1; }
};

struct SweepResult {
  Heatmap pd;
  Heatmap sar;
};

/// One sweep: a kind, the fixed node positions (all roles except the swept
/// one), and the scene template supplying powers, antennas, radio, tissue,
/// and limits. `protocol_enabled` switches the power-control reduction on.
struct SweepScenario {
  SweepKind kind = SweepKind::relay_sweep;
  std::map<Role, NodePosition> fixed_positions;
  GridSpec grid{};
  bool protocol_enabled = true;
  Scene base_scene{};
  EqualizeOptions equalize{};

  void validate() const {
    grid.validate();
    const Role moving = swept_role(kind);
    if (fixed_positions.contains(moving)) {
      throw std::invalid_argument(std::string("SweepScenario: swept role '") + to_string(moving) +
                                  "' must not be fixed");
    }
    for (Role required : required_roles()) {
      if (!fixed_positions.contains(required)) {
        throw std::invalid_argument(std::string("SweepScenario: missing fixed position for '") +
                                    to_string(required) + "'");
      }
    }
    for (const auto& [role, pos] : fixed_positions) {
      if (!on_grid(pos, grid)) {
        throw std::invalid_argument(std::string("SweepScenario: fixed '") + to_string(role) +
                                    "' is off the grid");
      }
    }
    for (auto a = fixed_positions.begin(); a != fixed_positions.end(); ++a) {
      for (auto b = std::next(a); b != fixed_positions.end(); ++b) {
        if (a->second == b->second) {
          throw std::invalid_argument("SweepScenario: fixed positions must be distinct");
        }
      }
    }
  }

  std::vector<Role> required_roles() const {
    switch (kind) {
      case SweepKind::relay_sweep: return {Role::tx, Role::rx};
      case SweepKind::tx_sweep: return {Role::relay, Role::rx};
      case SweepKind::rx_sweep: return {Role::tx, Role::relay};
    }
    throw std::invalid_argument("SweepScenario: unknown sweep kind");
  }
};

namespace detail {

inline void assign_role(Scene& s, Role role, NodePosition p) {
  switch (role) {
    case Role::tx: s.tx = p; return;
    case Role::relay: s.relay = p; return;
    case Role::rx: s.rx = p; return;
  }
}

inline std::string position_tag(NodePosition p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

inline std::string scenario_tag(const SweepScenario& sc) {
  std::string tag = to_string(sc.kind);
  tag += sc.protocol_enabled ? ";protocol=on" : ";protocol=off";
  for (const auto& [role, pos] : sc.fixed_positions) {
    tag += ";";
    tag += to_string(role);
    tag += "=";
    tag += position_tag(pos);
  }
  return tag;
}

/// Exposure at the Rx for one placement of the swept node.
///
/// `route_select` distinguishes the two readings of a protocol-off sweep:
/// relay placement studies keep the raw two-hop configuration regardless of
/// distances (protocol off means no protocol at all), while Tx/Rx placement
/// studies always route per the distance rule and only skip the power
/// reduction when the protocol is off.
inline ExposureSample sweep_cell_sample(const Scene& s, bool protocol_enabled, bool route_select,
                                        const EqualizeOptions& opt) {
  if (!route_select) {
    return exposure_at_rx(s, multi_hop_emitters(s, 0.0));
  }
  if (protocol_enabled) {
    return run_protocol(Traffic::normal, s, opt).exposure;
  }
  const RouteDecision decision = choose_route(Traffic::normal, s);
  if (decision.mode == RouteMode::multi_hop) {
    return exposure_at_rx(s, multi_hop_emitters(s, 0.0));
  }
  return exposure_at_rx(s, {direct_emitter(s)});
}

inline SweepResult run_sweep_impl(const SweepScenario& sc, bool route_select) {
  sc.validate();
  const std::string tag = scenario_tag(sc);
  Heatmap pd = Heatmap::make(sc.grid, HeatmapMetric::pd, tag);
  Heatmap sar = Heatmap::make(sc.grid, HeatmapMetric::sar, tag);

  std::set<NodePosition> occupied;
  for (const auto& [role, pos] : sc.fixed_positions) {
    occupied.insert(pos);
    pd.mask(pos);
    sar.mask(pos);
  }

  const Role moving = swept_role(sc.kind);
  // Fixed evaluation order (row-major, sequential) keeps results
  // bit-identical from run to run.
  for (const NodePosition cell : grid_cells(sc.grid, occupied)) {
    Scene s = sc.base_scene;
    for (const auto& [role, pos] : sc.fixed_positions) {
      assign_role(s, role, pos);
    }
    assign_role(s, moving, cell);
    const ExposureSample sample = sweep_cell_sample(s, sc.protocol_enabled, route_select, sc.equalize);
    pd.set(cell, sample.pd_w_per_m2);
    sar.set(cell, sample.sar_w_per_kg);
  }
  return {std::move(pd), std::move(sar)};
}

}  // namespace detail

/// Relay placement study: Tx and Rx fixed, relay tried in every free cell.
/// With the protocol off every cell is priced as a raw full-power two-hop
/// configuration; with it on, routing and power control run per cell.
inline SweepResult relay_sweep(const SweepScenario& sc) {
  if (sc.kind != SweepKind::relay_sweep) throw std::invalid_argument("relay_sweep: wrong sweep kind");
  return detail::run_sweep_impl(sc, /*route_select=*/sc.protocol_enabled);
}

/// Tx placement study: relay and Rx fixed. The route is chosen per cell by
/// the distance rule; the protocol switch only controls the reduction.
inline SweepResult tx_sweep(const SweepScenario& sc) {
  if (sc.kind != SweepKind::tx_sweep) throw std::invalid_argument("tx_sweep: wrong sweep kind");
  return detail::run_sweep_impl(sc, /*route_select=*/true);
}

/// Rx placement study: Tx and relay fixed, same routing convention as
/// tx_sweep. The moving Rx is also the exposure evaluation point.
inline SweepResult rx_sweep(const SweepScenario& sc) {
  if (sc.kind != SweepKind::rx_sweep) throw std::invalid_argument("rx_sweep: wrong sweep kind");
  return detail::run_sweep_impl(sc, /*route_select=*/true);
}

inline SweepResult run_sweep(const SweepScenario& sc) {
  switch (sc.kind) {
    case SweepKind::relay_sweep: return relay_sweep(sc);
    case SweepKind::tx_sweep: return tx_sweep(sc);
    case SweepKind::rx_sweep: return rx_sweep(sc);
  }
  throw std::invalid_argument("run_sweep: unknown sweep kind");
}

/// Values of all evaluated (unmasked, non-NaN) cells in row-major order.
inline std::vector<double> unmasked_values(const Heatmap& h) {
  std::vector<double> out;
  out.reserve(h.values.size());
  for (std::size_t i = 0; i < h.values.size(); ++i) {
    if (h.masked[i] == 0 && !std::isnan(h.values[i])) {
      out.push_back(h.values[i]);
    }
  }
  return out;
}

/// Cell with the largest value, first cell in row-major order on ties.
inline std::pair<NodePosition, double> argmax_cell(const Heatmap& h) {
  bool found = false;
  NodePosition best_pos{};
  double best = 0.0;
  for (int y = 1; y <= h.grid.width_cm; ++y) {
    for (int x = 1; x <= h.grid.length_cm; ++x) {
      const NodePosition p{x, y};
      if (h.is_masked(p)) continue;
      const double v = h.at(p);
      if (std::isnan(v)) continue;
      if (!found || v > best) {
        found = true;
        best = v;
        best_pos = p;
      }
    }
  }
  if (!found) throw std::invalid_argument("argmax_cell: heatmap has no evaluated cells");
  return {best_pos, best};
}

/// Step CDF of a sample set: sorted values with cumulative probabilities
/// (i+1)/n, plus the limit the samples are judged against.
struct EmpiricalCdf {
  std::vector<double> values;
  std::vector<double> probabilities;
  double limit = 0.0;

  /// F(x): fraction of samples with value <= x.
  double at(double x) const {
    const auto it = std::upper_bound(values.begin(), values.end(), x);
    return static_cast<double>(it - values.begin()) / static_cast<double>(values.size());
  }

  /// Fraction of samples strictly above the limit; computed by counting,
  /// so it agrees exactly with violation fractions computed elsewhere.
  double fraction_above_limit() const {
    const auto above = static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [&](double v) { return v > limit; }));
    return static_cast<double>(above) / static_cast<double>(values.size());
  }
};

inline EmpiricalCdf empirical_cdf(std::vector<double> samples, double limit) {
  if (samples.empty()) throw std::invalid_argument("empirical_cdf: no samples");
  std::sort(samples.begin(), samples.end());
  EmpiricalCdf cdf;
  cdf.limit = limit;
  const std::size_t n = samples.size();
  cdf.values = std::move(samples);
  cdf.probabilities.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cdf.probabilities[i] = static_cast<double>(i + 1) / static_cast<double>(n);
  }
  return cdf;
}

}  // namespace wbansim
