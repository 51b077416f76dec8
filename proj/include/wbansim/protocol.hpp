#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "exposure.hpp"
#include "geometry.hpp"
#include "propagation.hpp"

namespace wbansim {

enum class Traffic { normal, emergency };
enum class RouteMode { single_hop, multi_hop };
enum class RouteReason { distance_rule, emergency, no_relay };

/// Which node powers a common reduction applies to.
enum class PowerScaling { both, tx_only, relay_only };

/// One Tx / optional relay / Rx arrangement with everything needed to
/// price both routes: powers, per-role antennas, radio, tissue, and limits.
struct Scene {
  NodePosition tx{1, 1};
  std::optional<NodePosition> relay{};
  NodePosition rx{15, 15};

  double tx_power_dbm = 15.0;
  double relay_power_dbm = 15.0;

  AntennaSpec tx_antenna{};
  AntennaSpec relay_antenna{.gain_dbi = 8.0};
  AntennaSpec rx_antenna{};

  RadioConfig radio{};
  TissueProperties tissue{};
  ExposureLimits limits{};

  double alpha = 2.0;
  PowerScaling scaling = PowerScaling::both;

  void validate() const {
    if (tx == rx) throw std::invalid_argument("Scene: tx and rx must be distinct");
    if (relay && (*relay == tx || *relay == rx)) {
      throw std::invalid_argument("Scene: relay must be distinct from tx and rx");
    }
    tx_antenna.validate();
    relay_antenna.validate();
    rx_antenna.validate();
    radio.validate();
    tissue.validate();
    limits.validate();
    if (alpha <= 0.0) throw std::invalid_argument("Scene: alpha must be positive");
  }
};

struct RouteDecision {
  RouteMode mode = RouteMode::single_hop;
  RouteReason reason = RouteReason::distance_rule;
};

/// Relaying is only worth it when the relay is closer to the Tx than the
/// destination is: single hop whenever dist(tx, rx) <= dist(tx, relay).
/// Emergency traffic and relay-less scenes always go direct.
inline RouteDecision choose_route(Traffic traffic, const Scene& s) {
  s.validate();
  if (traffic == Traffic::emergency) return {RouteMode::single_hop, RouteReason::emergency};
  if (!s.relay) return {RouteMode::single_hop, RouteReason::no_relay};
  if (distance(s.tx, s.rx) <= distance(s.tx, *s.relay)) {
    return {RouteMode::single_hop, RouteReason::distance_rule};
  }
  return {RouteMode::multi_hop, RouteReason::distance_rule};
}

/// Per-node dB offsets for one common reduction, per the scaling mode.
inline std::pair<double, double> scaled_offsets(PowerScaling mode, double reduction_db) {
  switch (mode) {
    case PowerScaling::tx_only: return {reduction_db, 0.0};
    case PowerScaling::relay_only: return {0.0, reduction_db};
    case PowerScaling::both: break;
  }
  return {reduction_db, reduction_db};
}

inline Emitter direct_emitter(const Scene& s) {
  return Emitter{s.tx, s.tx_power_dbm, s.tx_antenna, s.rx};
}

/// Both radiators of the two-hop route with `reduction_db` taken off per
/// the scene's scaling mode: Tx aimed at the relay, relay aimed at the Rx.
inline std::vector<Emitter> multi_hop_emitters(const Scene& s, double reduction_db = 0.0) {
  if (!s.relay) throw std::invalid_argument("multi_hop_emitters: scene has no relay");
  const auto [tx_off, relay_off] = scaled_offsets(s.scaling, reduction_db);
  return {Emitter{s.tx, s.tx_power_dbm - tx_off, s.tx_antenna, *s.relay},
          Emitter{*s.relay, s.relay_power_dbm - relay_off, s.relay_antenna, s.rx}};
}

inline double direct_rate_bps(const Scene& s) {
  return link_budget(s.tx_power_dbm, s.tx_antenna.gain_dbi, s.rx_antenna.gain_dbi,
                     distance(s.tx, s.rx), s.radio)
      .rate_bps;
}

/// End-to-end two-hop rate: the bottleneck of tx->relay and relay->rx.
/// The relay antenna serves as receiver on hop 1 and transmitter on hop 2.
inline double multi_hop_rate_bps(const Scene& s, double reduction_db = 0.0) {
  if (!s.relay) throw std::invalid_argument("multi_hop_rate_bps: scene has no relay");
  const auto [tx_off, relay_off] = scaled_offsets(s.scaling, reduction_db);
  const double hop1 = link_budget(s.tx_power_dbm - tx_off, s.tx_antenna.gain_dbi,
                                  s.relay_antenna.gain_dbi, distance(s.tx, *s.relay), s.radio)
                          .rate_bps;
  const double hop2 = link_budget(s.relay_power_dbm - relay_off, s.relay_antenna.gain_dbi,
                                  s.rx_antenna.gain_dbi, distance(*s.relay, s.rx), s.radio)
                          .rate_bps;
  return std::min(hop1, hop2);
}

inline double end_to_end_rate_bps(const RouteDecision& decision, const Scene& s) {
  if (decision.mode == RouteMode::single_hop) return direct_rate_bps(s);
  return multi_hop_rate_bps(s);
}

struct EqualizeOptions {
  double rate_tolerance_bps = 1e3;   // acceptable shortfall vs the direct rate
  double power_step_floor_db = 0.01; // search resolution
  double max_reduction_db = 200.0;   // search ceiling

  friend bool operator==(const EqualizeOptions&, const EqualizeOptions&) = default;
};

/// Outcome of the rate-equalizing power reduction. `original_power_dbm` and
/// `reduced_power_dbm` describe the scaled node (the Tx unless the scene
/// scales the relay alone); with PowerScaling::both the relay moves in
/// lockstep by the same reduction_db.
struct PowerControlResult {
  double original_power_dbm = 0.0;
  double reduced_power_dbm = 0.0;
  double reduction_db = 0.0;
  double reduction_fraction = 0.0;  // 1 - 10^(-reduction_db / 10)

  double direct_rate_bps = 0.0;
  double multi_rate_before_bps = 0.0;
  double multi_rate_after_bps = 0.0;

  ExposureSample exposure_before{};
  ExposureSample exposure_after{};

  bool target_unreachable = false;  // two-hop can't match direct even at full power
  bool hit_search_ceiling = false;  // still matching at max_reduction_db (e.g. direct rate 0)
};

namespace detail {
inline ExposureSample exposure_at_rx(const Scene& s, const std::vector<Emitter>& emitters) {
  return aggregate_exposure(s.rx, emitters, s.tissue, s.limits, s.radio, s.alpha);
}
}  // namespace detail

/// Find the largest common power reduction that keeps the two-hop rate
/// within rate_tolerance_bps of the direct rate, by bisecting the reduction
/// in dB. The rate is monotone non-increasing in the reduction, so the
/// bisection brackets the feasibility boundary to power_step_floor_db.
///
/// Degenerate cases: when two-hop lags the direct rate even at full power
/// the result flags target_unreachable and keeps full power; when the
/// target is still met at max_reduction_db (a zero direct rate, say) the
/// reduction is pinned there and hit_search_ceiling set.
inline PowerControlResult equalize_rates(const Scene& s, const EqualizeOptions& opt = {}) {
  s.validate();
  if (!s.relay) throw std::invalid_argument("equalize_rates: scene has no relay");
  if (opt.rate_tolerance_bps < 0.0) throw std::invalid_argument("equalize_rates: rate_tolerance_bps must be non-negative");
  if (opt.power_step_floor_db <= 0.0) throw std::invalid_argument("equalize_rates: power_step_floor_db must be positive");
  if (opt.max_reduction_db <= 0.0) throw std::invalid_argument("equalize_rates: max_reduction_db must be positive");

  PowerControlResult res;
  res.original_power_dbm = s.scaling == PowerScaling::relay_only ? s.relay_power_dbm : s.tx_power_dbm;
  res.direct_rate_bps = direct_rate_bps(s);
  res.multi_rate_before_bps = multi_hop_rate_bps(s, 0.0);
  res.exposure_before = detail::exposure_at_rx(s, multi_hop_emitters(s, 0.0));

  const double target = res.direct_rate_bps - opt.rate_tolerance_bps;
  const auto feasible = [&](double reduction) { return multi_hop_rate_bps(s, reduction) >= target; };

  double reduction = 0.0;
  if (!feasible(0.0)) {
    res.target_unreachable = true;
  } else if (feasible(opt.max_reduction_db)) {
    reduction = opt.max_reduction_db;
    res.hit_search_ceiling = true;
  } else {
    double lo = 0.0;                    // feasible
    double hi = opt.max_reduction_db;   // infeasible
    while (hi - lo >= opt.power_step_floor_db) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
    reduction = lo;
  }

  res.reduction_db = reduction;
  res.reduced_power_dbm = res.original_power_dbm - reduction;
  res.reduction_fraction =
      1.0 - std::pow(10.0, (res.reduced_power_dbm - res.original_power_dbm) / 10.0);
  res.multi_rate_after_bps = multi_hop_rate_bps(s, reduction);
  res.exposure_after = detail::exposure_at_rx(s, multi_hop_emitters(s, reduction));
  return res;
}

struct ProtocolOutcome {
  RouteDecision decision{};
  PowerControlResult power{};
  ExposureSample exposure{};  // at the Rx, with final powers on the chosen route
};

/// Route selection followed by power control. Single-hop routes transmit at
/// full power (there is no second link to equalize against); two-hop routes
/// get the rate-equalizing reduction applied.
inline ProtocolOutcome run_protocol(Traffic traffic, const Scene& s,
                                    const EqualizeOptions& opt = {}) {
  ProtocolOutcome out;
  out.decision = choose_route(traffic, s);
  if (out.decision.mode == RouteMode::single_hop) {
    const double rate = direct_rate_bps(s);
    const std::vector<Emitter> emitters{direct_emitter(s)};
    out.exposure = detail::exposure_at_rx(s, emitters);
    out.power.original_power_dbm = s.tx_power_dbm;
    out.power.reduced_power_dbm = s.tx_power_dbm;
    out.power.direct_rate_bps = rate;
    out.power.multi_rate_before_bps = rate;
    out.power.multi_rate_after_bps = rate;
    out.power.exposure_before = out.exposure;
    out.power.exposure_after = out.exposure;
    return out;
  }
  out.power = equalize_rates(s, opt);
  out.exposure = out.power.exposure_after;
  return out;
}

}  // namespace wbansim
