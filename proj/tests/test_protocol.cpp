#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <wbansim/protocol.hpp>

using namespace wbansim;

namespace {

// Reference scene used across the suite: Tx (1,1) and Rx (15,15) fixed,
// relay at (5,6), full default powers and antennas.
Scene reference_scene() {
  Scene s;
  s.relay = NodePosition{5, 6};
  return s;
}

}  // namespace

TEST_CASE("choose_route applies the distance rule") {
  const Scene s = reference_scene();
  // dist(tx, rx) = 0.198 m exceeds dist(tx, relay) = 0.064 m: relaying pays.
  const RouteDecision d = choose_route(Traffic::normal, s);
  CHECK(d.mode == RouteMode::multi_hop);
  CHECK(d.reason == RouteReason::distance_rule);

  // A relay farther out than the Rx itself is not worth a detour.
  Scene far = s;
  far.relay = NodePosition{16, 15};
  const RouteDecision f = choose_route(Traffic::normal, far);
  CHECK(f.mode == RouteMode::single_hop);
  CHECK(f.reason == RouteReason::distance_rule);
}

TEST_CASE("emergency traffic always goes direct") {
  const RouteDecision d = choose_route(Traffic::emergency, reference_scene());
  CHECK(d.mode == RouteMode::single_hop);
  CHECK(d.reason == RouteReason::emergency);
}

TEST_CASE("a scene without relay goes direct") {
  Scene s = reference_scene();
  s.relay.reset();
  const RouteDecision d = choose_route(Traffic::normal, s);
  CHECK(d.mode == RouteMode::single_hop);
  CHECK(d.reason == RouteReason::no_relay);
}

TEST_CASE("scene validation rejects coincident nodes") {
  Scene s = reference_scene();
  s.rx = s.tx;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = reference_scene();
  s.relay = s.tx;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = reference_scene();
  s.relay = s.rx;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  CHECK_NOTHROW(reference_scene().validate());
}

TEST_CASE("end-to-end rate takes the bottleneck hop") {
  const Scene s = reference_scene();
  // Both modes saturate the 10 Mbps cap at full default powers.
  CHECK(end_to_end_rate_bps({RouteMode::single_hop, RouteReason::distance_rule}, s) ==
        s.radio.max_rate_bps);
  CHECK(end_to_end_rate_bps({RouteMode::multi_hop, RouteReason::distance_rule}, s) ==
        s.radio.max_rate_bps);

  // Starving the relay kills the second hop and with it the whole route.
  Scene starved = s;
  starved.relay_power_dbm = -400.0;
  const double r = end_to_end_rate_bps({RouteMode::multi_hop, RouteReason::distance_rule}, starved);
  CHECK(r < 1.0);
  CHECK(r == multi_hop_rate_bps(starved));
}

TEST_CASE("equalize_rates matches the direct rate within tolerance") {
  const Scene s = reference_scene();
  const EqualizeOptions opt;
  const PowerControlResult res = equalize_rates(s, opt);

  CHECK(res.direct_rate_bps == s.radio.max_rate_bps);
  CHECK(res.multi_rate_before_bps == s.radio.max_rate_bps);
  CHECK(res.multi_rate_after_bps >= res.direct_rate_bps - opt.rate_tolerance_bps);
  CHECK(res.multi_rate_after_bps <= res.direct_rate_bps);
  CHECK_FALSE(res.target_unreachable);
  CHECK_FALSE(res.hit_search_ceiling);

  // The second hop is the bottleneck; its SNR margin over the rate target
  // puts the reduction near 79.55 dB. The bisection lands within one step.
  CHECK(res.reduction_db == Catch::Approx(79.55312214281527).margin(opt.power_step_floor_db));
  CHECK(res.reduced_power_dbm == res.original_power_dbm - res.reduction_db);
  CHECK(res.original_power_dbm == 15.0);

  // Feasibility boundary is bracketed to within the step floor.
  const double target = res.direct_rate_bps - opt.rate_tolerance_bps;
  CHECK(multi_hop_rate_bps(s, res.reduction_db) >= target);
  CHECK(multi_hop_rate_bps(s, res.reduction_db + opt.power_step_floor_db) < target);
}

TEST_CASE("equalize_rates reduction_fraction identity") {
  const PowerControlResult res = equalize_rates(reference_scene());
  CHECK(res.reduction_fraction ==
        1.0 - std::pow(10.0, (res.reduced_power_dbm - res.original_power_dbm) / 10.0));
  CHECK(res.reduction_fraction >= 0.0);
  CHECK(res.reduction_fraction < 1.0);
  // With ~79.55 dB shaved off, almost all the transmit power is gone.
  CHECK(res.reduction_fraction == Catch::Approx(0.9999999889162229).margin(1e-8));
}

TEST_CASE("equalize_rates reduces exposure proportionally") {
  const PowerControlResult res = equalize_rates(reference_scene());
  // Before: full-power two-hop exposure at the Rx (leaking Tx plus the
  // relay radiating straight at it).
  CHECK(res.exposure_before.pd_w_per_m2 == Catch::Approx(0.9709665366487589).epsilon(1e-12));
  CHECK(res.exposure_before.sar_w_per_kg == Catch::Approx(0.007195182886584064).epsilon(1e-12));
  CHECK(res.exposure_after.pd_w_per_m2 <= res.exposure_before.pd_w_per_m2);
  CHECK(res.exposure_after.sar_w_per_kg <= res.exposure_before.sar_w_per_kg);
  // Both emitters scale by the same factor, so the aggregate does too.
  const double scale = std::pow(10.0, -res.reduction_db / 10.0);
  CHECK(res.exposure_after.pd_w_per_m2 ==
        Catch::Approx(res.exposure_before.pd_w_per_m2 * scale).epsilon(1e-12));
}

TEST_CASE("equalize_rates flags an unreachable target") {
  Scene s = reference_scene();
  s.relay_power_dbm = -80.0;  // two-hop bottleneck far below the direct rate
  const PowerControlResult res = equalize_rates(s);
  CHECK(res.target_unreachable);
  CHECK(res.reduction_db == 0.0);
  CHECK(res.reduction_fraction == 0.0);
  CHECK(res.reduced_power_dbm == res.original_power_dbm);
  CHECK(res.multi_rate_after_bps == res.multi_rate_before_bps);
  CHECK(res.multi_rate_before_bps < res.direct_rate_bps);
  CHECK(res.exposure_after.pd_w_per_m2 == res.exposure_before.pd_w_per_m2);
}

TEST_CASE("equalize_rates pins a vacuous target at the search ceiling") {
  Scene s = reference_scene();
  s.tx_power_dbm = -400.0;  // direct rate effectively zero
  s.scaling = PowerScaling::relay_only;
  const EqualizeOptions opt;
  const PowerControlResult res = equalize_rates(s, opt);
  CHECK(res.hit_search_ceiling);
  CHECK(res.reduction_db == opt.max_reduction_db);
  CHECK(res.multi_rate_after_bps >= res.direct_rate_bps - opt.rate_tolerance_bps);
}

TEST_CASE("power scaling modes pick which node backs off") {
  Scene s = reference_scene();

  SECTION("relay_only matches the common reduction when hop 2 is the bottleneck") {
    Scene relay_only = s;
    relay_only.scaling = PowerScaling::relay_only;
    const PowerControlResult both = equalize_rates(s);
    const PowerControlResult relay = equalize_rates(relay_only);
    CHECK(relay.original_power_dbm == s.relay_power_dbm);
    CHECK(relay.reduction_db == Catch::Approx(both.reduction_db).margin(0.011));
  }

  SECTION("tx_only reduces further because hop 1 has more SNR margin") {
    Scene tx_only = s;
    tx_only.scaling = PowerScaling::tx_only;
    const EqualizeOptions opt;
    const PowerControlResult res = equalize_rates(tx_only, opt);
    CHECK(res.original_power_dbm == s.tx_power_dbm);
    // Hop 2 stays pinned at the cap; the binding constraint becomes hop 1,
    // whose SNR clears the rate target by about 87.29 dB.
    CHECK(res.reduction_db == Catch::Approx(87.29185876060867).margin(opt.power_step_floor_db));
    CHECK(res.reduction_db > equalize_rates(s).reduction_db);
    CHECK_FALSE(res.hit_search_ceiling);
  }
}

TEST_CASE("equalize_rates requires a relay") {
  Scene s = reference_scene();
  s.relay.reset();
  CHECK_THROWS_AS(equalize_rates(s), std::invalid_argument);
}

TEST_CASE("run_protocol on the reference scene reduces power on the relayed route") {
  const Scene s = reference_scene();
  const ProtocolOutcome out = run_protocol(Traffic::normal, s);
  CHECK(out.decision.mode == RouteMode::multi_hop);
  CHECK(out.decision.reason == RouteReason::distance_rule);
  CHECK(out.power.reduction_db > 0.0);
  CHECK(out.exposure.pd_w_per_m2 == out.power.exposure_after.pd_w_per_m2);
  CHECK(out.exposure.compliant_sar);
  CHECK(out.exposure.compliant_pd);
}

TEST_CASE("run_protocol single-hop paths transmit at full power") {
  const Scene s = reference_scene();

  const ProtocolOutcome emergency = run_protocol(Traffic::emergency, s);
  CHECK(emergency.decision.reason == RouteReason::emergency);
  CHECK(emergency.power.reduction_db == 0.0);
  CHECK(emergency.power.reduction_fraction == 0.0);
  CHECK(emergency.power.original_power_dbm == emergency.power.reduced_power_dbm);
  CHECK(emergency.power.direct_rate_bps == s.radio.max_rate_bps);

  // Exposure is the Tx alone, boresighted at the Rx.
  const ExposureSample direct = aggregate_exposure(
      s.rx, std::vector{direct_emitter(s)}, s.tissue, s.limits, s.radio, s.alpha);
  CHECK(emergency.exposure.pd_w_per_m2 == direct.pd_w_per_m2);
  CHECK(emergency.exposure.pd_w_per_m2 == Catch::Approx(0.09495198953270874).epsilon(1e-13));

  // No relay at all gives the identical result under normal traffic.
  Scene bare = s;
  bare.relay.reset();
  const ProtocolOutcome no_relay = run_protocol(Traffic::normal, bare);
  CHECK(no_relay.decision.reason == RouteReason::no_relay);
  CHECK(no_relay.exposure.pd_w_per_m2 == emergency.exposure.pd_w_per_m2);
  CHECK(no_relay.exposure.sar_w_per_kg == emergency.exposure.sar_w_per_kg);
}

TEST_CASE("run_protocol with an unreachable target keeps full power on the relayed route") {
  Scene s = reference_scene();
  s.relay_power_dbm = -80.0;
  const ProtocolOutcome out = run_protocol(Traffic::normal, s);
  CHECK(out.decision.mode == RouteMode::multi_hop);
  CHECK(out.power.target_unreachable);
  CHECK(out.power.reduction_db == 0.0);
  CHECK(out.exposure.pd_w_per_m2 == out.power.exposure_before.pd_w_per_m2);
}
