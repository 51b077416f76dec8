#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv_io.hpp"
#include "protocol.hpp"
#include "sweep.hpp"

namespace wbansim {

enum class Command { scenario, single, protocol_demo };

struct RunOptions {
  std::optional<SweepKind> scenario_kind;  // positional override for `scenario`
  std::optional<std::string> output_dir;   // --out
  bool no_protocol = false;                // --no-protocol
  bool fail_on_violation = false;          // --fail-on-violation
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 1;
inline constexpr int exit_runtime_error = 2;
inline constexpr int exit_compliance_failure = 3;

inline std::string format_report(const ComplianceReport& rep, const ExposureLimits& limits) {
  std::ostringstream out;
  out << "exposure compliance report\n";
  out << "samples: " << rep.sample_count << "\n";
  if (rep.empty) {
    out << "no samples evaluated\n";
    return out.str();
  }
  out << "pd  [W/m2]: min=" << format_double(rep.pd_min) << " max=" << format_double(rep.pd_max)
      << " mean=" << format_double(rep.pd_mean) << "\n";
  out << "sar [W/kg]: min=" << format_double(rep.sar_min) << " max=" << format_double(rep.sar_max)
      << " mean=" << format_double(rep.sar_mean) << "\n";
  out << "violations (strictly above the limit):\n";
  const auto line = [&](const char* label, double limit, std::size_t count, double fraction) {
    out << "  " << label << " > " << format_double(limit) << ": " << count << " ("
        << format_double(fraction) << ")\n";
  };
  line("sar, FCC head (1 g)     ", limits.sar_head_fcc_w_per_kg, rep.sar_fcc_violations,
       rep.sar_fcc_violation_fraction);
  line("sar, ICNIRP head (10 g) ", limits.sar_head_icnirp_w_per_kg, rep.sar_icnirp_violations,
       rep.sar_icnirp_violation_fraction);
  line("sar, limbs              ", limits.sar_limb_w_per_kg, rep.sar_limb_violations,
       rep.sar_limb_violation_fraction);
  line("pd, reference line      ", limits.pd_limit_w_per_m2, rep.pd_violations,
       rep.pd_violation_fraction);
  if (rep.worst_pd_cell) {
    out << "worst pd cell: (" << rep.worst_pd_cell->x << "," << rep.worst_pd_cell->y << ")\n";
  }
  if (rep.worst_sar_cell) {
    out << "worst sar cell: (" << rep.worst_sar_cell->x << "," << rep.worst_sar_cell->y << ")\n";
  }
  out << "assumed (non-measured) defaults in play unless overridden: ";
  const auto& keys = RunConfig::assumed_default_keys();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out << ", ";
    out << keys[i];
  }
  out << "\n";
  return out.str();
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string mode_name(RouteMode m) {
  return m == RouteMode::single_hop ? "single_hop" : "multi_hop";
}

inline std::string reason_name(RouteReason r) {
  switch (r) {
    case RouteReason::distance_rule: return "distance_rule";
    case RouteReason::emergency: return "emergency";
    case RouteReason::no_relay: return "no_relay";
  }
  return "?";
}

/// Key/value block shared by the `single` and `protocol-demo` summaries.
inline void append_power_summary(std::ostringstream& out, const PowerControlResult& p) {
  out << "direct_rate_bps=" << format_double(p.direct_rate_bps) << "\n";
  out << "multi_rate_before_bps=" << format_double(p.multi_rate_before_bps) << "\n";
  out << "multi_rate_after_bps=" << format_double(p.multi_rate_after_bps) << "\n";
  out << "original_power_dbm=" << format_double(p.original_power_dbm) << "\n";
  out << "reduced_power_dbm=" << format_double(p.reduced_power_dbm) << "\n";
  out << "reduction_db=" << format_double(p.reduction_db) << "\n";
  out << "reduction_fraction=" << format_double(p.reduction_fraction) << "\n";
  out << "target_unreachable=" << (p.target_unreachable ? 1 : 0) << "\n";
  out << "hit_search_ceiling=" << (p.hit_search_ceiling ? 1 : 0) << "\n";
}

inline void append_exposure_summary(std::ostringstream& out, const char* prefix,
                                    const ExposureSample& s) {
  out << prefix << "pd_w_per_m2=" << format_double(s.pd_w_per_m2) << "\n";
  out << prefix << "sar_w_per_kg=" << format_double(s.sar_w_per_kg) << "\n";
  out << prefix << "compliant_sar=" << (s.compliant_sar ? 1 : 0) << "\n";
  out << prefix << "compliant_pd=" << (s.compliant_pd ? 1 : 0) << "\n";
}

inline void append_assumed_defaults(std::ostringstream& out) {
  out << "assumed_defaults=";
  const auto& keys = RunConfig::assumed_default_keys();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out << ",";
    out << keys[i];
  }
  out << "\n";
}

}  // namespace detail

/// Execute one command against a validated config, writing all outputs
/// under the configured directory.
///
/// Exit codes: 0 success, 1 config/validation error, 2 runtime or I/O
/// error, 3 compliance gate tripped (--fail-on-violation with at least one
/// SAR limit violation; the PD reference line is advisory and never gates).
inline int run(RunConfig cfg, Command cmd, const RunOptions& opt = {}) {
  Scene scene;
  SweepScenario scenario;
  try {
    if (opt.scenario_kind) cfg.scenario = *opt.scenario_kind;
    if (opt.output_dir) cfg.output_dir = *opt.output_dir;
    if (opt.no_protocol) cfg.protocol_enabled = false;
    cfg.validate();
    scene = cfg.make_scene();
    scene.validate();
    if (cmd == Command::scenario) {
      scenario = cfg.make_scenario();
      scenario.validate();
    }
    if (cmd == Command::protocol_demo && !scene.relay) {
      throw ConfigError("key 'relay': protocol-demo needs a relay position, not 'none'");
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  }

  try {
    const std::filesystem::path out_dir(cfg.output_dir);
    std::filesystem::create_directories(out_dir);

    ComplianceReport report;
    std::ostringstream summary;

    if (cmd == Command::scenario) {
      const SweepResult result = run_sweep(scenario);

      std::ostringstream pd_csv, sar_csv;
      write_heatmap_csv(pd_csv, result.pd);
      write_heatmap_csv(sar_csv, result.sar);
      detail::write_file(out_dir / "pd.csv", pd_csv.str());
      detail::write_file(out_dir / "sar.csv", sar_csv.str());

      const EmpiricalCdf pd_cdf = empirical_cdf(unmasked_values(result.pd), cfg.limits.pd_limit_w_per_m2);
      const EmpiricalCdf sar_cdf =
          empirical_cdf(unmasked_values(result.sar), cfg.limits.sar_head_fcc_w_per_kg);
      std::ostringstream pd_cdf_csv, sar_cdf_csv;
      write_cdf_csv(pd_cdf_csv, pd_cdf, HeatmapMetric::pd);
      write_cdf_csv(sar_cdf_csv, sar_cdf, HeatmapMetric::sar);
      detail::write_file(out_dir / "cdf_pd.csv", pd_cdf_csv.str());
      detail::write_file(out_dir / "cdf_sar.csv", sar_cdf_csv.str());

      // Rebuild per-cell samples (row-major, same order as the sweep) so
      // the report can name the worst cells.
      std::vector<ExposureSample> samples;
      std::vector<NodePosition> positions;
      for (int y = 1; y <= cfg.grid.width_cm; ++y) {
        for (int x = 1; x <= cfg.grid.length_cm; ++x) {
          const NodePosition p{x, y};
          if (result.pd.is_masked(p) || std::isnan(result.pd.at(p))) continue;
          ExposureSample s;
          s.pd_w_per_m2 = result.pd.at(p);
          s.sar_w_per_kg = result.sar.at(p);
          s.compliant_sar = s.sar_w_per_kg <= cfg.limits.sar_head_fcc_w_per_kg;
          s.compliant_pd = s.pd_w_per_m2 <= cfg.limits.pd_limit_w_per_m2;
          samples.push_back(s);
          positions.push_back(p);
        }
      }
      report = compliance_report(samples, cfg.limits, positions);

      const auto [pd_peak_cell, pd_peak] = argmax_cell(result.pd);
      const auto [sar_peak_cell, sar_peak] = argmax_cell(result.sar);

      summary << "command=scenario\n";
      summary << "scenario=" << to_string(cfg.scenario) << "\n";
      summary << "protocol=" << (cfg.protocol_enabled ? "on" : "off") << "\n";
      summary << "grid=" << cfg.grid.length_cm << "x" << cfg.grid.width_cm << "\n";
      summary << "cells_evaluated=" << samples.size() << "\n";
      summary << "argmax_pd_cell=" << pd_peak_cell.x << "," << pd_peak_cell.y << "\n";
      summary << "argmax_pd_w_per_m2=" << format_double(pd_peak) << "\n";
      summary << "argmax_sar_cell=" << sar_peak_cell.x << "," << sar_peak_cell.y << "\n";
      summary << "argmax_sar_w_per_kg=" << format_double(sar_peak) << "\n";
      summary << "pd_mean_w_per_m2=" << format_double(report.pd_mean) << "\n";
      summary << "sar_mean_w_per_kg=" << format_double(report.sar_mean) << "\n";
      summary << "sar_fcc_violation_fraction=" << format_double(report.sar_fcc_violation_fraction)
              << "\n";
      summary << "pd_violation_fraction=" << format_double(report.pd_violation_fraction) << "\n";
      detail::append_assumed_defaults(summary);
    } else {
      // single / protocol-demo evaluate one scene at the Rx.
      ProtocolOutcome outcome;
      if (cmd == Command::single) {
        const EqualizeOptions eq = cfg.equalize;
        if (cfg.protocol_enabled) {
          outcome = run_protocol(cfg.traffic, scene, eq);
        } else {
          // Protocol off: route per the distance rule, no power reduction.
          outcome.decision = choose_route(cfg.traffic, scene);
          const std::vector<Emitter> emitters =
              outcome.decision.mode == RouteMode::multi_hop
                  ? multi_hop_emitters(scene, 0.0)
                  : std::vector<Emitter>{direct_emitter(scene)};
          outcome.exposure = detail::exposure_at_rx(scene, emitters);
          outcome.power.original_power_dbm = scene.tx_power_dbm;
          outcome.power.reduced_power_dbm = scene.tx_power_dbm;
          outcome.power.direct_rate_bps = direct_rate_bps(scene);
          outcome.power.multi_rate_before_bps = end_to_end_rate_bps(outcome.decision, scene);
          outcome.power.multi_rate_after_bps = outcome.power.multi_rate_before_bps;
          outcome.power.exposure_before = outcome.exposure;
          outcome.power.exposure_after = outcome.exposure;
        }
        summary << "command=single\n";
        summary << "traffic=" << (cfg.traffic == Traffic::emergency ? "emergency" : "normal") << "\n";
      } else {
        // The demo exercises the rate equalizer directly, whatever the
        // distance rule would have picked.
        outcome.decision = RouteDecision{RouteMode::multi_hop, RouteReason::distance_rule};
        outcome.power = equalize_rates(scene, cfg.equalize);
        outcome.exposure = outcome.power.exposure_after;
        summary << "command=protocol-demo\n";
      }

      summary << "mode=" << detail::mode_name(outcome.decision.mode) << "\n";
      summary << "reason=" << detail::reason_name(outcome.decision.reason) << "\n";
      detail::append_power_summary(summary, outcome.power);
      detail::append_exposure_summary(summary, "before_", outcome.power.exposure_before);
      detail::append_exposure_summary(summary, "after_", outcome.power.exposure_after);
      detail::append_assumed_defaults(summary);

      const std::vector<ExposureSample> samples{outcome.exposure};
      const std::vector<NodePosition> positions{scene.rx};
      report = compliance_report(samples, cfg.limits, positions);
    }

    detail::write_file(out_dir / "report.txt", format_report(report, cfg.limits));
    detail::write_file(out_dir / "summary.txt", summary.str());

    if (opt.fail_on_violation && report.any_sar_violation()) {
      std::cerr << "compliance gate: " << report.sar_fcc_violations
                << " cell(s) above the FCC SAR limit\n";
      return exit_compliance_failure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_runtime_error;
  }
  return exit_ok;
}

}  // namespace wbansim
