#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exposure.hpp"
#include "geometry.hpp"
#include "numfmt.hpp"
#include "propagation.hpp"
#include "protocol.hpp"
#include "sweep.hpp"

namespace wbansim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full run description, mirroring the `key = value` config file one field
/// per key. Beamwidth, attenuation ceiling, and element separation are
/// shared across the three antennas; only the peak gains differ per role.
struct RunConfig {
  RadioConfig radio{};
  GridSpec grid{};
  TissueProperties tissue{};
  ExposureLimits limits{};

  double tx_gain_dbi = 1.7;
  double relay_gain_dbi = 8.0;
  double rx_gain_dbi = 1.7;
  double beamwidth_3db_deg = 93.0;
  double max_attenuation_db = 30.0;
  double element_separation_wl = 0.5;

  double tx_power_dbm = 15.0;
  double relay_power_dbm = 15.0;

  NodePosition tx{1, 1};
  std::optional<NodePosition> relay{NodePosition{5, 6}};
  NodePosition rx{15, 15};
  Traffic traffic = Traffic::normal;
  double alpha = 2.0;
  PowerScaling power_scaling = PowerScaling::both;

  SweepKind scenario = SweepKind::relay_sweep;
  bool protocol_enabled = true;

  EqualizeOptions equalize{};

  std::string output_dir = "out";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  /// Defaults that are modeling assumptions rather than measured device or
  /// tissue parameters; they surface in reports so nobody mistakes them
  /// for calibrated values.
  static const std::vector<std::string>& assumed_default_keys() {
    static const std::vector<std::string> keys = {
        "mass_density_kg_per_m3",
        "pd_limit_w_per_m2",
        "alpha",
        "element_separation_wl",
    };
    return keys;
  }

  AntennaSpec make_antenna(double gain_dbi) const {
    return AntennaSpec{gain_dbi, beamwidth_3db_deg, max_attenuation_db, element_separation_wl};
  }

  Scene make_scene() const {
    Scene s;
    s.tx = tx;
    s.relay = relay;
    s.rx = rx;
    s.tx_power_dbm = tx_power_dbm;
    s.relay_power_dbm = relay_power_dbm;
    s.tx_antenna = make_antenna(tx_gain_dbi);
    s.relay_antenna = make_antenna(relay_gain_dbi);
    s.rx_antenna = make_antenna(rx_gain_dbi);
    s.radio = radio;
    s.tissue = tissue;
    s.limits = limits;
    s.alpha = alpha;
    s.scaling = power_scaling;
    return s;
  }

  SweepScenario make_scenario() const {
    SweepScenario sc;
    sc.kind = scenario;
    sc.grid = grid;
    sc.protocol_enabled = protocol_enabled;
    sc.base_scene = make_scene();
    sc.equalize = equalize;
    switch (scenario) {
      case SweepKind::relay_sweep:
        sc.fixed_positions = {{Role::tx, tx}, {Role::rx, rx}};
        break;
      case SweepKind::tx_sweep:
        if (!relay) throw ConfigError("key 'relay': tx_sweep needs a relay position, not 'none'");
        sc.fixed_positions = {{Role::relay, *relay}, {Role::rx, rx}};
        break;
      case SweepKind::rx_sweep:
        if (!relay) throw ConfigError("key 'relay': rx_sweep needs a relay position, not 'none'");
        sc.fixed_positions = {{Role::tx, tx}, {Role::relay, *relay}};
        break;
    }
    return sc;
  }

  void validate() const {
    const auto positive = [](const char* key, double v) {
      if (!(v > 0.0)) throw ConfigError(std::string("key '") + key + "': must be positive");
    };
    positive("frequency_ghz", radio.frequency_ghz);
    positive("bandwidth_hz", radio.bandwidth_hz);
    positive("temperature_k", radio.temperature_k);
    positive("max_rate_bps", radio.max_rate_bps);

    if (grid.length_cm < 2) throw ConfigError("key 'grid_length_cm': must be >= 2");
    if (grid.width_cm < 2) throw ConfigError("key 'grid_width_cm': must be >= 2");
    if (grid.cell_size_cm < 1) throw ConfigError("key 'cell_size_cm': must be >= 1");

    positive("skin_permittivity", tissue.permittivity);
    positive("skin_conductivity_s_per_m", tissue.conductivity_s_per_m);
    positive("penetration_depth_m", tissue.penetration_depth_m);
    positive("mass_density_kg_per_m3", tissue.mass_density_kg_per_m3);

    positive("sar_limit_fcc_w_per_kg", limits.sar_head_fcc_w_per_kg);
    positive("sar_limit_icnirp_w_per_kg", limits.sar_head_icnirp_w_per_kg);
    positive("sar_limit_limb_w_per_kg", limits.sar_limb_w_per_kg);
    positive("pd_limit_w_per_m2", limits.pd_limit_w_per_m2);

    positive("beamwidth_3db_deg", beamwidth_3db_deg);
    positive("max_attenuation_db", max_attenuation_db);
    positive("alpha", alpha);

    if (equalize.rate_tolerance_bps < 0.0) {
      throw ConfigError("key 'rate_tolerance_bps': must be non-negative");
    }
    positive("power_step_floor_db", equalize.power_step_floor_db);
    positive("max_reduction_db", equalize.max_reduction_db);

    const auto check_on_grid = [&](const char* key, NodePosition p) {
      if (!on_grid(p, grid)) {
        throw ConfigError(std::string("key '") + key + "': position (" + std::to_string(p.x) +
                          "," + std::to_string(p.y) + ") is off the " +
                          std::to_string(grid.length_cm) + "x" + std::to_string(grid.width_cm) +
                          " grid");
      }
    };
    check_on_grid("tx", tx);
    check_on_grid("rx", rx);
    if (relay) check_on_grid("relay", *relay);

    if (tx == rx) throw ConfigError("keys 'tx'/'rx': positions must be distinct");
    if (relay && (*relay == tx || *relay == rx)) {
      throw ConfigError("key 'relay': must be distinct from tx and rx");
    }

    if (output_dir.empty()) throw ConfigError("key 'output_dir': must not be empty");
  }
};

namespace detail {

inline std::string format_position(const NodePosition& p) {
  return std::to_string(p.x) + "," + std::to_string(p.y);
}

inline NodePosition parse_position(const std::string& key, std::string_view value) {
  const auto comma = value.find(',');
  NodePosition p;
  if (comma == std::string_view::npos || !parse_int(value.substr(0, comma), p.x) ||
      !parse_int(value.substr(comma + 1), p.y)) {
    throw ConfigError("key '" + key + "': expected a position like '5,6'");
  }
  return p;
}

}  // namespace detail

/// Parse the `key = value` config format: one assignment per line, `#`
/// starts a comment, blank lines ignored. Every key must be known and may
/// appear at most once; anything else is rejected with the offending key
/// (or line) named. The parsed config is range-checked before returning.
inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;

  std::istringstream lines(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (value.empty()) throw ConfigError("key '" + key + "': empty value");
    if (!seen.insert(key).second) throw ConfigError("key '" + key + "': assigned twice");

    const auto as_double = [&](double& out) {
      if (!parse_double(value, out)) throw ConfigError("key '" + key + "': '" + value + "' is not a number");
    };
    const auto as_int = [&](int& out) {
      if (!parse_int(value, out)) throw ConfigError("key '" + key + "': '" + value + "' is not an integer");
    };

    if (key == "frequency_ghz") as_double(cfg.radio.frequency_ghz);
    else if (key == "bandwidth_hz") as_double(cfg.radio.bandwidth_hz);
    else if (key == "temperature_k") as_double(cfg.radio.temperature_k);
    else if (key == "noise_figure_db") as_double(cfg.radio.noise_figure_db);
    else if (key == "max_rate_bps") as_double(cfg.radio.max_rate_bps);
    else if (key == "grid_length_cm") as_int(cfg.grid.length_cm);
    else if (key == "grid_width_cm") as_int(cfg.grid.width_cm);
    else if (key == "cell_size_cm") as_int(cfg.grid.cell_size_cm);
    else if (key == "skin_permittivity") as_double(cfg.tissue.permittivity);
    else if (key == "skin_conductivity_s_per_m") as_double(cfg.tissue.conductivity_s_per_m);
    else if (key == "penetration_depth_m") as_double(cfg.tissue.penetration_depth_m);
    else if (key == "mass_density_kg_per_m3") as_double(cfg.tissue.mass_density_kg_per_m3);
    else if (key == "sar_limit_fcc_w_per_kg") as_double(cfg.limits.sar_head_fcc_w_per_kg);
    else if (key == "sar_limit_icnirp_w_per_kg") as_double(cfg.limits.sar_head_icnirp_w_per_kg);
    else if (key == "sar_limit_limb_w_per_kg") as_double(cfg.limits.sar_limb_w_per_kg);
    else if (key == "pd_limit_w_per_m2") as_double(cfg.limits.pd_limit_w_per_m2);
    else if (key == "tx_gain_dbi") as_double(cfg.tx_gain_dbi);
    else if (key == "relay_gain_dbi") as_double(cfg.relay_gain_dbi);
    else if (key == "rx_gain_dbi") as_double(cfg.rx_gain_dbi);
    else if (key == "beamwidth_3db_deg") as_double(cfg.beamwidth_3db_deg);
    else if (key == "max_attenuation_db") as_double(cfg.max_attenuation_db);
    else if (key == "element_separation_wl") as_double(cfg.element_separation_wl);
    else if (key == "tx_power_dbm") as_double(cfg.tx_power_dbm);
    else if (key == "relay_power_dbm") as_double(cfg.relay_power_dbm);
    else if (key == "tx") cfg.tx = detail::parse_position(key, value);
    else if (key == "rx") cfg.rx = detail::parse_position(key, value);
    else if (key == "relay") {
      if (value == "none") cfg.relay.reset();
      else cfg.relay = detail::parse_position(key, value);
    } else if (key == "traffic") {
      if (value == "normal") cfg.traffic = Traffic::normal;
      else if (value == "emergency") cfg.traffic = Traffic::emergency;
      else throw ConfigError("key 'traffic': expected 'normal' or 'emergency'");
    } else if (key == "alpha") as_double(cfg.alpha);
    else if (key == "power_scaling") {
      if (value == "both") cfg.power_scaling = PowerScaling::both;
      else if (value == "tx_only") cfg.power_scaling = PowerScaling::tx_only;
      else if (value == "relay_only") cfg.power_scaling = PowerScaling::relay_only;
      else throw ConfigError("key 'power_scaling': expected 'both', 'tx_only', or 'relay_only'");
    } else if (key == "scenario") {
      if (value == "relay_sweep") cfg.scenario = SweepKind::relay_sweep;
      else if (value == "tx_sweep") cfg.scenario = SweepKind::tx_sweep;
      else if (value == "rx_sweep") cfg.scenario = SweepKind::rx_sweep;
      else throw ConfigError("key 'scenario': expected 'relay_sweep', 'tx_sweep', or 'rx_sweep'");
    } else if (key == "protocol") {
      if (value == "on") cfg.protocol_enabled = true;
      else if (value == "off") cfg.protocol_enabled = false;
      else throw ConfigError("key 'protocol': expected 'on' or 'off'");
    } else if (key == "rate_tolerance_bps") as_double(cfg.equalize.rate_tolerance_bps);
    else if (key == "power_step_floor_db") as_double(cfg.equalize.power_step_floor_db);
    else if (key == "max_reduction_db") as_double(cfg.equalize.max_reduction_db);
    else if (key == "output_dir") cfg.output_dir = value;
    else throw ConfigError("unknown key '" + key + "'");
  }

  cfg.validate();
  return cfg;
}

/// Canonical text form. parse_config(serialize_config(cfg)) reproduces cfg
/// exactly, including every double bit for bit.
inline std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  const auto put = [&](const char* key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  const auto put_d = [&](const char* key, double v) { put(key, format_double(v)); };
  const auto put_i = [&](const char* key, int v) { put(key, std::to_string(v)); };

  out << "# radio\n";
  put_d("frequency_ghz", cfg.radio.frequency_ghz);
  put_d("bandwidth_hz", cfg.radio.bandwidth_hz);
  put_d("temperature_k", cfg.radio.temperature_k);
  put_d("noise_figure_db", cfg.radio.noise_figure_db);
  put_d("max_rate_bps", cfg.radio.max_rate_bps);
  out << "\n# grid\n";
  put_i("grid_length_cm", cfg.grid.length_cm);
  put_i("grid_width_cm", cfg.grid.width_cm);
  put_i("cell_size_cm", cfg.grid.cell_size_cm);
  out << "\n# tissue\n";
  put_d("skin_permittivity", cfg.tissue.permittivity);
  put_d("skin_conductivity_s_per_m", cfg.tissue.conductivity_s_per_m);
  put_d("penetration_depth_m", cfg.tissue.penetration_depth_m);
  put_d("mass_density_kg_per_m3", cfg.tissue.mass_density_kg_per_m3);
  out << "\n# exposure limits\n";
  put_d("sar_limit_fcc_w_per_kg", cfg.limits.sar_head_fcc_w_per_kg);
  put_d("sar_limit_icnirp_w_per_kg", cfg.limits.sar_head_icnirp_w_per_kg);
  put_d("sar_limit_limb_w_per_kg", cfg.limits.sar_limb_w_per_kg);
  put_d("pd_limit_w_per_m2", cfg.limits.pd_limit_w_per_m2);
  out << "\n# antennas\n";
  put_d("tx_gain_dbi", cfg.tx_gain_dbi);
  put_d("relay_gain_dbi", cfg.relay_gain_dbi);
  put_d("rx_gain_dbi", cfg.rx_gain_dbi);
  put_d("beamwidth_3db_deg", cfg.beamwidth_3db_deg);
  put_d("max_attenuation_db", cfg.max_attenuation_db);
  put_d("element_separation_wl", cfg.element_separation_wl);
  out << "\n# transmit powers\n";
  put_d("tx_power_dbm", cfg.tx_power_dbm);
  put_d("relay_power_dbm", cfg.relay_power_dbm);
  out << "\n# scene\n";
  put("tx", detail::format_position(cfg.tx));
  put("relay", cfg.relay ? detail::format_position(*cfg.relay) : "none");
  put("rx", detail::format_position(cfg.rx));
  put("traffic", cfg.traffic == Traffic::emergency ? "emergency" : "normal");
  put_d("alpha", cfg.alpha);
  switch (cfg.power_scaling) {
    case PowerScaling::both: put("power_scaling", "both"); break;
    case PowerScaling::tx_only: put("power_scaling", "tx_only"); break;
    case PowerScaling::relay_only: put("power_scaling", "relay_only"); break;
  }
  out << "\n# scenario\n";
  put("scenario", to_string(cfg.scenario));
  put("protocol", cfg.protocol_enabled ? "on" : "off");
  out << "\n# power-control search\n";
  put_d("rate_tolerance_bps", cfg.equalize.rate_tolerance_bps);
  put_d("power_step_floor_db", cfg.equalize.power_step_floor_db);
  put_d("max_reduction_db", cfg.equalize.max_reduction_db);
  out << "\n# output\n";
  put("output_dir", cfg.output_dir);
  return out.str();
}

}  // namespace wbansim
