#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "propagation.hpp"

namespace wbansim {

inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m

struct TissueProperties {
  double permittivity = 39.2;            // relative, real part
  double conductivity_s_per_m = 1.8;
  double penetration_depth_m = 0.113;
  double mass_density_kg_per_m3 = 1100.0;  // assumed default, configurable

  friend bool operator==(const TissueProperties&, const TissueProperties&) = default;

  void validate() const {
    if (permittivity <= 0.0) throw std::invalid_argument("TissueProperties: permittivity must be positive");
    if (conductivity_s_per_m <= 0.0) throw std::invalid_argument("TissueProperties: conductivity_s_per_m must be positive");
    if (penetration_depth_m <= 0.0) throw std::invalid_argument("TissueProperties: penetration_depth_m must be positive");
    if (mass_density_kg_per_m3 <= 0.0) throw std::invalid_argument("TissueProperties: mass_density_kg_per_m3 must be positive");
  }
};

struct ExposureLimits {
  double sar_head_fcc_w_per_kg = 1.6;     // 1 g average
  double sar_head_icnirp_w_per_kg = 2.0;  // 10 g average
  double sar_limb_w_per_kg = 4.0;
  double pd_limit_w_per_m2 = 10.0;        // reference line for PD plots/reports

  friend bool operator==(const ExposureLimits&, const ExposureLimits&) = default;

  void validate() const {
    if (sar_head_fcc_w_per_kg <= 0.0) throw std::invalid_argument("ExposureLimits: sar_head_fcc_w_per_kg must be positive");
    if (sar_head_icnirp_w_per_kg <= 0.0) throw std::invalid_argument("ExposureLimits: sar_head_icnirp_w_per_kg must be positive");
    if (sar_limb_w_per_kg <= 0.0) throw std::invalid_argument("ExposureLimits: sar_limb_w_per_kg must be positive");
    if (pd_limit_w_per_m2 <= 0.0) throw std::invalid_argument("ExposureLimits: pd_limit_w_per_m2 must be positive");
  }
};

/// A radiating node: position, transmit power, antenna, and the point its
/// boresight is steered at. The boresight target must differ from the
/// position; this is checked where the pattern is evaluated.
struct Emitter {
  NodePosition position{};
  double tx_power_dbm = 15.0;
  AntennaSpec antenna{};
  NodePosition boresight_target{};
};

/// Exposure at one evaluation point. Compliance flags are judged against
/// the strictest SAR limit (FCC head) and the PD reference line.
struct ExposureSample {
  double pd_w_per_m2 = 0.0;
  double sar_w_per_kg = 0.0;
  bool compliant_sar = true;
  bool compliant_pd = true;
};

/// Power density Pt*Gt / (4 pi d^alpha) in W/m^2, with d in meters.
/// alpha = 2 is free space; larger values model lossier spreading.
inline double power_density(double tx_power_w, double gain_linear, double d_m, double alpha) {
  if (d_m <= 0.0) throw std::domain_error("power_density: distance must be positive");
  if (tx_power_w < 0.0) throw std::invalid_argument("power_density: tx_power_w must be non-negative");
  if (gain_linear < 0.0) throw std::invalid_argument("power_density: gain_linear must be non-negative");
  if (alpha <= 0.0) throw std::invalid_argument("power_density: alpha must be positive");
  return tx_power_w * gain_linear / (4.0 * std::numbers::pi * std::pow(d_m, alpha));
}

/// Normal-incidence reflection magnitude at the air/skin boundary:
/// |(1 - sqrt(eps)) / (1 + sqrt(eps))| with eps = eps' - j sigma/(omega eps0).
inline double reflection_coefficient(const TissueProperties& t, double f_ghz) {
  if (f_ghz <= 0.0) throw std::domain_error("reflection_coefficient: frequency must be positive");
  t.validate();
  const double omega = 2.0 * std::numbers::pi * f_ghz * 1e9;
  const std::complex<double> eps(t.permittivity, -t.conductivity_s_per_m / (omega * vacuum_permittivity));
  const std::complex<double> root = std::sqrt(eps);
  return std::abs((1.0 - root) / (1.0 + root));
}

/// Point SAR just inside the skin: 2 PD (1 - R^2) / (delta rho).
/// The transmitted fraction enters through R, the decay profile through the
/// penetration depth delta.
inline double sar_from_pd(double pd_w_per_m2, double reflection, const TissueProperties& t) {
  return 2.0 * pd_w_per_m2 * (1.0 - reflection * reflection) /
         (t.penetration_depth_m * t.mass_density_kg_per_m3);
}

/// Effective linear gain of an emitter toward an arbitrary point. The
/// geometry is in-plane, so elevation stays at boresight (90 deg) and only
/// the azimuth offset between the boresight direction and the point matters.
inline double leaked_gain(const Emitter& e, NodePosition toward) {
  const double phi = angle_between(e.position, e.boresight_target, toward);
  return db_to_linear(e.antenna.gain_dbi - combined_attenuation_db(90.0, phi, e.antenna));
}

/// Sum the power density contributions of all emitters at one point, then
/// convert the total to point SAR. Addition order follows the emitter span,
/// left to right, so totals are reproducible bit for bit.
inline ExposureSample aggregate_exposure(NodePosition point, std::span<const Emitter> emitters,
                                         const TissueProperties& tissue,
                                         const ExposureLimits& limits, const RadioConfig& radio,
                                         double alpha) {
  double pd = 0.0;
  for (std::size_t i = 0; i < emitters.size(); ++i) {
    const Emitter& e = emitters[i];
    if (e.position == point) {
      throw std::domain_error("aggregate_exposure: emitter " + std::to_string(i) +
                              " is co-located with the evaluation point");
    }
    const double d = distance(e.position, point);
    pd += power_density(dbm_to_watts(e.tx_power_dbm), leaked_gain(e, point), d, alpha);
  }
  const double r = reflection_coefficient(tissue, radio.frequency_ghz);
  const double sar = sar_from_pd(pd, r, tissue);
  ExposureSample s;
  s.pd_w_per_m2 = pd;
  s.sar_w_per_kg = sar;
  s.compliant_sar = sar <= limits.sar_head_fcc_w_per_kg;
  s.compliant_pd = pd <= limits.pd_limit_w_per_m2;
  return s;
}

/// Aggregate statistics over a set of exposure samples. A violation is a
/// value strictly above its limit; values exactly at a limit comply.
struct ComplianceReport {
  std::size_t sample_count = 0;
  bool empty = true;

  std::size_t sar_fcc_violations = 0;
  std::size_t sar_icnirp_violations = 0;
  std::size_t sar_limb_violations = 0;
  std::size_t pd_violations = 0;

  double sar_fcc_violation_fraction = 0.0;
  double sar_icnirp_violation_fraction = 0.0;
  double sar_limb_violation_fraction = 0.0;
  double pd_violation_fraction = 0.0;

  double pd_min = 0.0, pd_max = 0.0, pd_mean = 0.0;
  double sar_min = 0.0, sar_max = 0.0, sar_mean = 0.0;

  // Populated when sample positions are supplied; first cell wins ties.
  std::optional<NodePosition> worst_pd_cell;
  std::optional<NodePosition> worst_sar_cell;

  bool any_sar_violation() const {
    return sar_fcc_violations > 0 || sar_icnirp_violations > 0 || sar_limb_violations > 0;
  }
};

inline ComplianceReport compliance_report(std::span<const ExposureSample> samples,
                                          const ExposureLimits& limits,
                                          std::span<const NodePosition> positions = {}) {
  limits.validate();
  if (!positions.empty() && positions.size() != samples.size()) {
    throw std::invalid_argument("compliance_report: positions must be empty or match samples");
  }
  ComplianceReport rep;
  rep.sample_count = samples.size();
  rep.empty = samples.empty();
  if (rep.empty) {
    return rep;
  }

  double pd_sum = 0.0;
  double sar_sum = 0.0;
  std::size_t worst_pd = 0;
  std::size_t worst_sar = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ExposureSample& s = samples[i];
    pd_sum += s.pd_w_per_m2;
    sar_sum += s.sar_w_per_kg;
    if (s.sar_w_per_kg > limits.sar_head_fcc_w_per_kg) ++rep.sar_fcc_violations;
    if (s.sar_w_per_kg > limits.sar_head_icnirp_w_per_kg) ++rep.sar_icnirp_violations;
    if (s.sar_w_per_kg > limits.sar_limb_w_per_kg) ++rep.sar_limb_violations;
    if (s.pd_w_per_m2 > limits.pd_limit_w_per_m2) ++rep.pd_violations;
    if (i == 0 || s.pd_w_per_m2 > samples[worst_pd].pd_w_per_m2) worst_pd = i;
    if (i == 0 || s.sar_w_per_kg > samples[worst_sar].sar_w_per_kg) worst_sar = i;
  }

  const double n = static_cast<double>(samples.size());
  rep.sar_fcc_violation_fraction = static_cast<double>(rep.sar_fcc_violations) / n;
  rep.sar_icnirp_violation_fraction = static_cast<double>(rep.sar_icnirp_violations) / n;
  rep.sar_limb_violation_fraction = static_cast<double>(rep.sar_limb_violations) / n;
  rep.pd_violation_fraction = static_cast<double>(rep.pd_violations) / n;

  rep.pd_min = samples[0].pd_w_per_m2;
  rep.pd_max = samples[0].pd_w_per_m2;
  rep.sar_min = samples[0].sar_w_per_kg;
  rep.sar_max = samples[0].sar_w_per_kg;
  for (const ExposureSample& s : samples) {
    rep.pd_min = std::min(rep.pd_min, s.pd_w_per_m2);
    rep.pd_max = std::max(rep.pd_max, s.pd_w_per_m2);
    rep.sar_min = std::min(rep.sar_min, s.sar_w_per_kg);
    rep.sar_max = std::max(rep.sar_max, s.sar_w_per_kg);
  }
  rep.pd_mean = pd_sum / n;
  rep.sar_mean = sar_sum / n;

  if (!positions.empty()) {
    rep.worst_pd_cell = positions[worst_pd];
    rep.worst_sar_cell = positions[worst_sar];
  }
  return rep;
}

}  // namespace wbansim
