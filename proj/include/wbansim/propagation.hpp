#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace wbansim {

inline constexpr double k_boltzmann = 1.380649e-23;  // J/K

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

struct RadioConfig {
  double frequency_ghz = 2.4;
  double bandwidth_hz = 4e6;
  double temperature_k = 295.0;
  double noise_figure_db = 19.2;
  double max_rate_bps = 10e6;

  friend bool operator==(const RadioConfig&, const RadioConfig&) = default;

  void validate() const {
    if (frequency_ghz <= 0.0) throw std::invalid_argument("RadioConfig: frequency_ghz must be positive");
    if (bandwidth_hz <= 0.0) throw std::invalid_argument("RadioConfig: bandwidth_hz must be positive");
    if (temperature_k <= 0.0) throw std::invalid_argument("RadioConfig: temperature_k must be positive");
    if (max_rate_bps <= 0.0) throw std::invalid_argument("RadioConfig: max_rate_bps must be positive");
  }
};

/// Directional patch antenna described by its peak gain, a shared 3 dB
/// beamwidth for both principal planes, an attenuation ceiling (front-to-back
/// ratio), and the element separation of the two-element array in
/// wavelengths.
struct AntennaSpec {
  double gain_dbi = 1.7;
  double beamwidth_3db_deg = 93.0;
  double max_attenuation_db = 30.0;
  double element_separation_wl = 0.5;

  friend bool operator==(const AntennaSpec&, const AntennaSpec&) = default;

  void validate() const {
    if (beamwidth_3db_deg <= 0.0) throw std::invalid_argument("AntennaSpec: beamwidth_3db_deg must be positive");
    if (max_attenuation_db <= 0.0) throw std::invalid_argument("AntennaSpec: max_attenuation_db must be positive");
  }
};

struct LinkBudget {
  double tx_power_dbm = 0.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 0.0;
  double path_loss_db = 0.0;
  double rx_power_dbm = 0.0;
  double noise_power_dbm = 0.0;
  double snr_db = 0.0;
  double rate_bps = 0.0;
};

/// Empirical on-body path loss: 24 log10(d) + 24 log10(f) + 38.93 dB,
/// with d in meters and f in GHz.
inline double path_loss_db(double d_m, double f_ghz) {
  if (d_m <= 0.0) throw std::domain_error("path_loss_db: distance must be positive");
  if (f_ghz <= 0.0) throw std::domain_error("path_loss_db: frequency must be positive");
  return 24.0 * std::log10(d_m) + 24.0 * std::log10(f_ghz) + 38.93;
}

/// Azimuth-plane pattern attenuation min{12 (phi/phi_3dB)^2, Am} in dB.
/// phi is measured from boresight.
inline double azimuth_attenuation_db(double phi_deg, const AntennaSpec& a) {
  const double ratio = phi_deg / a.beamwidth_3db_deg;
  return std::min(12.0 * ratio * ratio, a.max_attenuation_db);
}

/// Elevation-plane attenuation min{12 ((theta - 90)/theta_3dB)^2, Am} in dB;
/// boresight sits in the theta = 90 deg plane.
inline double elevation_attenuation_db(double theta_deg, const AntennaSpec& a) {
  const double ratio = (theta_deg - 90.0) / a.beamwidth_3db_deg;
  return std::min(12.0 * ratio * ratio, a.max_attenuation_db);
}

/// Planes combine additively but never exceed the ceiling Am.
inline double combined_attenuation_db(double theta_deg, double phi_deg, const AntennaSpec& a) {
  return std::min(azimuth_attenuation_db(phi_deg, a) + elevation_attenuation_db(theta_deg, a),
                  a.max_attenuation_db);
}

/// Two-element array factor read as a correction on the peak gain:
/// G(theta) = Gmax - 20 log10 |1 - exp(-2 pi j d sin theta)|.
/// At pattern nulls (|.| -> 0) the correction is skipped and Gmax returned,
/// rather than diverging.
inline double element_gain_db(double theta_deg, const AntennaSpec& a) {
  const double theta = theta_deg * (std::numbers::pi / 180.0);
  const std::complex<double> factor =
      1.0 - std::exp(std::complex<double>(0.0, -2.0 * std::numbers::pi * a.element_separation_wl *
                                                   std::sin(theta)));
  const double mag = std::abs(factor);
  if (mag < 1e-15) {
    return a.gain_dbi;
  }
  return a.gain_dbi - 20.0 * std::log10(mag);
}

/// Thermal floor kTB referenced to 1 mW, plus the receiver noise figure.
inline double noise_power_dbm(const RadioConfig& c) {
  c.validate();
  return 10.0 * std::log10(k_boltzmann * c.temperature_k * c.bandwidth_hz / 1e-3) +
         c.noise_figure_db;
}

/// Shannon capacity for the given SNR, clipped at the radio's rate cap.
inline double shannon_rate_bps(double snr_db, const RadioConfig& c) {
  const double snr = db_to_linear(snr_db);
  return std::min(c.bandwidth_hz * std::log2(1.0 + snr), c.max_rate_bps);
}

/// Full budget for one hop: Prx = Ptx + Gt + Gr - PL, then SNR and rate.
inline LinkBudget link_budget(double tx_power_dbm, double tx_gain_dbi, double rx_gain_dbi,
                              double d_m, const RadioConfig& c) {
  LinkBudget lb;
  lb.tx_power_dbm = tx_power_dbm;
  lb.tx_gain_dbi = tx_gain_dbi;
  lb.rx_gain_dbi = rx_gain_dbi;
  lb.path_loss_db = path_loss_db(d_m, c.frequency_ghz);
  lb.rx_power_dbm = tx_power_dbm + tx_gain_dbi + rx_gain_dbi - lb.path_loss_db;
  lb.noise_power_dbm = noise_power_dbm(c);
  lb.snr_db = lb.rx_power_dbm - lb.noise_power_dbm;
  lb.rate_bps = shannon_rate_bps(lb.snr_db, c);
  return lb;
}

}  // namespace wbansim
