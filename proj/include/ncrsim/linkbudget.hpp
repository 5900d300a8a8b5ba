#pragma once

#include <stdexcept>

namespace ncrsim {

// Distance power-law path loss: PL_dB(d) = ref_pathloss_db + 10*n*log10(d).
struct LinkGeometry {
  double distance_m = 1.0;
  double pathloss_exponent = 3.2;
  double ref_pathloss_db = 61.4; // free-space intercept at 1 m, 28 GHz
};

struct NoiseModel {
  double noise_figure_linear = 10.0;               // 10 dB
  double thermal_noise_density_mw_per_hz = 3.9810717055349565e-18; // -174 dBm/Hz

  static NoiseModel ue_default();   // NF 10 dB
  static NoiseModel ncr_default();  // NF 7 dB
};

struct GnbConfig {
  int n_tx = 192;
  double paout_mw = 10.0;      // per antenna element
  double bandwidth_hz = 400e6;
};

struct NcrConfig {
  int n_tx = 32;
  int n_rx = 32;
  double paout_max_mw = 10.0;        // per antenna element
  double max_gain_linear = 1e9;      // 90 dB
};

struct UeConfig {
  int n_rx = 4;
};

// Linear path loss (>= 1 for d >= 1 m). Throws std::domain_error for
// non-positive distance or exponent.
double path_loss_linear(const LinkGeometry& geom);

// gNB -> UE downlink SNR: paout * n_tx^2 * n_rx_ue / (PL * NF * N0 * BW).
double snr_direct(const GnbConfig& gnb, const UeConfig& ue,
                  const LinkGeometry& geom, const NoiseModel& noise);

// gNB -> NCR backhaul SNR; `noise` carries the NCR's noise figure.
double snr_backhaul(const GnbConfig& gnb, const NcrConfig& ncr,
                    const LinkGeometry& geom, const NoiseModel& noise);

// Amplify-and-forward PA output per element, gain-limited and clamped:
// min{ paout_max, G_max * (1 + SNR_BH) * NF * N0 * BW / N_Tx }.
double ncr_pa_output(const NcrConfig& ncr, double snr_bh_linear,
                     const NoiseModel& noise, double bandwidth_hz);

// NCR -> UE access SNR given the actual (clamped) PA output.
double snr_access(const NcrConfig& ncr, const UeConfig& ue,
                  const LinkGeometry& geom, const NoiseModel& noise,
                  double paout_actual_mw, double bandwidth_hz);

// End-to-end SNR of the two-hop amplify-and-forward chain:
// snr_ac / (1 + (1 + snr_ac) / snr_bh). Returns 0 if either hop is 0
// (the limit value; sweeps may touch it).
double effective_snr(double snr_bh, double snr_ac);

// Variants used only as overloads for precomputed path loss (hot paths).
double snr_from_pathloss(double paout_mw, int n_tx, int n_rx,
                         double pathloss_linear, const NoiseModel& noise,
                         double bandwidth_hz);

} // namespace ncrsim
