#include "ncrsim/linkbudget.hpp"

#include <algorithm>
#include <cmath>

namespace ncrsim {

NoiseModel NoiseModel::ue_default() { return NoiseModel{}; }

NoiseModel NoiseModel::ncr_default() {
  NoiseModel n;
  n.noise_figure_linear = 5.011872336272722; // 7 dB
  return n;
}

double path_loss_linear(const LinkGeometry& geom) {
  if (!(geom.distance_m > 0.0))
    throw std::domain_error("path_loss_linear: distance must be > 0");
  if (!(geom.pathloss_exponent > 0.0))
    throw std::domain_error("path_loss_linear: exponent must be > 0");
  if (!std::isfinite(geom.ref_pathloss_db))
    throw std::domain_error("path_loss_linear: reference path loss not finite");
  const double pl_db = geom.ref_pathloss_db +
                       10.0 * geom.pathloss_exponent * std::log10(geom.distance_m);
  return std::pow(10.0, pl_db * 0.1);
}

// Single place defining the arithmetic order of the SNR expression; the
// SIMD batch kernels mirror it so results stay bitwise identical.
double snr_from_pathloss(double paout_mw, int n_tx, int n_rx,
                         double pathloss_linear, const NoiseModel& noise,
                         double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0))
    throw std::domain_error("snr: bandwidth must be > 0");
  const double ntx = static_cast<double>(n_tx);
  const double num = (paout_mw * (ntx * ntx)) * static_cast<double>(n_rx);
  const double den = ((pathloss_linear * noise.noise_figure_linear) *
                      noise.thermal_noise_density_mw_per_hz) * bandwidth_hz;
  return num / den;
}

double snr_direct(const GnbConfig& gnb, const UeConfig& ue,
                  const LinkGeometry& geom, const NoiseModel& noise) {
  return snr_from_pathloss(gnb.paout_mw, gnb.n_tx, ue.n_rx,
                           path_loss_linear(geom), noise, gnb.bandwidth_hz);
}

double snr_backhaul(const GnbConfig& gnb, const NcrConfig& ncr,
                    const LinkGeometry& geom, const NoiseModel& noise) {
  return snr_from_pathloss(gnb.paout_mw, gnb.n_tx, ncr.n_rx,
                           path_loss_linear(geom), noise, gnb.bandwidth_hz);
}

double ncr_pa_output(const NcrConfig& ncr, double snr_bh_linear,
                     const NoiseModel& noise, double bandwidth_hz) {
  if (snr_bh_linear < 0.0)
    throw std::domain_error("ncr_pa_output: SNR must be >= 0");
  const double noise_bw = (noise.noise_figure_linear *
                           noise.thermal_noise_density_mw_per_hz) * bandwidth_hz;
  const double limit = ((ncr.max_gain_linear * (1.0 + snr_bh_linear)) * noise_bw) /
                       static_cast<double>(ncr.n_tx);
  return std::min(ncr.paout_max_mw, limit);
}

double snr_access(const NcrConfig& ncr, const UeConfig& ue,
                  const LinkGeometry& geom, const NoiseModel& noise,
                  double paout_actual_mw, double bandwidth_hz) {
  return snr_from_pathloss(paout_actual_mw, ncr.n_tx, ue.n_rx,
                           path_loss_linear(geom), noise, bandwidth_hz);
}

double effective_snr(double snr_bh, double snr_ac) {
  if (snr_bh <= 0.0 || snr_ac <= 0.0) return 0.0;
  const double u = (1.0 + snr_ac) / snr_bh;
  return snr_ac / (1.0 + u);
}

} // namespace ncrsim
