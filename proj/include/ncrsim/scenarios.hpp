#pragma once

#include <string>
#include <vector>

#include "ncrsim/ee_optimizer.hpp"

namespace ncrsim {

// Link-level distance sweep. For direct sweeps the distance is gNB-UE; for
// indirect sweeps it is NCR-UE while the gNB-NCR distance stays at d_bh_m.
struct SweepSpec {
  std::vector<double> distances_m; // positive, ascending
  double d_bh_m = 94.0;
  double exponent_access = 3.2; // gNB-UE and NCR-UE links
  double exponent_bh = 2.0;     // gNB-NCR link
  double ref_pathloss_db = 61.4;
  ParameterGrid grid = ParameterGrid::link_level_default();
  PaEfficiencyModel pa_model = PaEfficiencyModel::fixed_eff();
  PowerConstants constants;
  NoiseModel noise_ue = NoiseModel::ue_default();
  NoiseModel noise_ncr = NoiseModel::ncr_default();
  UeConfig ue;
  NcrConfig ncr_template;
  OptOptions opt;

  static SweepSpec defaults(); // 40 log-spaced distances over [5, 300] m
  void validate() const;
};

struct SweepRow {
  double distance_m = 0;
  OptResult opt;
  OptResult baseline;
  double rel_ee = 0;
  double rel_rate = 0;
};

std::vector<SweepRow> direct_sweep(const SweepSpec& spec);
std::vector<SweepRow> indirect_sweep(const SweepSpec& spec);

enum class SweepParam { gnb_paout, gnb_ntx, ncr_paout, ncr_ntx, ncr_nrx };

const char* sweep_param_name(SweepParam p);

// Distance at which a parameter's optimum first departs from its baseline
// value, scanning from the largest distance down. Ordered by departure
// distance (descending); parameters that never depart are omitted.
struct StrategyEvent {
  SweepParam param;
  double distance_m = 0;
  std::size_t row_index = 0; // into the ascending-distance sweep
};

std::vector<StrategyEvent> extract_strategy(const std::vector<SweepRow>& sweep);

// Distance d where paout * n_tx^2 * n_rx / (PL(d) * NF * N0 * BW) equals
// target, from the power-law inverse. geom_template supplies exponent and
// reference path loss; its distance field is ignored. Throws
// std::domain_error when the target is unreachable at 1 m.
double coverage_range(double paout_mw, int n_tx, int n_rx,
                      const LinkGeometry& geom_template,
                      const NoiseModel& noise, double bandwidth_hz,
                      double target_snr_linear);

// Access-side range of an NCR fed with the given backhaul SNR: solves
// effective_snr(snr_bh, snr_ac(d)) == target. Returns 0 when the target is
// unreachable even at 1 m (including snr_bh <= target).
double ncr_coverage_range(const NcrConfig& ncr, double snr_bh,
                          const UeConfig& ue,
                          const LinkGeometry& access_template,
                          const NoiseModel& noise_ncr,
                          const NoiseModel& noise_ue, double bandwidth_hz,
                          double target_snr_linear);

// Small cell + edge NCR versus one macro cell covering the same range.
struct CompareSpec {
  double target_snr_linear = 1.0; // coverage target, 0 dB
  GnbConfig sc;
  NcrConfig ncr;
  std::vector<int> mc_ntx_candidates = {192, 256, 384, 512, 768, 1024};
  double mc_paout_cap_dbm = 13.0;
  double exponent_access = 3.2;
  double exponent_bh = 2.0;
  double ref_pathloss_db = 61.4;
  NoiseModel noise_ue = NoiseModel::ue_default();
  NoiseModel noise_ncr = NoiseModel::ncr_default();
  UeConfig ue;
  PaEfficiencyModel pa_model = PaEfficiencyModel::fixed_eff();
  PowerConstants constants;    // SC and NCR
  PowerConstants mc_constants; // MC-class hardware
  std::vector<double> distances_m; // empty => n_samples auto spacing
  int n_samples = 30;

  static CompareSpec defaults();
};

struct CompareRow {
  double distance_m = 0;
  bool via_ncr = false; // SC path serves through the NCR at this distance
  double rate_sc_path = 0;
  double rate_mc = 0;
  double ee_sc_path = 0;
  double ee_mc = 0;
};

struct CompareResult {
  double d_bh = 0;       // SC direct coverage range; NCR sits here
  double d_ac = 0;       // NCR access range beyond d_bh
  double full_range = 0; // d_bh + d_ac
  int mc_ntx = 0;
  double mc_paout_mw = 0; // exact coverage-meeting PA output
  std::vector<CompareRow> rows;
};

// MC selection: smallest candidate N_Tx whose exact PA output for target
// SNR at full_range stays within the cap. Throws std::runtime_error naming
// the longest-reaching candidate when none qualifies.
CompareResult compare_sc_mc(const CompareSpec& spec);

} // namespace ncrsim
