#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ncrsim/linkbudget.hpp"
#include "ncrsim/powermodel.hpp"

namespace ncrsim {

// Exhaustive-search space. Lists must be nonempty, strictly ascending and
// positive; NCR lists are used by the indirect problem only.
struct ParameterGrid {
  std::vector<double> bw_values;        // Hz
  std::vector<double> gnb_paout_values; // mW per element
  std::vector<int> gnb_ntx_values;
  std::vector<double> ncr_paout_values; // mW per element
  std::vector<int> ncr_ntx_values;
  std::vector<int> ncr_nrx_values;

  static ParameterGrid link_level_default();
  static ParameterGrid sector_default(); // coarse grid for system-level runs

  std::uint64_t direct_size() const;
  std::uint64_t indirect_size() const;
  void validate(bool indirect) const;
};

struct LinkConfig {
  double bw_hz = 0;
  double gnb_paout_mw = 0;
  int gnb_ntx = 0;
  double ncr_paout_max_mw = 0; // 0 in direct topology
  int ncr_ntx = 0;
  int ncr_nrx = 0;
};

struct OptResult {
  LinkConfig best;
  double ee = 0;       // bps per Unit Power
  double rate_bps = 0;
  double snr = 0;               // direct: SNR_AC; indirect: effective SNR
  double snr_bh = 0;            // indirect only
  double snr_ac = 0;            // indirect only
  double ncr_paout_actual_mw = 0;
  PowerBreakdown gnb_power;
  PowerBreakdown ncr_power;
  double total_power = 0;
  std::uint64_t evaluations = 0;
};

struct OptOptions {
  // Optional EIRP cap: PAout_dBm + 20*log10(N_Tx) <= cap. Filters the grid;
  // off by default.
  std::optional<double> eirp_cap_dbm;
  int n_threads = 0; // 0 => hardware concurrency
};

double shannon_rate(double bandwidth_hz, double snr_linear);

// Single-configuration EE evaluations (Eqs. of the system model); these are
// also the sequential oracle the parallel/SIMD grid search must match
// bitwise.
OptResult ee_direct(const GnbConfig& gnb, const UeConfig& ue,
                    const LinkGeometry& geom, const NoiseModel& noise,
                    const PaEfficiencyModel& model, const PowerConstants& k);
OptResult ee_indirect(const GnbConfig& gnb, const NcrConfig& ncr,
                      const UeConfig& ue, const LinkGeometry& geom_bh,
                      const LinkGeometry& geom_ac, const NoiseModel& noise_ncr,
                      const NoiseModel& noise_ue,
                      const PaEfficiencyModel& model, const PowerConstants& k);

// LinkConfig convenience wrappers around the above.
OptResult evaluate_direct(const LinkConfig& c, const UeConfig& ue,
                          const LinkGeometry& geom, const NoiseModel& noise,
                          const PaEfficiencyModel& model,
                          const PowerConstants& k);
OptResult evaluate_indirect(const LinkConfig& c, const UeConfig& ue,
                            const LinkGeometry& geom_bh,
                            const LinkGeometry& geom_ac,
                            const NoiseModel& noise_ncr,
                            const NoiseModel& noise_ue,
                            const PaEfficiencyModel& model,
                            const PowerConstants& k,
                            const NcrConfig& ncr_template = {});

// Exhaustive EE maximization. Deterministic tie-break: highest EE, then
// lowest total power, lowest PAout_gNB, lowest N_Tx,gNB, then lexicographic
// on the remaining fields. Result is identical regardless of thread count.
OptResult optimize_direct(const ParameterGrid& grid, const LinkGeometry& geom,
                          const NoiseModel& noise_ue, const UeConfig& ue,
                          const PaEfficiencyModel& model,
                          const PowerConstants& k, const OptOptions& opts = {});
OptResult optimize_indirect(const ParameterGrid& grid,
                            const LinkGeometry& geom_bh,
                            const LinkGeometry& geom_ac,
                            const NoiseModel& noise_ncr,
                            const NoiseModel& noise_ue, const UeConfig& ue,
                            const PaEfficiencyModel& model,
                            const PowerConstants& k,
                            const OptOptions& opts = {},
                            const NcrConfig& ncr_template = {});

// (rel_ee, rel_rate) of an optimum against a baseline on the same scenario.
std::pair<double, double> relative_metrics(const OptResult& opt,
                                           const OptResult& baseline);

// Baseline = maximum value of every grid dimension (most spectral-efficient
// configuration); PAout entries may be overridden.
LinkConfig baseline_config(const ParameterGrid& grid, bool indirect,
                           std::optional<double> gnb_paout_mw = {},
                           std::optional<double> ncr_paout_mw = {});

} // namespace ncrsim
