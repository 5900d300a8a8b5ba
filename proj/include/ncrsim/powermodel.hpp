#pragma once

#include <utility>
#include <vector>

#include "ncrsim/linkbudget.hpp"

namespace ncrsim {

enum class PaKind { fixed, varying };

// Normalized PA efficiency eta. "fixed" models bias-adjusted PAs (eta == 1).
// "varying" models legacy PAs via a power-law curve
//   PAeff(X) = eff_max * (X / paout_ref_mw)^curve_exponent
// clamped to (eta_floor * eff_max, eff_max], or a piecewise-linear table of
// (paout_mw, efficiency) points when provided (clamped to its endpoints).
struct PaEfficiencyModel {
  PaKind kind = PaKind::fixed;
  double paout_ref_mw = 10.0;
  double curve_exponent = 0.8;
  double eff_max = 0.4;
  double eta_floor = 0.01;
  std::vector<std::pair<double, double>> table; // optional override

  static PaEfficiencyModel fixed_eff();
  static PaEfficiencyModel varying_eff();
};

// 3GPP-style reference constants, in abstract Unit Power. The shipped
// defaults are non-normative toy values; all are configurable.
struct PowerConstants {
  double p_ms_gnb = 10.0;
  double p_non_pa = 20.0;
  double p_active_dl = 40.0;
  double p_active_ul = 20.0;
  double ref_tx_power_per_ru_mw = 1920.0; // 192 elements x 10 mW
  int ref_n_rx = 32;
  double alpha = 0.4;
  double beta = 0.6;
  double gamma = 0.4;
  double xi = 0.6;
  double p_const_ncr = 5.0;
  double ncr_ref_tx_power_mw = 320.0; // 32 elements x 10 mW
  double ncr_sleep_power = 0.0;
};

// Parts are the actual contributions to the total (total == sum of parts
// exactly). For the gNB: static = P_ms, non_pa = alpha*P_nonPA,
// pa = beta*P_PA. For the NCR: static = P_const, non_pa = P_Rx, pa = P_Tx.
struct PowerBreakdown {
  double total = 0.0;
  double static_part = 0.0;
  double non_pa_part = 0.0;
  double pa_part = 0.0;
};

// eta normalized to the reference operating point; 1 for the fixed model.
double pa_efficiency_norm(const PaEfficiencyModel& model, double paout_mw);

PowerBreakdown gnb_power(const GnbConfig& cfg, const PaEfficiencyModel& model,
                         const PowerConstants& k);

// paout_actual_mw is the clamped output of ncr_pa_output. Inactive NCRs
// consume ncr_sleep_power only.
PowerBreakdown ncr_power(const NcrConfig& cfg, double paout_actual_mw,
                         const PaEfficiencyModel& model,
                         const PowerConstants& k, bool active);

} // namespace ncrsim
