#include "ncrsim/powermodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncrsim {

PaEfficiencyModel PaEfficiencyModel::fixed_eff() { return PaEfficiencyModel{}; }

PaEfficiencyModel PaEfficiencyModel::varying_eff() {
  PaEfficiencyModel m;
  m.kind = PaKind::varying;
  return m;
}

namespace {

double table_interp(const std::vector<std::pair<double, double>>& t, double x) {
  if (x <= t.front().first) return t.front().second; // clamp to endpoints
  if (x >= t.back().first) return t.back().second;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (x <= t[i].first) {
      const auto& [x0, y0] = t[i - 1];
      const auto& [x1, y1] = t[i];
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return t.back().second;
}

double pa_eff_abs(const PaEfficiencyModel& m, double paout_mw) {
  if (!m.table.empty()) return table_interp(m.table, paout_mw);
  const double r = paout_mw / m.paout_ref_mw;
  const double e = m.eff_max * std::pow(r, m.curve_exponent);
  return std::clamp(e, m.eta_floor * m.eff_max, m.eff_max);
}

} // namespace

double pa_efficiency_norm(const PaEfficiencyModel& model, double paout_mw) {
  if (paout_mw < 0.0)
    throw std::domain_error("pa_efficiency_norm: PA output must be >= 0");
  if (model.kind == PaKind::fixed) return 1.0;
  return pa_eff_abs(model, paout_mw) / pa_eff_abs(model, model.paout_ref_mw);
}

PowerBreakdown gnb_power(const GnbConfig& cfg, const PaEfficiencyModel& model,
                         const PowerConstants& k) {
  const double eta = pa_efficiency_norm(model, cfg.paout_mw);
  const double inv_eta = 1.0 / eta;
  const double pa_raw =
      ((static_cast<double>(cfg.n_tx) * cfg.paout_mw) / k.ref_tx_power_per_ru_mw) *
      inv_eta * (k.p_active_dl - k.p_ms_gnb);
  PowerBreakdown b;
  b.static_part = k.p_ms_gnb;
  b.non_pa_part = k.alpha * k.p_non_pa;
  b.pa_part = k.beta * pa_raw;
  b.total = (b.static_part + b.non_pa_part) + b.pa_part;
  return b;
}

PowerBreakdown ncr_power(const NcrConfig& cfg, double paout_actual_mw,
                         const PaEfficiencyModel& model,
                         const PowerConstants& k, bool active) {
  PowerBreakdown b;
  if (!active) {
    b.static_part = k.ncr_sleep_power;
    b.total = k.ncr_sleep_power;
    return b;
  }
  const double eta = pa_efficiency_norm(model, paout_actual_mw);
  const double inv_eta = 1.0 / eta;
  b.static_part = k.p_const_ncr;
  b.non_pa_part = (static_cast<double>(cfg.n_rx) / static_cast<double>(k.ref_n_rx)) *
                  (k.gamma * k.p_active_ul);
  b.pa_part =
      ((static_cast<double>(cfg.n_tx) * paout_actual_mw) / k.ncr_ref_tx_power_mw) *
      inv_eta * (k.xi * k.p_active_dl);
  b.total = (b.static_part + b.non_pa_part) + b.pa_part;
  return b;
}

} // namespace ncrsim
