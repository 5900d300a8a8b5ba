#include "ncrsim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ncrsim/units.hpp"

namespace ncrsim {

SweepSpec SweepSpec::defaults() {
  SweepSpec s;
  const int n = 40;
  const double lo = 5.0, hi = 300.0;
  for (int i = 0; i < n; ++i)
    s.distances_m.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return s;
}

void SweepSpec::validate() const {
  if (distances_m.empty())
    throw std::invalid_argument("SweepSpec: empty distance list");
  for (std::size_t i = 0; i < distances_m.size(); ++i) {
    if (!(distances_m[i] > 0.0))
      throw std::invalid_argument("SweepSpec: non-positive distance");
    if (i > 0 && !(distances_m[i] > distances_m[i - 1]))
      throw std::invalid_argument("SweepSpec: distances not ascending");
  }
  if (!(d_bh_m > 0.0))
    throw std::invalid_argument("SweepSpec: d_bh_m must be > 0");
  if (!(exponent_access > 0.0) || !(exponent_bh > 0.0))
    throw std::invalid_argument("SweepSpec: exponents must be > 0");
}

std::vector<SweepRow> direct_sweep(const SweepSpec& spec) {
  spec.validate();
  spec.grid.validate(false);
  const LinkConfig base_cfg = baseline_config(spec.grid, false);
  std::vector<SweepRow> rows;
  rows.reserve(spec.distances_m.size());
  for (double d : spec.distances_m) {
    LinkGeometry geom{d, spec.exponent_access, spec.ref_pathloss_db};
    SweepRow row;
    row.distance_m = d;
    row.opt = optimize_direct(spec.grid, geom, spec.noise_ue, spec.ue,
                              spec.pa_model, spec.constants, spec.opt);
    row.baseline = evaluate_direct(base_cfg, spec.ue, geom, spec.noise_ue,
                                   spec.pa_model, spec.constants);
    std::tie(row.rel_ee, row.rel_rate) = relative_metrics(row.opt, row.baseline);
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> indirect_sweep(const SweepSpec& spec) {
  spec.validate();
  spec.grid.validate(true);
  const LinkConfig base_cfg = baseline_config(spec.grid, true);
  const LinkGeometry geom_bh{spec.d_bh_m, spec.exponent_bh, spec.ref_pathloss_db};
  std::vector<SweepRow> rows;
  rows.reserve(spec.distances_m.size());
  for (double d : spec.distances_m) {
    LinkGeometry geom_ac{d, spec.exponent_access, spec.ref_pathloss_db};
    SweepRow row;
    row.distance_m = d;
    row.opt = optimize_indirect(spec.grid, geom_bh, geom_ac, spec.noise_ncr,
                                spec.noise_ue, spec.ue, spec.pa_model,
                                spec.constants, spec.opt, spec.ncr_template);
    row.baseline =
        evaluate_indirect(base_cfg, spec.ue, geom_bh, geom_ac, spec.noise_ncr,
                          spec.noise_ue, spec.pa_model, spec.constants,
                          spec.ncr_template);
    std::tie(row.rel_ee, row.rel_rate) = relative_metrics(row.opt, row.baseline);
    rows.push_back(row);
  }
  return rows;
}

const char* sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::gnb_paout: return "gnb_paout";
    case SweepParam::gnb_ntx: return "gnb_ntx";
    case SweepParam::ncr_paout: return "ncr_paout";
    case SweepParam::ncr_ntx: return "ncr_ntx";
    case SweepParam::ncr_nrx: return "ncr_nrx";
  }
  return "?";
}

namespace {

double param_value(const LinkConfig& c, SweepParam p) {
  switch (p) {
    case SweepParam::gnb_paout: return c.gnb_paout_mw;
    case SweepParam::gnb_ntx: return c.gnb_ntx;
    case SweepParam::ncr_paout: return c.ncr_paout_max_mw;
    case SweepParam::ncr_ntx: return c.ncr_ntx;
    case SweepParam::ncr_nrx: return c.ncr_nrx;
  }
  return 0;
}

} // namespace

std::vector<StrategyEvent> extract_strategy(const std::vector<SweepRow>& sweep) {
  std::vector<std::size_t> order(sweep.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sweep[a].distance_m > sweep[b].distance_m;
  });

  const bool indirect = !sweep.empty() && sweep.front().baseline.best.ncr_ntx > 0;
  std::vector<SweepParam> params = {SweepParam::gnb_paout, SweepParam::gnb_ntx};
  if (indirect) {
    params.push_back(SweepParam::ncr_paout);
    params.push_back(SweepParam::ncr_ntx);
    params.push_back(SweepParam::ncr_nrx);
  }

  std::vector<StrategyEvent> events;
  for (SweepParam p : params) {
    for (std::size_t idx : order) {
      if (param_value(sweep[idx].opt.best, p) !=
          param_value(sweep[idx].baseline.best, p)) {
        events.push_back({p, sweep[idx].distance_m, idx});
        break;
      }
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const StrategyEvent& a, const StrategyEvent& b) {
                     return a.distance_m > b.distance_m;
                   });
  return events;
}

double coverage_range(double paout_mw, int n_tx, int n_rx,
                      const LinkGeometry& geom_template,
                      const NoiseModel& noise, double bandwidth_hz,
                      double target_snr_linear) {
  if (!(target_snr_linear > 0.0))
    throw std::domain_error("coverage_range: target must be > 0");
  LinkGeometry at_one = geom_template;
  at_one.distance_m = 1.0;
  const double s1 = snr_from_pathloss(paout_mw, n_tx, n_rx,
                                      path_loss_linear(at_one), noise,
                                      bandwidth_hz);
  if (s1 < target_snr_linear)
    throw std::domain_error("coverage_range: target unreachable at 1 m");
  return std::pow(s1 / target_snr_linear, 1.0 / geom_template.pathloss_exponent);
}

double ncr_coverage_range(const NcrConfig& ncr, double snr_bh,
                          const UeConfig& ue,
                          const LinkGeometry& access_template,
                          const NoiseModel& noise_ncr,
                          const NoiseModel& noise_ue, double bandwidth_hz,
                          double target_snr_linear) {
  if (!(target_snr_linear > 0.0))
    throw std::domain_error("ncr_coverage_range: target must be > 0");
  if (snr_bh <= target_snr_linear) return 0.0; // effSNR < snr_bh always
  // effective_snr(bh, ac) == target  <=>  ac == target*(bh+1)/(bh-target)
  const double ac_needed =
      target_snr_linear * (snr_bh + 1.0) / (snr_bh - target_snr_linear);
  const double pa = ncr_pa_output(ncr, snr_bh, noise_ncr, bandwidth_hz);
  if (pa <= 0.0) return 0.0;
  LinkGeometry at_one = access_template;
  at_one.distance_m = 1.0;
  const double s1 = snr_from_pathloss(pa, ncr.n_tx, ue.n_rx,
                                      path_loss_linear(at_one), noise_ue,
                                      bandwidth_hz);
  if (s1 < ac_needed) return 0.0;
  return std::pow(s1 / ac_needed, 1.0 / access_template.pathloss_exponent);
}

CompareSpec CompareSpec::defaults() {
  CompareSpec s;
  s.sc.paout_mw = dbm_to_mw(10.0);
  // MC-class site hardware draws considerably more than a small cell.
  s.mc_constants = s.constants;
  s.mc_constants.p_ms_gnb *= 4.0;
  s.mc_constants.p_non_pa *= 4.0;
  s.mc_constants.p_active_dl *= 4.0;
  s.mc_constants.p_active_ul *= 4.0;
  return s;
}

CompareResult compare_sc_mc(const CompareSpec& spec) {
  const LinkGeometry access_tpl{1.0, spec.exponent_access, spec.ref_pathloss_db};
  const LinkGeometry bh_tpl{1.0, spec.exponent_bh, spec.ref_pathloss_db};

  CompareResult res;
  res.d_bh = coverage_range(spec.sc.paout_mw, spec.sc.n_tx, spec.ue.n_rx,
                            access_tpl, spec.noise_ue, spec.sc.bandwidth_hz,
                            spec.target_snr_linear);
  LinkGeometry geom_bh = bh_tpl;
  geom_bh.distance_m = res.d_bh;
  const double snr_bh = snr_backhaul(spec.sc, spec.ncr, geom_bh, spec.noise_ncr);
  res.d_ac = ncr_coverage_range(spec.ncr, snr_bh, spec.ue, access_tpl,
                                spec.noise_ncr, spec.noise_ue,
                                spec.sc.bandwidth_hz, spec.target_snr_linear);
  res.full_range = res.d_bh + res.d_ac;

  // Exact PA output putting the candidate at target SNR at full range.
  LinkGeometry geom_full = access_tpl;
  geom_full.distance_m = res.full_range;
  const double pl_full = path_loss_linear(geom_full);
  const double den_per_mw =
      ((pl_full * spec.noise_ue.noise_figure_linear) *
       spec.noise_ue.thermal_noise_density_mw_per_hz) * spec.sc.bandwidth_hz;
  int best_ntx = 0;
  double best_range = 0.0;
  res.mc_ntx = 0;
  for (int ntx : spec.mc_ntx_candidates) {
    const double ntx_d = static_cast<double>(ntx);
    const double p = (spec.target_snr_linear * den_per_mw) /
                     ((ntx_d * ntx_d) * static_cast<double>(spec.ue.n_rx));
    if (mw_to_dbm(p) <= spec.mc_paout_cap_dbm + 1e-12) {
      res.mc_ntx = ntx;
      res.mc_paout_mw = p;
      break;
    }
    const double r = coverage_range(dbm_to_mw(spec.mc_paout_cap_dbm), ntx,
                                    spec.ue.n_rx, access_tpl, spec.noise_ue,
                                    spec.sc.bandwidth_hz, spec.target_snr_linear);
    if (r > best_range) {
      best_range = r;
      best_ntx = ntx;
    }
  }
  if (res.mc_ntx == 0) {
    std::ostringstream os;
    os << "compare_sc_mc: no MC candidate reaches " << res.full_range
       << " m; best is n_tx=" << best_ntx << " at " << best_range << " m";
    throw std::runtime_error(os.str());
  }

  std::vector<double> distances = spec.distances_m;
  if (distances.empty()) {
    const double top = 0.99 * res.full_range;
    for (int i = 1; i <= spec.n_samples; ++i)
      distances.push_back(top * static_cast<double>(i) / spec.n_samples);
  }

  const GnbConfig mc{res.mc_ntx, res.mc_paout_mw, spec.sc.bandwidth_hz};
  for (double d : distances) {
    CompareRow row;
    row.distance_m = d;
    LinkGeometry geom_d = access_tpl;
    geom_d.distance_m = d;
    if (d <= res.d_bh) {
      const OptResult r = ee_direct(spec.sc, spec.ue, geom_d, spec.noise_ue,
                                    spec.pa_model, spec.constants);
      row.rate_sc_path = r.rate_bps;
      row.ee_sc_path = r.ee;
    } else {
      row.via_ncr = true;
      LinkGeometry geom_ac = access_tpl;
      geom_ac.distance_m = d - res.d_bh;
      const OptResult r =
          ee_indirect(spec.sc, spec.ncr, spec.ue, geom_bh, geom_ac,
                      spec.noise_ncr, spec.noise_ue, spec.pa_model,
                      spec.constants);
      row.rate_sc_path = r.rate_bps;
      row.ee_sc_path = r.ee;
    }
    const OptResult m = ee_direct(mc, spec.ue, geom_d, spec.noise_ue,
                                  spec.pa_model, spec.mc_constants);
    row.rate_mc = m.rate_bps;
    row.ee_mc = m.ee;
    res.rows.push_back(row);
  }
  return res;
}

} // namespace ncrsim
