#include "ncrsim/ee_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "ncrsim/kernels.hpp"
#include "ncrsim/units.hpp"

namespace ncrsim {

namespace {

std::vector<double> dbm_range_mw(double min_dbm, double max_dbm, double step_db) {
  std::vector<double> v;
  for (double d = min_dbm; d <= max_dbm + 1e-9; d += step_db)
    v.push_back(dbm_to_mw(d));
  return v;
}

template <typename T>
void check_list(const std::vector<T>& v, const char* name) {
  if (v.empty())
    throw std::invalid_argument(std::string("ParameterGrid: empty ") + name);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > T(0)))
      throw std::invalid_argument(std::string("ParameterGrid: non-positive ") + name);
    if (i > 0 && !(v[i] > v[i - 1]))
      throw std::invalid_argument(std::string("ParameterGrid: not ascending ") + name);
  }
}

// Argmax candidate with the deterministic tie-break key. The comparator is
// a strict total order (index last), so the parallel merge is independent
// of chunking and thread count.
struct Cand {
  double ee = -1.0;
  double power = std::numeric_limits<double>::infinity();
  double gnb_paout = 0, bw = 0, ncr_paout = 0;
  int gnb_ntx = 0, ncr_ntx = 0, ncr_nrx = 0;
  std::uint64_t idx = std::numeric_limits<std::uint64_t>::max();
  bool valid = false;
};

bool better(const Cand& a, const Cand& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (a.ee != b.ee) return a.ee > b.ee;
  if (a.power != b.power) return a.power < b.power;
  if (a.gnb_paout != b.gnb_paout) return a.gnb_paout < b.gnb_paout;
  if (a.gnb_ntx != b.gnb_ntx) return a.gnb_ntx < b.gnb_ntx;
  if (a.bw != b.bw) return a.bw < b.bw;
  if (a.ncr_paout != b.ncr_paout) return a.ncr_paout < b.ncr_paout;
  if (a.ncr_ntx != b.ncr_ntx) return a.ncr_ntx < b.ncr_ntx;
  if (a.ncr_nrx != b.ncr_nrx) return a.ncr_nrx < b.ncr_nrx;
  return a.idx < b.idx;
}

int resolve_threads(int n) {
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(task) for every task in [0, n_tasks), partitioned into contiguous
// blocks; each worker folds into a local Cand, merged afterwards.
template <typename Fn>
Cand parallel_argmax(std::uint64_t n_tasks, int n_threads, Fn fn) {
  n_threads = std::min<std::uint64_t>(std::max(n_threads, 1), n_tasks);
  std::vector<Cand> locals(n_threads);
  auto worker = [&](int t) {
    const std::uint64_t lo = n_tasks * t / n_threads;
    const std::uint64_t hi = n_tasks * (t + 1) / n_threads;
    Cand best;
    for (std::uint64_t task = lo; task < hi; ++task) fn(task, best);
    locals[t] = best;
  };
  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  Cand best;
  for (const auto& c : locals)
    if (better(c, best)) best = c;
  return best;
}

// Per-ntx prefix length of PAout candidates satisfying the EIRP cap.
std::vector<int> eirp_allowed_counts(const std::vector<double>& paout_mw,
                                     const std::vector<int>& ntx,
                                     std::optional<double> cap_dbm) {
  std::vector<int> counts(ntx.size(), static_cast<int>(paout_mw.size()));
  if (!cap_dbm) return counts;
  for (std::size_t i = 0; i < ntx.size(); ++i) {
    const double limit = *cap_dbm - 20.0 * std::log10(static_cast<double>(ntx[i]));
    int n = 0;
    while (n < static_cast<int>(paout_mw.size()) &&
           mw_to_dbm(paout_mw[n]) <= limit + 1e-12)
      ++n;
    counts[i] = n;
  }
  return counts;
}

std::vector<double> inv_eta_table(const PaEfficiencyModel& model,
                                  const std::vector<double>& paout_mw) {
  std::vector<double> v(paout_mw.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = 1.0 / pa_efficiency_norm(model, paout_mw[i]);
  return v;
}

} // namespace

ParameterGrid ParameterGrid::link_level_default() {
  ParameterGrid g;
  g.bw_values = {1e6, 50e6, 100e6, 200e6, 400e6};
  g.gnb_paout_values = dbm_range_mw(0.0, 10.0, 0.5);
  g.gnb_ntx_values.push_back(1);
  for (int n = 4; n <= 192; n += 4) g.gnb_ntx_values.push_back(n);
  g.ncr_paout_values = dbm_range_mw(0.0, 10.0, 1.0);
  g.ncr_ntx_values.push_back(1);
  for (int n = 2; n <= 32; n += 2) g.ncr_ntx_values.push_back(n);
  g.ncr_nrx_values = g.ncr_ntx_values;
  return g;
}

ParameterGrid ParameterGrid::sector_default() {
  ParameterGrid g;
  g.bw_values = {400e6};
  g.gnb_paout_values = dbm_range_mw(0.0, 10.0, 2.0);
  g.gnb_ntx_values = {1, 48, 96, 144, 192};
  g.ncr_paout_values = dbm_range_mw(0.0, 10.0, 5.0);
  g.ncr_ntx_values = {8, 16, 24, 32};
  g.ncr_nrx_values = {8, 16, 24, 32};
  return g;
}

std::uint64_t ParameterGrid::direct_size() const {
  return static_cast<std::uint64_t>(bw_values.size()) * gnb_paout_values.size() *
         gnb_ntx_values.size();
}

std::uint64_t ParameterGrid::indirect_size() const {
  return direct_size() * ncr_paout_values.size() * ncr_ntx_values.size() *
         ncr_nrx_values.size();
}

void ParameterGrid::validate(bool indirect) const {
  check_list(bw_values, "bw_values");
  check_list(gnb_paout_values, "gnb_paout_values");
  check_list(gnb_ntx_values, "gnb_ntx_values");
  if (indirect) {
    check_list(ncr_paout_values, "ncr_paout_values");
    check_list(ncr_ntx_values, "ncr_ntx_values");
    check_list(ncr_nrx_values, "ncr_nrx_values");
  }
}

double shannon_rate(double bandwidth_hz, double snr_linear) {
  if (bandwidth_hz < 0.0 || snr_linear < 0.0)
    throw std::domain_error("shannon_rate: inputs must be >= 0");
  return bandwidth_hz * std::log2(1.0 + snr_linear);
}

OptResult ee_direct(const GnbConfig& gnb, const UeConfig& ue,
                    const LinkGeometry& geom, const NoiseModel& noise,
                    const PaEfficiencyModel& model, const PowerConstants& k) {
  OptResult r;
  r.snr = snr_direct(gnb, ue, geom, noise);
  r.rate_bps = shannon_rate(gnb.bandwidth_hz, r.snr);
  r.gnb_power = gnb_power(gnb, model, k);
  r.total_power = r.gnb_power.total;
  r.ee = r.rate_bps / r.total_power;
  r.best = LinkConfig{gnb.bandwidth_hz, gnb.paout_mw, gnb.n_tx, 0, 0, 0};
  r.evaluations = 1;
  return r;
}

OptResult ee_indirect(const GnbConfig& gnb, const NcrConfig& ncr,
                      const UeConfig& ue, const LinkGeometry& geom_bh,
                      const LinkGeometry& geom_ac, const NoiseModel& noise_ncr,
                      const NoiseModel& noise_ue,
                      const PaEfficiencyModel& model, const PowerConstants& k) {
  OptResult r;
  r.snr_bh = snr_backhaul(gnb, ncr, geom_bh, noise_ncr);
  r.ncr_paout_actual_mw =
      ncr_pa_output(ncr, r.snr_bh, noise_ncr, gnb.bandwidth_hz);
  r.snr_ac = snr_access(ncr, ue, geom_ac, noise_ue, r.ncr_paout_actual_mw,
                        gnb.bandwidth_hz);
  r.snr = effective_snr(r.snr_bh, r.snr_ac);
  r.rate_bps = shannon_rate(gnb.bandwidth_hz, r.snr);
  r.gnb_power = gnb_power(gnb, model, k);
  r.ncr_power = ncr_power(ncr, r.ncr_paout_actual_mw, model, k, true);
  r.total_power = r.gnb_power.total + r.ncr_power.total;
  r.ee = r.rate_bps / r.total_power;
  r.best = LinkConfig{gnb.bandwidth_hz, gnb.paout_mw,     gnb.n_tx,
                      ncr.paout_max_mw, ncr.n_tx,         ncr.n_rx};
  r.evaluations = 1;
  return r;
}

OptResult evaluate_direct(const LinkConfig& c, const UeConfig& ue,
                          const LinkGeometry& geom, const NoiseModel& noise,
                          const PaEfficiencyModel& model,
                          const PowerConstants& k) {
  GnbConfig gnb{c.gnb_ntx, c.gnb_paout_mw, c.bw_hz};
  return ee_direct(gnb, ue, geom, noise, model, k);
}

OptResult evaluate_indirect(const LinkConfig& c, const UeConfig& ue,
                            const LinkGeometry& geom_bh,
                            const LinkGeometry& geom_ac,
                            const NoiseModel& noise_ncr,
                            const NoiseModel& noise_ue,
                            const PaEfficiencyModel& model,
                            const PowerConstants& k,
                            const NcrConfig& ncr_template) {
  GnbConfig gnb{c.gnb_ntx, c.gnb_paout_mw, c.bw_hz};
  NcrConfig ncr = ncr_template;
  ncr.n_tx = c.ncr_ntx;
  ncr.n_rx = c.ncr_nrx;
  ncr.paout_max_mw = c.ncr_paout_max_mw;
  return ee_indirect(gnb, ncr, ue, geom_bh, geom_ac, noise_ncr, noise_ue,
                     model, k);
}

OptResult optimize_direct(const ParameterGrid& grid, const LinkGeometry& geom,
                          const NoiseModel& noise_ue, const UeConfig& ue,
                          const PaEfficiencyModel& model,
                          const PowerConstants& k, const OptOptions& opts) {
  grid.validate(false);
  const double pl = path_loss_linear(geom);
  const auto& bws = grid.bw_values;
  const auto& pas = grid.gnb_paout_values;
  const auto& nts = grid.gnb_ntx_values;
  const int np = static_cast<int>(pas.size());
  const auto inv_eta = inv_eta_table(model, pas);
  const auto allowed = eirp_allowed_counts(pas, nts, opts.eirp_cap_dbm);
  const auto kernel = kernels::direct_batch();
  const double base = k.p_ms_gnb + k.alpha * k.p_non_pa;
  const double diff = k.p_active_dl - k.p_ms_gnb;

  const std::uint64_t n_tasks =
      static_cast<std::uint64_t>(bws.size()) * nts.size();

  thread_local std::vector<double> snr_buf, pow_buf;
  auto eval_task = [&](std::uint64_t task, Cand& best) {
    const std::size_t ib = task / nts.size();
    const std::size_t it = task % nts.size();
    const double bw = bws[ib];
    const double ntx_d = static_cast<double>(nts[it]);
    kernels::DirectBatchCtx ctx;
    ctx.ntx2 = ntx_d * ntx_d;
    ctx.nrx = static_cast<double>(ue.n_rx);
    ctx.den = ((pl * noise_ue.noise_figure_linear) *
               noise_ue.thermal_noise_density_mw_per_hz) * bw;
    ctx.ntx_d = ntx_d;
    ctx.ref_tx = k.ref_tx_power_per_ru_mw;
    ctx.diff = diff;
    ctx.beta = k.beta;
    ctx.base = base;
    snr_buf.resize(np);
    pow_buf.resize(np);
    kernel(pas.data(), inv_eta.data(), np, ctx, snr_buf.data(), pow_buf.data());
    for (int ip = 0; ip < allowed[it]; ++ip) {
      const double rate = shannon_rate(bw, snr_buf[ip]);
      const double ee = rate / pow_buf[ip];
      Cand c;
      c.ee = ee;
      c.power = pow_buf[ip];
      c.gnb_paout = pas[ip];
      c.gnb_ntx = nts[it];
      c.bw = bw;
      c.idx = task * np + ip;
      c.valid = true;
      if (better(c, best)) best = c;
    }
  };

  const Cand best =
      parallel_argmax(n_tasks, resolve_threads(opts.n_threads), eval_task);
  if (!best.valid)
    throw std::invalid_argument("optimize_direct: no feasible configuration");

  LinkConfig c{best.bw, best.gnb_paout, best.gnb_ntx, 0, 0, 0};
  OptResult r = evaluate_direct(c, ue, geom, noise_ue, model, k);
  r.evaluations = grid.direct_size();
  return r;
}

OptResult optimize_indirect(const ParameterGrid& grid,
                            const LinkGeometry& geom_bh,
                            const LinkGeometry& geom_ac,
                            const NoiseModel& noise_ncr,
                            const NoiseModel& noise_ue, const UeConfig& ue,
                            const PaEfficiencyModel& model,
                            const PowerConstants& k, const OptOptions& opts,
                            const NcrConfig& ncr_template) {
  grid.validate(true);
  const double pl_bh = path_loss_linear(geom_bh);
  const double pl_ac = path_loss_linear(geom_ac);
  const auto& bws = grid.bw_values;
  const auto& gpas = grid.gnb_paout_values;
  const auto& gnts = grid.gnb_ntx_values;
  const auto& npas = grid.ncr_paout_values;
  const auto& nnts = grid.ncr_ntx_values;
  const auto& nnrs = grid.ncr_nrx_values;
  const int np = static_cast<int>(npas.size());
  const auto inv_eta_ncr = inv_eta_table(model, npas);
  const auto allowed = eirp_allowed_counts(gpas, gnts, opts.eirp_cap_dbm);
  const auto kernel = kernels::indirect_batch();
  const double xi_pad = k.xi * k.p_active_dl;

  const std::uint64_t n_tasks =
      static_cast<std::uint64_t>(bws.size()) * gpas.size() * gnts.size();
  const std::uint64_t inner =
      static_cast<std::uint64_t>(nnrs.size()) * nnts.size() * np;

  thread_local std::vector<double> eff_buf, pow_buf;
  auto eval_task = [&](std::uint64_t task, Cand& best) {
    const std::size_t ign = task % gnts.size();
    const std::size_t rem = task / gnts.size();
    const std::size_t igp = rem % gpas.size();
    const std::size_t ib = rem / gpas.size();
    if (allowed[ign] <= static_cast<int>(igp)) return; // EIRP cap on the gNB
    const double bw = bws[ib];
    const double gp = gpas[igp];
    const double gntx_d = static_cast<double>(gnts[ign]);
    GnbConfig gnb{gnts[ign], gp, bw};
    const double gnb_total = gnb_power(gnb, model, k).total;
    const double den_bh = ((pl_bh * noise_ncr.noise_figure_linear) *
                           noise_ncr.thermal_noise_density_mw_per_hz) * bw;
    const double den_ac = ((pl_ac * noise_ue.noise_figure_linear) *
                           noise_ue.thermal_noise_density_mw_per_hz) * bw;
    const double noise_bw = (noise_ncr.noise_figure_linear *
                             noise_ncr.thermal_noise_density_mw_per_hz) * bw;
    const double num_base = gp * (gntx_d * gntx_d);
    eff_buf.resize(np);
    pow_buf.resize(np);
    for (std::size_t inr = 0; inr < nnrs.size(); ++inr) {
      const double snr_bh = (num_base * static_cast<double>(nnrs[inr])) / den_bh;
      const double rx = (static_cast<double>(nnrs[inr]) /
                         static_cast<double>(k.ref_n_rx)) *
                        (k.gamma * k.p_active_ul);
      const double ncr_base = k.p_const_ncr + rx;
      for (std::size_t int_ = 0; int_ < nnts.size(); ++int_) {
        const double ntxd_ncr = static_cast<double>(nnts[int_]);
        kernels::IndirectBatchCtx ctx;
        ctx.lim = ((ncr_template.max_gain_linear * (1.0 + snr_bh)) * noise_bw) /
                  ntxd_ncr;
        ctx.inv_eta_lim = 1.0 / pa_efficiency_norm(model, ctx.lim);
        ctx.snr_bh = snr_bh;
        ctx.ntx2_ncr = ntxd_ncr * ntxd_ncr;
        ctx.nrx_ue = static_cast<double>(ue.n_rx);
        ctx.den_ac = den_ac;
        ctx.ntxd_ncr = ntxd_ncr;
        ctx.ncr_ref = k.ncr_ref_tx_power_mw;
        ctx.xi_pad = xi_pad;
        ctx.ncr_base = ncr_base;
        ctx.gnb_total = gnb_total;
        kernel(npas.data(), inv_eta_ncr.data(), np, ctx, eff_buf.data(),
               pow_buf.data());
        const std::uint64_t idx_base =
            task * inner + (inr * nnts.size() + int_) * np;
        for (int ip = 0; ip < np; ++ip) {
          const double rate = shannon_rate(bw, eff_buf[ip]);
          const double ee = rate / pow_buf[ip];
          Cand c;
          c.ee = ee;
          c.power = pow_buf[ip];
          c.gnb_paout = gp;
          c.gnb_ntx = gnts[ign];
          c.bw = bw;
          c.ncr_paout = npas[ip];
          c.ncr_ntx = nnts[int_];
          c.ncr_nrx = nnrs[inr];
          c.idx = idx_base + ip;
          c.valid = true;
          if (better(c, best)) best = c;
        }
      }
    }
  };

  const Cand best =
      parallel_argmax(n_tasks, resolve_threads(opts.n_threads), eval_task);
  if (!best.valid)
    throw std::invalid_argument("optimize_indirect: no feasible configuration");

  LinkConfig c{best.bw,      best.gnb_paout, best.gnb_ntx,
               best.ncr_paout, best.ncr_ntx, best.ncr_nrx};
  OptResult r = evaluate_indirect(c, ue, geom_bh, geom_ac, noise_ncr, noise_ue,
                                  model, k, ncr_template);
  r.evaluations = grid.indirect_size();
  return r;
}

std::pair<double, double> relative_metrics(const OptResult& opt,
                                           const OptResult& baseline) {
  return {opt.ee / baseline.ee, opt.rate_bps / baseline.rate_bps};
}

LinkConfig baseline_config(const ParameterGrid& grid, bool indirect,
                           std::optional<double> gnb_paout_mw,
                           std::optional<double> ncr_paout_mw) {
  grid.validate(indirect);
  LinkConfig c;
  c.bw_hz = grid.bw_values.back();
  c.gnb_paout_mw = gnb_paout_mw.value_or(grid.gnb_paout_values.back());
  c.gnb_ntx = grid.gnb_ntx_values.back();
  if (indirect) {
    c.ncr_paout_max_mw = ncr_paout_mw.value_or(grid.ncr_paout_values.back());
    c.ncr_ntx = grid.ncr_ntx_values.back();
    c.ncr_nrx = grid.ncr_nrx_values.back();
  }
  return c;
}

} // namespace ncrsim
