#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ncrsim/config.hpp"
#include "ncrsim/ee_optimizer.hpp"
#include "ncrsim/kernels.hpp"
#include "ncrsim/linkbudget.hpp"
#include "ncrsim/powermodel.hpp"
#include "ncrsim/runner.hpp"
#include "ncrsim/scenarios.hpp"
#include "ncrsim/syslevel.hpp"
#include "ncrsim/units.hpp"

using namespace ncrsim;

namespace {

// Unit-style link: every SNR factor equals 1.
NoiseModel unit_noise() {
  NoiseModel n;
  n.noise_figure_linear = 1.0;
  n.thermal_noise_density_mw_per_hz = 1.0;
  return n;
}

LinkGeometry unit_geom() { return LinkGeometry{1.0, 2.0, 0.0}; }

double rel_err(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// Independent two-resistor form, the printed original of the rewrite used
// in the implementation.
double eff_snr_reciprocal_form(double bh, double ac) {
  return 1.0 / (1.0 / bh + (1.0 / ac) * (1.0 + bh) / bh);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("path loss anchors and monotonicity") {
  CHECK(path_loss_linear({1.0, 2.0, 61.4}) == doctest::Approx(db_to_linear(61.4)).epsilon(1e-12));
  CHECK(path_loss_linear({10.0, 2.0, 61.4}) == doctest::Approx(db_to_linear(81.4)).epsilon(1e-12));
  CHECK(path_loss_linear({100.0, 3.2, 61.4}) == doctest::Approx(db_to_linear(125.4)).epsilon(1e-12));
  double prev = 0.0;
  for (double d : {0.5, 1.0, 3.0, 10.0, 50.0, 200.0}) {
    const double pl = path_loss_linear({d, 3.2, 61.4});
    CHECK(pl > prev);
    prev = pl;
  }
  CHECK_THROWS_AS(path_loss_linear({0.0, 2.0, 61.4}), std::domain_error);
  CHECK_THROWS_AS(path_loss_linear({-3.0, 2.0, 61.4}), std::domain_error);
  CHECK_THROWS_AS(path_loss_linear({1.0, 0.0, 61.4}), std::domain_error);
}

TEST_CASE("direct SNR identity, scaling, dB-ledger oracle") {
  const GnbConfig unit{1, 1.0, 1.0};
  CHECK(snr_direct(unit, UeConfig{1}, unit_geom(), unit_noise()) == 1.0);

  GnbConfig g{64, 5.0, 100e6};
  const UeConfig ue{4};
  const LinkGeometry geom{30.0, 3.2, 61.4};
  const NoiseModel noise = NoiseModel::ue_default();
  const double base = snr_direct(g, ue, geom, noise);
  GnbConfig g2 = g;
  g2.n_tx = 128;
  CHECK(rel_err(snr_direct(g2, ue, geom, noise), 4.0 * base) < 1e-12);
  GnbConfig g3 = g;
  g3.paout_mw = 15.0;
  CHECK(rel_err(snr_direct(g3, ue, geom, noise), 3.0 * base) < 1e-12);

  // dB-domain ledger: every factor converted and summed independently.
  const GnbConfig paper{192, 10.0, 400e6};
  const LinkGeometry pl100{1.0, 2.0, 100.0};
  const double snr_db = mw_to_dbm(10.0) + 20.0 * std::log10(192.0) +
                        10.0 * std::log10(4.0) - 100.0 - 10.0 -
                        (-174.0 + 10.0 * std::log10(400e6));
  CHECK(rel_err(snr_direct(paper, UeConfig{4}, pl100, NoiseModel::ue_default()),
                db_to_linear(snr_db)) < 1e-12);
  CHECK_THROWS_AS(snr_direct(GnbConfig{1, 1.0, 0.0}, ue, geom, noise),
                  std::domain_error);
}

TEST_CASE("backhaul SNR mirrors Eq. 2") {
  const GnbConfig unit{1, 1.0, 1.0};
  NcrConfig ncr;
  ncr.n_rx = 1;
  CHECK(snr_backhaul(unit, ncr, unit_geom(), unit_noise()) == 1.0);
  ncr.n_rx = 2;
  CHECK(snr_backhaul(unit, ncr, unit_geom(), unit_noise()) == 2.0);

  const GnbConfig g{192, 10.0, 400e6};
  const LinkGeometry geom{94.0, 2.0, 61.4};
  NcrConfig n32;
  const double snr_db = mw_to_dbm(10.0) + 20.0 * std::log10(192.0) +
                        10.0 * std::log10(32.0) -
                        (61.4 + 20.0 * std::log10(94.0)) - 7.0 -
                        (-174.0 + 10.0 * std::log10(400e6));
  CHECK(rel_err(snr_backhaul(g, n32, geom, NoiseModel::ncr_default()),
                db_to_linear(snr_db)) < 1e-11);
}

TEST_CASE("NCR PA output clamp") {
  NcrConfig ncr;
  ncr.paout_max_mw = 10.0;
  const NoiseModel noise = NoiseModel::ncr_default();
  // High backhaul SNR: the gain limit is enormous, the cap binds.
  CHECK(ncr_pa_output(ncr, 1e6, noise, 400e6) == 10.0);

  // Zero SNR: exactly G_max * NF * N0 * BW / N_Tx.
  NcrConfig tight = ncr;
  tight.max_gain_linear = 1e3;
  const double expect = (1e3 * (noise.noise_figure_linear *
                                noise.thermal_noise_density_mw_per_hz) * 400e6) /
                        32.0;
  CHECK(expect < tight.paout_max_mw);
  CHECK(rel_err(ncr_pa_output(tight, 0.0, noise, 400e6), expect) < 1e-12);

  // Mid-regime substitution oracle.
  const double snr_bh = 7.5;
  const double lim = 1e3 * (1.0 + snr_bh) *
                     noise.noise_figure_linear *
                     noise.thermal_noise_density_mw_per_hz * 400e6 / 32.0;
  CHECK(rel_err(ncr_pa_output(tight, snr_bh, noise, 400e6),
                std::min(10.0, lim)) < 1e-12);

  // Monotone nondecreasing, never above the cap.
  double prev = -1.0;
  for (double s = 0.0; s <= 50.0; s += 0.5) {
    const double p = ncr_pa_output(tight, s, noise, 400e6);
    CHECK(p >= prev);
    CHECK(p <= tight.paout_max_mw);
    prev = p;
  }
  CHECK_THROWS_AS(ncr_pa_output(ncr, -1.0, noise, 400e6), std::domain_error);
}

TEST_CASE("access SNR mirrors direct") {
  NcrConfig ncr;
  ncr.n_tx = 1;
  CHECK(snr_access(ncr, UeConfig{1}, unit_geom(), unit_noise(), 1.0, 1.0) == 1.0);
  ncr.n_tx = 2;
  CHECK(snr_access(ncr, UeConfig{1}, unit_geom(), unit_noise(), 1.0, 1.0) == 4.0);
}

TEST_CASE("effective SNR forms, limits, bounds") {
  CHECK(rel_err(effective_snr(1.0, 1.0), 1.0 / 3.0) < 1e-15);
  CHECK(rel_err(effective_snr(1e12, 5.0), 5.0) < 1e-9);
  CHECK(rel_err(effective_snr(5.0, 1e12), 5.0) < 1e-9);
  CHECK(effective_snr(0.0, 3.0) == 0.0);
  CHECK(effective_snr(3.0, 0.0) == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logu(-3.0, 6.0);
  for (int i = 0; i < 2000; ++i) {
    const double bh = std::pow(10.0, logu(rng));
    const double ac = std::pow(10.0, logu(rng));
    const double e = effective_snr(bh, ac);
    CHECK(rel_err(e, eff_snr_reciprocal_form(bh, ac)) <= 1e-12);
    CHECK(e <= std::min(bh, ac));
    // strictly increasing in each hop
    CHECK(effective_snr(bh * 1.01, ac) > e);
    CHECK(effective_snr(bh, ac * 1.01) > e);
  }
}

TEST_CASE("PA efficiency normalization") {
  const PaEfficiencyModel fixed = PaEfficiencyModel::fixed_eff();
  CHECK(pa_efficiency_norm(fixed, 0.001) == 1.0);
  CHECK(pa_efficiency_norm(fixed, 123.0) == 1.0);

  PaEfficiencyModel varying = PaEfficiencyModel::varying_eff();
  CHECK(pa_efficiency_norm(varying, varying.paout_ref_mw) == 1.0);

  // Square-root curve: quarter power gives half efficiency.
  PaEfficiencyModel sqrt_model = varying;
  sqrt_model.curve_exponent = 0.5;
  CHECK(rel_err(pa_efficiency_norm(sqrt_model, sqrt_model.paout_ref_mw / 4.0), 0.5) < 1e-12);

  // Piecewise-linear table override, clamped at the endpoints.
  PaEfficiencyModel tab = varying;
  tab.table = {{1.0, 0.1}, {10.0, 0.4}};
  tab.paout_ref_mw = 10.0;
  CHECK(rel_err(pa_efficiency_norm(tab, 5.5), (0.1 + 0.3 * 0.5) / 0.4) < 1e-12);
  CHECK(rel_err(pa_efficiency_norm(tab, 0.01), 0.25) < 1e-12);
  CHECK(pa_efficiency_norm(tab, 100.0) == 1.0);
  CHECK_THROWS_AS(pa_efficiency_norm(varying, -1.0), std::domain_error);
}

TEST_CASE("gNB power toy substitutions") {
  const PowerConstants k;
  const PaEfficiencyModel fixed = PaEfficiencyModel::fixed_eff();

  const PowerBreakdown a = gnb_power({192, 10.0, 400e6}, fixed, k);
  CHECK(a.total == 36.0);
  CHECK(a.static_part == 10.0);
  CHECK(a.non_pa_part == 8.0);
  CHECK(a.pa_part == 18.0); // beta * P_PA, P_PA = 30
  CHECK(a.pa_part == k.beta * 30.0);
  CHECK(a.total == a.static_part + a.non_pa_part + a.pa_part);

  CHECK(gnb_power({96, 10.0, 400e6}, fixed, k).total == 27.0);
  const PowerBreakdown z = gnb_power({192, 0.0, 400e6}, fixed, k);
  CHECK(z.pa_part == 0.0);
  CHECK(z.total == 18.0);
}

TEST_CASE("NCR power toy substitutions") {
  const PowerConstants k;
  const PaEfficiencyModel fixed = PaEfficiencyModel::fixed_eff();
  NcrConfig ncr; // 32/32

  const PowerBreakdown a = ncr_power(ncr, 10.0, fixed, k, true);
  CHECK(a.static_part == 5.0);
  CHECK(a.non_pa_part == 8.0);  // P_Rx
  CHECK(a.pa_part == 24.0);     // P_Tx
  CHECK(a.total == 37.0);

  CHECK(ncr_power(ncr, 10.0, fixed, k, false).total == k.ncr_sleep_power);

  NcrConfig half_rx = ncr;
  half_rx.n_rx = 16;
  const PowerBreakdown b = ncr_power(half_rx, 10.0, fixed, k, true);
  CHECK(b.non_pa_part == 4.0);
  CHECK(b.total == 33.0);
  CHECK(b.pa_part == a.pa_part); // tx independent of n_rx
}

TEST_CASE("power model structural invariants") {
  const PowerConstants k;
  const PaEfficiencyModel fixed = PaEfficiencyModel::fixed_eff();
  const PaEfficiencyModel varying = PaEfficiencyModel::varying_eff();

  for (int ntx : {1, 48, 192})
    for (double p : {0.5, 2.0, 10.0}) {
      const auto b = gnb_power({ntx, p, 400e6}, varying, k);
      CHECK(b.total == b.static_part + b.non_pa_part + b.pa_part);
    }

  // fixed-eta bilinearity
  const double full = gnb_power({192, 8.0, 400e6}, fixed, k).pa_part;
  CHECK(rel_err(gnb_power({96, 8.0, 400e6}, fixed, k).pa_part, full / 2.0) < 1e-12);
  CHECK(rel_err(gnb_power({192, 4.0, 400e6}, fixed, k).pa_part, full / 2.0) < 1e-12);

  // varying-eta sublinearity: quarter power costs more than a quarter
  const double at10 = gnb_power({192, 10.0, 400e6}, varying, k).pa_part;
  const double at2_5 = gnb_power({192, 2.5, 400e6}, varying, k).pa_part;
  CHECK(at2_5 > at10 / 4.0);

  // NCR rx linear in n_rx
  NcrConfig a, b;
  a.n_rx = 8;
  b.n_rx = 24;
  CHECK(rel_err(ncr_power(b, 10.0, fixed, k, true).non_pa_part,
                3.0 * ncr_power(a, 10.0, fixed, k, true).non_pa_part) < 1e-12);
}

TEST_CASE("shannon rate anchors") {
  CHECK(shannon_rate(1.0, 1.0) == 1.0);
  CHECK(shannon_rate(400e6, 0.0) == 0.0);
  CHECK(rel_err(shannon_rate(400e6, 3.0), 8e8) < 1e-15);
  CHECK_THROWS_AS(shannon_rate(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(shannon_rate(1.0, -0.5), std::domain_error);
}

TEST_CASE("ee_direct composition examples") {
  const PowerConstants k;
  const PaEfficiencyModel fixed = PaEfficiencyModel::fixed_eff();
  const GnbConfig g{192, 10.0, 1.0};
  const UeConfig ue{4};
  const NoiseModel noise = NoiseModel::ue_default();

  // Reference path loss chosen so every SNR factor cancels: SNR == 1.
  LinkGeometry geom = unit_geom();
  geom.ref_pathloss_db = linear_to_db(
      (10.0 * 192.0 * 192.0 * 4.0) /
      (noise.noise_figure_linear * noise.thermal_noise_density_mw_per_hz * 1.0));
  const OptResult r = ee_direct(g, ue, geom, noise, fixed, k);
  CHECK(rel_err(r.snr, 1.0) < 1e-9);
  CHECK(rel_err(r.ee, 1.0 / 36.0) < 1e-9);

  // SNR = 0 via zero PA output.
  const OptResult z = ee_direct({192, 0.0, 1.0}, ue, geom, noise, fixed, k);
  CHECK(z.ee == 0.0);

  // Doubling BW (SNR halves) strictly increases EE.
  GnbConfig g2 = g;
  g2.bandwidth_hz = 2.0;
  CHECK(ee_direct(g2, ue, geom, noise, fixed, k).ee > r.ee);
}

TEST_CASE("ee_indirect composition example and bottleneck oracle") {
  const PowerConstants k;
  const PaEfficiencyModel fixed = PaEfficiencyModel::fixed_eff();
  const GnbConfig g{192, 10.0, 1.0};
  NcrConfig ncr; // 32/32, cap 10 mW
  const UeConfig ue{4};
  const NoiseModel unit = unit_noise();

  LinkGeometry geom_bh = unit_geom();
  geom_bh.ref_pathloss_db = linear_to_db(10.0 * 192.0 * 192.0 * 32.0); // SNR_BH=1
  LinkGeometry geom_ac = unit_geom();
  geom_ac.ref_pathloss_db = linear_to_db(10.0 * 32.0 * 32.0 * 4.0); // SNR_AC=1

  const OptResult r = ee_indirect(g, ncr, ue, geom_bh, geom_ac, unit, unit, fixed, k);
  CHECK(r.ncr_paout_actual_mw == 10.0); // gain limit far above the cap
  CHECK(rel_err(r.snr, 1.0 / 3.0) < 1e-9);
  CHECK(rel_err(r.total_power, 73.0) < 1e-12);
  CHECK(rel_err(r.ee, std::log2(4.0 / 3.0) / 73.0) < 1e-9);

  // SNR_BH x1000 with SNR_AC pinned by the PA cap: rate changes little.
  LinkGeometry strong_bh = geom_bh;
  strong_bh.ref_pathloss_db = geom_bh.ref_pathloss_db - 30.0;
  const OptResult r2 =
      ee_indirect(g, ncr, ue, strong_bh, geom_ac, unit, unit, fixed, k);
  CHECK(std::fabs(r2.rate_bps - shannon_rate(1.0, 1.0)) / shannon_rate(1.0, 1.0) <= 0.012);
  CHECK(r2.gnb_power.total == r.gnb_power.total);
}

namespace {

ParameterGrid random_grid(std::mt19937_64& rng, bool indirect) {
  auto pick_doubles = [&](int n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(u(rng));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  auto pick_ints = [&](int n, int lo, int hi) {
    std::uniform_int_distribution<int> u(lo, hi);
    std::vector<int> v;
    for (int i = 0; i < n; ++i) v.push_back(u(rng));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  ParameterGrid g;
  g.bw_values = pick_doubles(3, 1e6, 400e6);
  g.gnb_paout_values = pick_doubles(5, 0.5, 10.0);
  g.gnb_ntx_values = pick_ints(5, 1, 192);
  if (indirect) {
    g.ncr_paout_values = pick_doubles(3, 0.5, 10.0);
    g.ncr_ntx_values = pick_ints(3, 1, 32);
    g.ncr_nrx_values = pick_ints(3, 1, 32);
  } else {
    g.ncr_paout_values = {1.0};
    g.ncr_ntx_values = {1};
    g.ncr_nrx_values = {1};
  }
  return g;
}

// Sequential argmax oracle with the documented tie-break, built only on the
// single-configuration evaluators.
OptResult oracle_direct(const ParameterGrid& g, const LinkGeometry& geom,
                        const NoiseModel& noise, const UeConfig& ue,
                        const PaEfficiencyModel& m, const PowerConstants& k) {
  OptResult best;
  bool have = false;
  for (double bw : g.bw_values)
    for (int ntx : g.gnb_ntx_values)
      for (double p : g.gnb_paout_values) {
        const OptResult r =
            evaluate_direct({bw, p, ntx, 0, 0, 0}, ue, geom, noise, m, k);
        if (!have || r.ee > best.ee ||
            (r.ee == best.ee && r.total_power < best.total_power)) {
          best = r;
          have = true;
        }
      }
  return best;
}

OptResult oracle_indirect(const ParameterGrid& g, const LinkGeometry& geom_bh,
                          const LinkGeometry& geom_ac, const NoiseModel& nn,
                          const NoiseModel& nu, const UeConfig& ue,
                          const PaEfficiencyModel& m, const PowerConstants& k) {
  OptResult best;
  bool have = false;
  for (double bw : g.bw_values)
    for (double gp : g.gnb_paout_values)
      for (int gn : g.gnb_ntx_values)
        for (int nr : g.ncr_nrx_values)
          for (int nt : g.ncr_ntx_values)
            for (double np : g.ncr_paout_values) {
              const OptResult r = evaluate_indirect({bw, gp, gn, np, nt, nr},
                                                    ue, geom_bh, geom_ac, nn,
                                                    nu, m, k);
              if (!have || r.ee > best.ee ||
                  (r.ee == best.ee && r.total_power < best.total_power)) {
                best = r;
                have = true;
              }
            }
  return best;
}

bool same_config(const LinkConfig& a, const LinkConfig& b) {
  return a.bw_hz == b.bw_hz && a.gnb_paout_mw == b.gnb_paout_mw &&
         a.gnb_ntx == b.gnb_ntx && a.ncr_paout_max_mw == b.ncr_paout_max_mw &&
         a.ncr_ntx == b.ncr_ntx && a.ncr_nrx == b.ncr_nrx;
}

} // namespace

TEST_CASE("optimize_direct equals sequential oracle bitwise") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ud(5.0, 150.0);
  const UeConfig ue{4};
  const NoiseModel noise = NoiseModel::ue_default();
  const PowerConstants k;
  for (int trial = 0; trial < 8; ++trial) {
    const ParameterGrid g = random_grid(rng, false);
    const LinkGeometry geom{ud(rng), 3.2, 61.4};
    const PaEfficiencyModel m = (trial % 2) ? PaEfficiencyModel::varying_eff()
                                            : PaEfficiencyModel::fixed_eff();
    const OptResult want = oracle_direct(g, geom, noise, ue, m, k);
    for (int threads : {1, 3}) {
      OptOptions opts;
      opts.n_threads = threads;
      const OptResult got = optimize_direct(g, geom, noise, ue, m, k, opts);
      CHECK(same_config(got.best, want.best));
      CHECK(got.ee == want.ee); // bitwise
      CHECK(got.total_power == want.total_power);
      CHECK(got.evaluations == g.direct_size());
    }
  }
}

TEST_CASE("optimize_indirect equals sequential oracle bitwise") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> ud(5.0, 100.0);
  const UeConfig ue{4};
  const NoiseModel nu = NoiseModel::ue_default();
  const NoiseModel nn = NoiseModel::ncr_default();
  const PowerConstants k;
  for (int trial = 0; trial < 6; ++trial) {
    const ParameterGrid g = random_grid(rng, true);
    const LinkGeometry geom_bh{94.0, 2.0, 61.4};
    const LinkGeometry geom_ac{ud(rng), 3.2, 61.4};
    const PaEfficiencyModel m = (trial % 2) ? PaEfficiencyModel::varying_eff()
                                            : PaEfficiencyModel::fixed_eff();
    const OptResult want = oracle_indirect(g, geom_bh, geom_ac, nn, nu, ue, m, k);
    for (int threads : {1, 4}) {
      OptOptions opts;
      opts.n_threads = threads;
      const OptResult got =
          optimize_indirect(g, geom_bh, geom_ac, nn, nu, ue, m, k, opts);
      CHECK(same_config(got.best, want.best));
      CHECK(got.ee == want.ee);
      CHECK(got.total_power == want.total_power);
      CHECK(got.evaluations == g.indirect_size());
    }
  }
}

TEST_CASE("optimizer edge cases: singleton, empty, EIRP cap, max BW") {
  const UeConfig ue{4};
  const NoiseModel noise = NoiseModel::ue_default();
  const PowerConstants k;
  const PaEfficiencyModel m = PaEfficiencyModel::fixed_eff();
  const LinkGeometry geom{40.0, 3.2, 61.4};

  ParameterGrid single;
  single.bw_values = {200e6};
  single.gnb_paout_values = {3.0};
  single.gnb_ntx_values = {64};
  const OptResult s = optimize_direct(single, geom, noise, ue, m, k);
  CHECK(s.best.bw_hz == 200e6);
  CHECK(s.best.gnb_paout_mw == 3.0);
  CHECK(s.best.gnb_ntx == 64);

  ParameterGrid empty;
  CHECK_THROWS_AS(optimize_direct(empty, geom, noise, ue, m, k),
                  std::invalid_argument);

  ParameterGrid g = ParameterGrid::link_level_default();
  OptOptions cap;
  cap.eirp_cap_dbm = 40.0;
  const OptResult capped = optimize_direct(g, geom, noise, ue, m, k, cap);
  CHECK(mw_to_dbm(capped.best.gnb_paout_mw) +
            20.0 * std::log10(static_cast<double>(capped.best.gnb_ntx)) <=
        40.0 + 1e-9);
  OptOptions impossible;
  impossible.eirp_cap_dbm = -100.0;
  CHECK_THROWS_AS(optimize_direct(g, geom, noise, ue, m, k, impossible),
                  std::invalid_argument);

  CHECK(optimize_direct(g, geom, noise, ue, m, k).best.bw_hz == 400e6);
}

TEST_CASE("fixed-eta mechanism: equal n*p favors max n") {
  // Among equal n_tx*paout products, SNR grows with n_tx (extra n factor).
  const UeConfig ue{4};
  const NoiseModel noise = NoiseModel::ue_default();
  const LinkGeometry geom{25.0, 3.2, 61.4};
  double snr_prev = -1.0;
  for (int n : {8, 16, 32, 64, 128}) {
    const double p = 640.0 / n; // constant radiated budget
    const double snr = snr_direct({n, p, 400e6}, ue, geom, noise);
    CHECK(snr > snr_prev);
    snr_prev = snr;
  }
}

TEST_CASE("relative metrics and baseline config") {
  const ParameterGrid g = ParameterGrid::link_level_default();
  const LinkConfig b = baseline_config(g, true);
  CHECK(b.bw_hz == 400e6);
  CHECK(b.gnb_ntx == 192);
  CHECK(b.ncr_ntx == 32);
  CHECK(b.ncr_nrx == 32);
  CHECK(rel_err(b.gnb_paout_mw, 10.0) < 1e-12);
  const LinkConfig o = baseline_config(g, true, dbm_to_mw(5.167), dbm_to_mw(13.0));
  CHECK(rel_err(o.gnb_paout_mw, dbm_to_mw(5.167)) < 1e-12);
  CHECK(rel_err(o.ncr_paout_max_mw, dbm_to_mw(13.0)) < 1e-12);

  OptResult same;
  same.ee = 5.0;
  same.rate_bps = 7.0;
  const auto [re, rr] = relative_metrics(same, same);
  CHECK(re == 1.0);
  CHECK(rr == 1.0);
}

TEST_CASE("batch kernels match module composition bitwise") {
  const PowerConstants k;
  const UeConfig ue{4};
  const NoiseModel noise = NoiseModel::ue_default();
  const LinkGeometry geom{37.0, 3.2, 61.4};
  const PaEfficiencyModel m = PaEfficiencyModel::varying_eff();

  std::vector<double> paout;
  for (double d = 0.0; d <= 10.0; d += 0.5) paout.push_back(dbm_to_mw(d));
  std::vector<double> inv_eta;
  for (double p : paout) inv_eta.push_back(1.0 / pa_efficiency_norm(m, p));
  const int n = static_cast<int>(paout.size());

  const double pl = path_loss_linear(geom);
  kernels::DirectBatchCtx ctx;
  const int ntx = 144;
  ctx.ntx2 = double(ntx) * ntx;
  ctx.nrx = 4;
  ctx.den = ((pl * noise.noise_figure_linear) *
             noise.thermal_noise_density_mw_per_hz) * 400e6;
  ctx.ntx_d = ntx;
  ctx.ref_tx = k.ref_tx_power_per_ru_mw;
  ctx.diff = k.p_active_dl - k.p_ms_gnb;
  ctx.beta = k.beta;
  ctx.base = k.p_ms_gnb + k.alpha * k.p_non_pa;

  std::vector<double> snr_s(n), pow_s(n), snr_v(n), pow_v(n);
  kernels::direct_batch_scalar(paout.data(), inv_eta.data(), n, ctx,
                               snr_s.data(), pow_s.data());
  for (int i = 0; i < n; ++i) {
    const OptResult r = evaluate_direct({400e6, paout[i], ntx, 0, 0, 0}, ue,
                                        geom, noise, m, k);
    CHECK(snr_s[i] == r.snr);              // bitwise
    CHECK(pow_s[i] == r.total_power);
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (std::string(kernels::active_impl()) == "avx2") {
    kernels::direct_batch_avx2(paout.data(), inv_eta.data(), n, ctx,
                               snr_v.data(), pow_v.data());
    for (int i = 0; i < n; ++i) {
      CHECK(snr_v[i] == snr_s[i]);
      CHECK(pow_v[i] == pow_s[i]);
    }
  }
#endif
}

TEST_CASE("indirect batch kernel matches ee_indirect bitwise") {
  const PowerConstants k;
  const UeConfig ue{4};
  const NoiseModel nu = NoiseModel::ue_default();
  const NoiseModel nn = NoiseModel::ncr_default();
  const LinkGeometry geom_bh{94.0, 2.0, 61.4};
  const LinkGeometry geom_ac{24.0, 3.2, 61.4};
  const PaEfficiencyModel m = PaEfficiencyModel::varying_eff();
  const GnbConfig gnb{160, 4.0, 400e6};
  const int ncr_ntx = 24, ncr_nrx = 12;

  std::vector<double> pmax;
  for (double d = 0.0; d <= 10.0; d += 1.0) pmax.push_back(dbm_to_mw(d));
  std::vector<double> inv_eta;
  for (double p : pmax) inv_eta.push_back(1.0 / pa_efficiency_norm(m, p));
  const int n = static_cast<int>(pmax.size());

  NcrConfig tpl;
  const double snr_bh = snr_backhaul(gnb, NcrConfig{ncr_ntx, ncr_nrx, 1.0,
                                                    tpl.max_gain_linear},
                                     geom_bh, nn);
  kernels::IndirectBatchCtx ctx;
  const double noise_bw = (nn.noise_figure_linear *
                           nn.thermal_noise_density_mw_per_hz) * 400e6;
  ctx.lim = ((tpl.max_gain_linear * (1.0 + snr_bh)) * noise_bw) / double(ncr_ntx);
  ctx.inv_eta_lim = 1.0 / pa_efficiency_norm(m, ctx.lim);
  ctx.snr_bh = snr_bh;
  ctx.ntx2_ncr = double(ncr_ntx) * ncr_ntx;
  ctx.nrx_ue = 4;
  ctx.den_ac = ((path_loss_linear(geom_ac) * nu.noise_figure_linear) *
                nu.thermal_noise_density_mw_per_hz) * 400e6;
  ctx.ntxd_ncr = ncr_ntx;
  ctx.ncr_ref = k.ncr_ref_tx_power_mw;
  ctx.xi_pad = k.xi * k.p_active_dl;
  ctx.ncr_base = k.p_const_ncr +
                 (double(ncr_nrx) / k.ref_n_rx) * (k.gamma * k.p_active_ul);
  ctx.gnb_total = gnb_power(gnb, m, k).total;

  std::vector<double> eff_s(n), pow_s(n);
  kernels::indirect_batch_scalar(pmax.data(), inv_eta.data(), n, ctx,
                                 eff_s.data(), pow_s.data());
  for (int i = 0; i < n; ++i) {
    const OptResult r = evaluate_indirect(
        {400e6, 4.0, 160, pmax[i], ncr_ntx, ncr_nrx}, ue, geom_bh, geom_ac,
        nn, nu, m, k);
    CHECK(eff_s[i] == r.snr);
    CHECK(pow_s[i] == r.total_power);
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (std::string(kernels::active_impl()) == "avx2") {
    std::vector<double> eff_v(n), pow_v(n);
    kernels::indirect_batch_avx2(pmax.data(), inv_eta.data(), n, ctx,
                                 eff_v.data(), pow_v.data());
    for (int i = 0; i < n; ++i) {
      CHECK(eff_v[i] == eff_s[i]);
      CHECK(pow_v[i] == pow_s[i]);
    }
  }
#endif
}

namespace {

SweepSpec small_sweep(std::vector<double> distances) {
  SweepSpec s = SweepSpec::defaults();
  s.distances_m = std::move(distances);
  ParameterGrid g;
  g.bw_values = {100e6, 400e6};
  g.gnb_paout_values = {dbm_to_mw(0), dbm_to_mw(2), dbm_to_mw(4), dbm_to_mw(6),
                        dbm_to_mw(8), dbm_to_mw(10)};
  g.gnb_ntx_values = {1, 48, 96, 144, 192};
  g.ncr_paout_values = {dbm_to_mw(0), dbm_to_mw(5), dbm_to_mw(10)};
  g.ncr_ntx_values = {8, 16, 32};
  g.ncr_nrx_values = {8, 16, 32};
  s.grid = g;
  return s;
}

} // namespace

TEST_CASE("direct sweep: dominance, far convergence, singleton grid") {
  SweepSpec s = small_sweep({10, 40, 120, 280});
  const auto rows = direct_sweep(s);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) CHECK(r.rel_ee >= 1.0);
  CHECK(rows.back().rel_ee == 1.0);
  CHECK(rows.back().rel_rate == 1.0);
  CHECK(rows.front().rel_ee > 1.0);
  CHECK(rows.front().rel_rate > 0.7); // trend band under toy constants
  CHECK(rows.front().rel_rate <= 1.0);

  SweepSpec single = s;
  single.grid.bw_values = {400e6};
  single.grid.gnb_paout_values = {10.0};
  single.grid.gnb_ntx_values = {192};
  for (const auto& r : direct_sweep(single)) {
    CHECK(r.rel_ee == 1.0);
    CHECK(r.rel_rate == 1.0);
  }
  SweepSpec bad = s;
  bad.distances_m = {10.0, 5.0};
  CHECK_THROWS_AS(direct_sweep(bad), std::invalid_argument);
}

TEST_CASE("indirect sweep: dominance and composition oracle") {
  SweepSpec s = small_sweep({15, 60});
  const auto rows = indirect_sweep(s);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) CHECK(r.rel_ee >= 1.0);

  const LinkGeometry geom_bh{s.d_bh_m, s.exponent_bh, s.ref_pathloss_db};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const LinkGeometry geom_ac{s.distances_m[i], s.exponent_access,
                               s.ref_pathloss_db};
    const OptResult manual =
        optimize_indirect(s.grid, geom_bh, geom_ac, s.noise_ncr, s.noise_ue,
                          s.ue, s.pa_model, s.constants, s.opt, s.ncr_template);
    CHECK(rows[i].opt.ee == manual.ee);
    CHECK(same_config(rows[i].opt.best, manual.best));
  }
}

TEST_CASE("strategy extraction orderings") {
  // Fixed eta, direct: the PA output departs first (at the larger distance).
  SweepSpec fixed = small_sweep({3, 8, 20, 60, 150, 280});
  auto ev_fixed = extract_strategy(direct_sweep(fixed));
  REQUIRE(!ev_fixed.empty());
  CHECK(ev_fixed.front().param == SweepParam::gnb_paout);
  for (const auto& e : ev_fixed)
    if (e.param == SweepParam::gnb_ntx)
      CHECK(e.distance_m <= ev_fixed.front().distance_m);

  SweepSpec varying = fixed;
  varying.pa_model = PaEfficiencyModel::varying_eff();
  auto ev_var = extract_strategy(direct_sweep(varying));
  REQUIRE(!ev_var.empty());
  CHECK(ev_var.front().param == SweepParam::gnb_ntx);

  // All-baseline sweep: singleton grid can never depart.
  SweepSpec single = fixed;
  single.grid.bw_values = {400e6};
  single.grid.gnb_paout_values = {10.0};
  single.grid.gnb_ntx_values = {192};
  CHECK(extract_strategy(direct_sweep(single)).empty());
}

TEST_CASE("coverage range inversion") {
  const NoiseModel noise = NoiseModel::ue_default();
  const LinkGeometry tpl{1.0, 2.0, 61.4};
  const double s1 = snr_from_pathloss(10.0, 192, 4, path_loss_linear(tpl), noise, 400e6);

  CHECK(rel_err(coverage_range(10.0, 192, 4, tpl, noise, 400e6, s1), 1.0) < 1e-12);

  const double d = coverage_range(10.0, 192, 4, tpl, noise, 400e6, 1.0);
  LinkGeometry at_d = tpl;
  at_d.distance_m = d;
  CHECK(rel_err(snr_from_pathloss(10.0, 192, 4, path_loss_linear(at_d), noise, 400e6),
                1.0) < 1e-9);

  // halving target with exponent 2 stretches range by 10^(3/20)
  const double d_half = coverage_range(10.0, 192, 4, tpl, noise, 400e6, db_to_linear(-3.0));
  CHECK(rel_err(d_half / d, std::pow(10.0, 3.0 / 20.0)) < 1e-9);

  CHECK_THROWS_AS(coverage_range(1e-9, 1, 1, tpl, noise, 400e6, 1e12),
                  std::domain_error);
}

TEST_CASE("NCR coverage range") {
  NcrConfig ncr;
  const LinkGeometry tpl{1.0, 3.2, 61.4};
  const NoiseModel nu = NoiseModel::ue_default();
  const NoiseModel nn = NoiseModel::ncr_default();
  const double d =
      ncr_coverage_range(ncr, 1e4, UeConfig{4}, tpl, nn, nu, 400e6, 1.0);
  CHECK(d > 1.0);
  // solved point satisfies effective_snr == target
  LinkGeometry at_d = tpl;
  at_d.distance_m = d;
  const double pa = ncr_pa_output(ncr, 1e4, nn, 400e6);
  const double ac = snr_access(ncr, UeConfig{4}, at_d, nu, pa, 400e6);
  CHECK(rel_err(effective_snr(1e4, ac), 1.0) < 1e-9);

  NcrConfig off = ncr;
  off.paout_max_mw = 0.0;
  CHECK(ncr_coverage_range(off, 1e4, UeConfig{4}, tpl, nn, nu, 400e6, 1.0) == 0.0);
  CHECK(ncr_coverage_range(ncr, 0.5, UeConfig{4}, tpl, nn, nu, 400e6, 1.0) == 0.0);
}

TEST_CASE("compare_sc_mc properties") {
  const CompareSpec spec = CompareSpec::defaults();
  const CompareResult res = compare_sc_mc(spec);
  CHECK(res.d_ac > 0.0);
  CHECK(res.mc_ntx > 0);
  CHECK(mw_to_dbm(res.mc_paout_mw) <= spec.mc_paout_cap_dbm + 1e-9);
  bool any_ncr = false;
  for (const auto& r : res.rows) {
    if (r.via_ncr) {
      any_ncr = true;
      CHECK(r.rate_sc_path / r.rate_mc > 1.0);
      CHECK(r.ee_sc_path / r.ee_mc > 1.0);
    } else {
      CHECK(r.rate_sc_path / r.rate_mc < 1.0);
    }
  }
  CHECK(any_ncr);

  // Degenerate comparison: candidate set = the SC itself, NCR disabled.
  CompareSpec degen = spec;
  degen.ncr.paout_max_mw = 0.0;
  degen.mc_ntx_candidates = {degen.sc.n_tx};
  degen.mc_paout_cap_dbm = mw_to_dbm(degen.sc.paout_mw) + 0.5;
  degen.mc_constants = degen.constants;
  const CompareResult dr = compare_sc_mc(degen);
  CHECK(dr.d_ac == 0.0);
  CHECK(dr.mc_ntx == degen.sc.n_tx);
  CHECK(rel_err(dr.mc_paout_mw, degen.sc.paout_mw) < 1e-9);
  for (const auto& r : dr.rows) {
    CHECK(!r.via_ncr);
    CHECK(rel_err(r.rate_sc_path, r.rate_mc) < 1e-9);
    CHECK(rel_err(r.ee_sc_path, r.ee_mc) < 1e-9);
  }

  CompareSpec infeasible = spec;
  infeasible.mc_ntx_candidates = {1};
  infeasible.mc_paout_cap_dbm = 0.0;
  CHECK_THROWS_AS(compare_sc_mc(infeasible), std::runtime_error);
}

TEST_CASE("deployment generation determinism and counts") {
  DeploymentParams p;
  const Deployment a = generate_deployment(p, 9);
  const Deployment b = generate_deployment(p, 9);
  const Deployment c = generate_deployment(p, 10);
  CHECK(a.sites.size() == 20);
  CHECK(a.ncrs.size() == 62);
  CHECK(a.ues.size() == 600);
  REQUIRE(a.ues.size() == b.ues.size());
  for (std::size_t i = 0; i < a.ues.size(); ++i) {
    CHECK(a.ues[i].x == b.ues[i].x);
    CHECK(a.ues[i].y == b.ues[i].y);
  }
  bool moved = false;
  for (std::size_t i = 0; i < a.ues.size(); ++i)
    if (a.ues[i].x != c.ues[i].x || a.ues[i].y != c.ues[i].y) moved = true;
  CHECK(moved);
  CHECK(c.ues.size() == a.ues.size());

  DeploymentParams bad = p;
  bad.n_ncrs = 20 * 3 * bad.max_ncrs_per_sector + 1;
  CHECK_THROWS_AS(generate_deployment(bad, 1), std::invalid_argument);
}

TEST_CASE("deployment file round trip and validation") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ncrsim_test_dep";
  fs::create_directories(dir);
  const std::string path = (dir / "dep.json").string();

  DeploymentParams p;
  p.n_sites = 3;
  p.n_ncrs = 5;
  p.n_ues = 17;
  const Deployment a = generate_deployment(p, 4);
  save_deployment(a, path);
  const Deployment b = load_deployment(path);
  CHECK(b.sites.size() == a.sites.size());
  CHECK(b.ncrs.size() == a.ncrs.size());
  CHECK(b.ues.size() == a.ues.size());
  for (std::size_t i = 0; i < a.ncrs.size(); ++i) {
    CHECK(b.ncrs[i].x == a.ncrs[i].x);
    CHECK(b.ncrs[i].sector_id == a.ncrs[i].sector_id);
  }
  CHECK(b.seed == a.seed);

  // Hand-built fixture.
  {
    std::ofstream out(path, std::ios::binary);
    out << R"({"area_m":[100,100],
      "sites":[{"id":0,"x":50,"y":50}],
      "ncrs":[{"id":0,"x":70,"y":60,"sector_id":0}],
      "ues":[{"id":0,"x":75,"y":62},{"id":1,"x":20,"y":20}],
      "seed":3})";
  }
  const Deployment f = load_deployment(path);
  CHECK(f.sites.size() == 1);
  CHECK(f.ncrs[0].sector_id == 0);
  CHECK(f.ues[1].x == 20.0);

  {
    std::ofstream out(path, std::ios::binary);
    out << R"({"area_m":[100,100],"sites":[{"id":0,"x":50,"y":50}],
      "ncrs":[{"id":0,"x":70,"y":60,"sector_id":9}],"ues":[],"seed":0})";
  }
  CHECK_THROWS(load_deployment(path));
}

TEST_CASE("UE association paths") {
  Deployment dep;
  dep.area_w_m = dep.area_h_m = 400.0;
  dep.sites = {{0, 100.0, 100.0}};
  // sector 0 wedge is [0,120) degrees from the site
  dep.ncrs = {{0, 180.0, 160.0, 0}};
  dep.ues = {{0, 185.0, 164.0}, {1, 103.0, 104.0}};
  SystemConfig cfg;

  const Association with = associate_ues(dep, cfg, true);
  CHECK(with.entries[0].path == PathKind::via_ncr);
  CHECK(with.entries[0].ncr_id == 0);
  CHECK(with.entries[1].path == PathKind::direct);
  CHECK(with.entries[1].sector_id == 0);

  const Association without = associate_ues(dep, cfg, false);
  CHECK(without.entries[0].path == PathKind::direct);
  CHECK(without.entries[1].path == PathKind::direct);
}

TEST_CASE("sector evaluation fixture and mode behavior") {
  Deployment dep;
  dep.area_w_m = dep.area_h_m = 400.0;
  dep.sites = {{0, 100.0, 100.0}};
  dep.ncrs = {{0, 180.0, 160.0, 0}};
  dep.ues = {{0, 185.0, 164.0}, {1, 103.0, 104.0}};
  SystemConfig cfg;
  const Association assoc = associate_ues(dep, cfg, true);
  REQUIRE(assoc.entries[0].path == PathKind::via_ncr);
  REQUIRE(assoc.entries[1].path == PathKind::direct);

  const SectorReport rep =
      evaluate_sector(dep, assoc, 0, NcrMode::always_on, OptMode::baseline, cfg);
  CHECK(rep.n_ues_direct == 1);
  CHECK(rep.n_ues_indirect == 1);

  // Hand-composed oracle from the core modules.
  const double d_bh = std::hypot(80.0, 60.0);
  const double d_ac = std::hypot(5.0, 4.0);
  const double d_direct = std::hypot(3.0, 4.0);
  const LinkGeometry gbh{d_bh, cfg.exponent_bh, cfg.ref_pathloss_db};
  const LinkGeometry gac{d_ac, cfg.exponent_access, cfg.ref_pathloss_db};
  const LinkGeometry gd{d_direct, cfg.exponent_access, cfg.ref_pathloss_db};
  const double snr_bh = snr_backhaul(cfg.gnb_baseline, cfg.ncr_baseline, gbh, cfg.noise_ncr);
  const double pa = ncr_pa_output(cfg.ncr_baseline, snr_bh, cfg.noise_ncr,
                                  cfg.gnb_baseline.bandwidth_hz);
  const double snr_r = effective_snr(
      snr_bh, snr_access(cfg.ncr_baseline, cfg.ue, gac, cfg.noise_ue, pa,
                         cfg.gnb_baseline.bandwidth_hz));
  const double rate_r = shannon_rate(cfg.gnb_baseline.bandwidth_hz, snr_r);
  const double rate_d = shannon_rate(
      cfg.gnb_baseline.bandwidth_hz,
      snr_direct(cfg.gnb_baseline, cfg.ue, gd, cfg.noise_ue));
  CHECK(rep.ue_rates[0] == rate_r);
  CHECK(rep.ue_rates[1] == rate_d);
  CHECK(rel_err(rep.throughput_bps, (rate_r + rate_d) / 2.0) < 1e-15);
  const double power_expect =
      gnb_power(cfg.gnb_baseline, cfg.pa_model, cfg.constants).total +
      ncr_power(cfg.ncr_baseline, pa, cfg.pa_model, cfg.constants, true).total;
  CHECK(rel_err(rep.power, power_expect) < 1e-15);
  CHECK(rel_err(rep.ee * rep.power, rep.throughput_bps) < 1e-12);

  // Smart mode with a serving NCR equals always_on here.
  const SectorReport smart =
      evaluate_sector(dep, assoc, 0, NcrMode::smart, OptMode::baseline, cfg);
  CHECK(smart.power == rep.power);

  // NCR with zero indirect UEs sleeps in smart mode.
  Deployment lone = dep;
  lone.ues = {{0, 103.0, 104.0}};
  const Association la = associate_ues(lone, cfg, true);
  const SectorReport sm =
      evaluate_sector(lone, la, 0, NcrMode::smart, OptMode::baseline, cfg);
  const SectorReport on =
      evaluate_sector(lone, la, 0, NcrMode::always_on, OptMode::baseline, cfg);
  const SectorReport off =
      evaluate_sector(lone, la, 0, NcrMode::no_repeaters, OptMode::baseline, cfg);
  CHECK(sm.power == off.power + cfg.constants.ncr_sleep_power);
  CHECK(on.power > sm.power);

  // Sector without NCRs: always_on == no_repeaters.
  Deployment nodep = dep;
  nodep.ncrs.clear();
  const Association na = associate_ues(nodep, cfg, true);
  const SectorReport a1 =
      evaluate_sector(nodep, na, 0, NcrMode::always_on, OptMode::baseline, cfg);
  const SectorReport a2 =
      evaluate_sector(nodep, na, 0, NcrMode::no_repeaters, OptMode::baseline, cfg);
  CHECK(a1.power == a2.power);
  CHECK(a1.throughput_bps == a2.throughput_bps);
}

TEST_CASE("run_system orderings on a small deployment") {
  DeploymentParams p;
  p.n_sites = 4;
  p.n_ncrs = 10;
  p.n_ues = 50;
  p.area_w_m = p.area_h_m = 500.0;
  const Deployment dep = generate_deployment(p, 5);
  SystemConfig cfg;
  const SystemReport rep = run_system(dep, cfg);
  REQUIRE(rep.regimes.size() == 6);

  auto find = [&](OptMode om, NcrMode m) -> const RegimeResult& {
    for (const auto& r : rep.regimes)
      if (r.mode == m && r.opt_mode == om) return r;
    throw std::logic_error("regime missing");
  };
  const auto& on = find(OptMode::baseline, NcrMode::always_on);
  const auto& smart = find(OptMode::baseline, NcrMode::smart);
  const auto& none = find(OptMode::baseline, NcrMode::no_repeaters);
  for (std::size_t s = 0; s < on.sectors.size(); ++s) {
    CHECK(on.sectors[s].power >= smart.sectors[s].power);
    CHECK(smart.sectors[s].power >= none.sectors[s].power);
  }
  // per-UE link rates dominate pointwise on the shared set
  REQUIRE(on.ue_rate.size() == none.ue_rate.size());
  for (std::size_t i = 0; i < on.ue_rate.size(); ++i)
    CHECK(on.ue_rate[i] >= none.ue_rate[i]);
  // optimizer dominance per sector
  for (NcrMode m : {NcrMode::always_on, NcrMode::smart, NcrMode::no_repeaters}) {
    const auto& base = find(OptMode::baseline, m);
    const auto& opt = find(OptMode::ee_optimal, m);
    for (std::size_t s = 0; s < base.sectors.size(); ++s)
      CHECK(opt.sectors[s].ee >= base.sectors[s].ee * (1.0 - 1e-12));
  }
  // ee identity
  for (const auto& r : rep.regimes)
    for (const auto& s : r.sectors)
      if (s.power > 0.0)
        CHECK(std::fabs(s.ee * s.power - s.throughput_bps) <=
              1e-12 * std::max(1.0, s.throughput_bps));
}

TEST_CASE("config parsing: defaults, overrides, strictness") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ncrsim_test_cfg";
  fs::create_directories(dir);

  auto write = [&](const char* name, const std::string& body) {
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << body;
    return p.string();
  };

  // empty object: all defaults
  CliOverrides o;
  o.config_path = write("empty.json", "{}");
  const RunConfig cfg = make_run_config(Study::direct_sweep, o);
  CHECK(cfg.sweep.d_bh_m == 94.0);
  CHECK(cfg.sweep.grid.bw_values.back() == 400e6);
  CHECK(cfg.seed == 1);

  // flag beats file
  CliOverrides o2;
  o2.config_path = write("seeded.json", R"({"seed": 7})");
  CHECK(make_run_config(Study::system, o2).seed == 7);
  o2.seed = 99;
  CHECK(make_run_config(Study::system, o2).seed == 99);

  CliOverrides bad;
  bad.config_path = write("unknown.json", R"({"grid": {"bogus": [1]}})");
  CHECK_THROWS_WITH_AS(make_run_config(Study::system, bad),
                       doctest::Contains("$.grid.bogus"), std::runtime_error);

  CliOverrides range;
  range.config_path = write("range.json", R"({"gnb": {"paout_dbm": 99}})");
  CHECK_THROWS_WITH_AS(make_run_config(Study::system, range),
                       doctest::Contains("$.gnb.paout_dbm"), std::runtime_error);

  CliOverrides val;
  val.config_path = write("vals.json",
                          R"({"pa_model":"varying","d_bh_m":50,
                              "noise":{"nf_ue_db":9},
                              "grid":{"gnb_ntx":[2,64]}})");
  const RunConfig c2 = make_run_config(Study::indirect_sweep, val);
  CHECK(c2.sweep.pa_model.kind == PaKind::varying);
  CHECK(c2.sweep.d_bh_m == 50.0);
  CHECK(rel_err(c2.sweep.noise_ue.noise_figure_linear, db_to_linear(9.0)) < 1e-12);
  CHECK(c2.sweep.grid.gnb_ntx_values == std::vector<int>{2, 64});
}

TEST_CASE("runner reproducibility: identical config gives identical bytes") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ncrsim_test_run";
  fs::create_directories(dir);

  RunConfig cfg;
  cfg.study = Study::direct_sweep;
  cfg.sweep = small_sweep({12, 60, 200});
  cfg.output_dir = (dir / "a").string();
  CHECK(run(cfg) == 0);
  cfg.output_dir = (dir / "b").string();
  CHECK(run(cfg) == 0);
  CHECK(slurp(dir / "a" / "direct_sweep.csv") == slurp(dir / "b" / "direct_sweep.csv"));
  CHECK(!slurp(dir / "a" / "direct_sweep.csv").empty());
  CHECK(slurp(dir / "a" / "direct_strategy.csv") == slurp(dir / "b" / "direct_strategy.csv"));

  RunConfig sys;
  sys.study = Study::system;
  sys.deployment.n_sites = 2;
  sys.deployment.n_ncrs = 4;
  sys.deployment.n_ues = 20;
  sys.deployment.area_w_m = sys.deployment.area_h_m = 300.0;
  sys.seed = 12;
  sys.output_dir = (dir / "s1").string();
  CHECK(run(sys) == 0);
  sys.output_dir = (dir / "s2").string();
  CHECK(run(sys) == 0);
  for (const char* f : {"sector_throughput.csv", "sector_power.csv",
                        "sector_ee.csv", "ue_rate.csv", "deployment.json"})
    CHECK(slurp(dir / "s1" / f) == slurp(dir / "s2" / f));
}
