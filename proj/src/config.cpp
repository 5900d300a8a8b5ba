#include "ncrsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "ncrsim/units.hpp"

namespace ncrsim {

using nlohmann::json;

const char* study_name(Study s) {
  switch (s) {
    case Study::direct_sweep: return "direct-sweep";
    case Study::indirect_sweep: return "indirect-sweep";
    case Study::compare_mc: return "compare-mc";
    case Study::system: return "system";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::runtime_error("config: " + path + ": " + msg);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

double num_in(const json& v, const std::string& path, double lo, double hi) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (x < lo || x > hi)
    fail(path, "value " + std::to_string(x) + " outside [" +
                   std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

int int_in(const json& v, const std::string& path, int lo, int hi) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  const long long x = v.get<long long>();
  if (x < lo || x > hi)
    fail(path, "value " + std::to_string(x) + " outside [" +
                   std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

std::vector<double> num_list(const json& v, const std::string& path, double lo,
                             double hi) {
  if (!v.is_array() || v.empty()) fail(path, "expected a nonempty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(num_in(v[i], path + "[" + std::to_string(i) + "]", lo, hi));
  return out;
}

std::vector<int> int_list(const json& v, const std::string& path, int lo,
                          int hi) {
  if (!v.is_array() || v.empty()) fail(path, "expected a nonempty array");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(int_in(v[i], path + "[" + std::to_string(i) + "]", lo, hi));
  return out;
}

std::vector<double> mw_list_from_dbm(const json& v, const std::string& path) {
  std::vector<double> out;
  for (double dbm : num_list(v, path, -10.0, 30.0)) out.push_back(dbm_to_mw(dbm));
  return out;
}

std::vector<double> hz_list_from_mhz(const json& v, const std::string& path) {
  std::vector<double> out;
  for (double mhz : num_list(v, path, 0.001, 2000.0)) out.push_back(mhz * 1e6);
  return out;
}

void parse_grid(const json& j, const std::string& path, ParameterGrid& g) {
  expect_object(j, path);
  reject_unknown(j, path, {"bw_mhz", "gnb_paout_dbm", "gnb_ntx",
                           "ncr_paout_dbm", "ncr_ntx", "ncr_nrx"});
  if (j.contains("bw_mhz")) g.bw_values = hz_list_from_mhz(j["bw_mhz"], path + ".bw_mhz");
  if (j.contains("gnb_paout_dbm"))
    g.gnb_paout_values = mw_list_from_dbm(j["gnb_paout_dbm"], path + ".gnb_paout_dbm");
  if (j.contains("gnb_ntx"))
    g.gnb_ntx_values = int_list(j["gnb_ntx"], path + ".gnb_ntx", 1, 4096);
  if (j.contains("ncr_paout_dbm"))
    g.ncr_paout_values = mw_list_from_dbm(j["ncr_paout_dbm"], path + ".ncr_paout_dbm");
  if (j.contains("ncr_ntx"))
    g.ncr_ntx_values = int_list(j["ncr_ntx"], path + ".ncr_ntx", 1, 1024);
  if (j.contains("ncr_nrx"))
    g.ncr_nrx_values = int_list(j["ncr_nrx"], path + ".ncr_nrx", 1, 1024);
}

void parse_constants(const json& j, const std::string& path, PowerConstants& k) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"p_ms_gnb", "p_non_pa", "p_active_dl", "p_active_ul",
                  "ref_tx_power_per_ru_mw", "ref_n_rx", "alpha", "beta",
                  "gamma", "xi", "p_const_ncr", "ncr_ref_tx_power_mw",
                  "ncr_sleep_power"});
  auto opt = [&](const char* key, double& dst, double lo, double hi) {
    if (j.contains(key)) dst = num_in(j[key], path + "." + key, lo, hi);
  };
  opt("p_ms_gnb", k.p_ms_gnb, 0.0, 1e6);
  opt("p_non_pa", k.p_non_pa, 0.0, 1e6);
  opt("p_active_dl", k.p_active_dl, 0.0, 1e6);
  opt("p_active_ul", k.p_active_ul, 0.0, 1e6);
  opt("ref_tx_power_per_ru_mw", k.ref_tx_power_per_ru_mw, 1e-6, 1e9);
  if (j.contains("ref_n_rx"))
    k.ref_n_rx = int_in(j["ref_n_rx"], path + ".ref_n_rx", 1, 4096);
  opt("alpha", k.alpha, 0.0, 1.0);
  opt("beta", k.beta, 0.0, 1.0);
  opt("gamma", k.gamma, 0.0, 1.0);
  opt("xi", k.xi, 0.0, 1.0);
  opt("p_const_ncr", k.p_const_ncr, 0.0, 1e6);
  opt("ncr_ref_tx_power_mw", k.ncr_ref_tx_power_mw, 1e-6, 1e9);
  opt("ncr_sleep_power", k.ncr_sleep_power, 0.0, 1e6);
  if (k.p_active_dl < k.p_ms_gnb)
    fail(path, "p_active_dl must be >= p_ms_gnb");
}

void parse_noise(const json& j, const std::string& path, NoiseModel& ue,
                 NoiseModel& ncr) {
  expect_object(j, path);
  reject_unknown(j, path, {"nf_ue_db", "nf_ncr_db", "n0_dbm_hz"});
  if (j.contains("nf_ue_db"))
    ue.noise_figure_linear = db_to_linear(num_in(j["nf_ue_db"], path + ".nf_ue_db", 0.0, 30.0));
  if (j.contains("nf_ncr_db"))
    ncr.noise_figure_linear = db_to_linear(num_in(j["nf_ncr_db"], path + ".nf_ncr_db", 0.0, 30.0));
  if (j.contains("n0_dbm_hz")) {
    const double n0 = dbm_to_mw(num_in(j["n0_dbm_hz"], path + ".n0_dbm_hz", -200.0, -100.0));
    ue.thermal_noise_density_mw_per_hz = n0;
    ncr.thermal_noise_density_mw_per_hz = n0;
  }
}

void parse_gnb(const json& j, const std::string& path, GnbConfig& g) {
  expect_object(j, path);
  reject_unknown(j, path, {"n_tx", "paout_dbm", "bw_mhz"});
  if (j.contains("n_tx")) g.n_tx = int_in(j["n_tx"], path + ".n_tx", 1, 4096);
  if (j.contains("paout_dbm"))
    g.paout_mw = dbm_to_mw(num_in(j["paout_dbm"], path + ".paout_dbm", -10.0, 30.0));
  if (j.contains("bw_mhz"))
    g.bandwidth_hz = num_in(j["bw_mhz"], path + ".bw_mhz", 0.001, 2000.0) * 1e6;
}

void parse_ncr(const json& j, const std::string& path, NcrConfig& n) {
  expect_object(j, path);
  reject_unknown(j, path, {"n_tx", "n_rx", "paout_max_dbm", "max_gain_db"});
  if (j.contains("n_tx")) n.n_tx = int_in(j["n_tx"], path + ".n_tx", 1, 1024);
  if (j.contains("n_rx")) n.n_rx = int_in(j["n_rx"], path + ".n_rx", 1, 1024);
  if (j.contains("paout_max_dbm"))
    n.paout_max_mw = dbm_to_mw(num_in(j["paout_max_dbm"], path + ".paout_max_dbm", -10.0, 30.0));
  if (j.contains("max_gain_db"))
    n.max_gain_linear = db_to_linear(num_in(j["max_gain_db"], path + ".max_gain_db", 0.0, 150.0));
}

void parse_pa(const json& j, const std::string& path, PaEfficiencyModel& m) {
  expect_object(j, path);
  reject_unknown(j, path, {"curve_exponent", "eff_max", "eta_floor",
                           "paout_ref_dbm", "table"});
  if (j.contains("curve_exponent"))
    m.curve_exponent = num_in(j["curve_exponent"], path + ".curve_exponent", 0.0, 4.0);
  if (j.contains("eff_max"))
    m.eff_max = num_in(j["eff_max"], path + ".eff_max", 1e-6, 1.0);
  if (j.contains("eta_floor"))
    m.eta_floor = num_in(j["eta_floor"], path + ".eta_floor", 1e-9, 1.0);
  if (j.contains("paout_ref_dbm"))
    m.paout_ref_mw = dbm_to_mw(num_in(j["paout_ref_dbm"], path + ".paout_ref_dbm", -10.0, 30.0));
  if (j.contains("table")) {
    const auto& t = j["table"];
    if (!t.is_array() || t.size() < 2) fail(path + ".table", "need >= 2 points");
    m.table.clear();
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string p = path + ".table[" + std::to_string(i) + "]";
      if (!t[i].is_array() || t[i].size() != 2) fail(p, "expected [paout_dbm, eff]");
      const double mw = dbm_to_mw(num_in(t[i][0], p + "[0]", -10.0, 30.0));
      const double eff = num_in(t[i][1], p + "[1]", 1e-9, 1.0);
      if (!m.table.empty() && mw <= m.table.back().first)
        fail(p, "table paout values must ascend");
      m.table.emplace_back(mw, eff);
    }
  }
}

void parse_compare(const json& j, const std::string& path, CompareSpec& c) {
  expect_object(j, path);
  reject_unknown(j, path, {"target_snr_db", "mc_ntx", "mc_paout_cap_dbm",
                           "mc_power_scale", "n_samples", "distances_m"});
  if (j.contains("target_snr_db"))
    c.target_snr_linear = db_to_linear(num_in(j["target_snr_db"], path + ".target_snr_db", -30.0, 60.0));
  if (j.contains("mc_ntx"))
    c.mc_ntx_candidates = int_list(j["mc_ntx"], path + ".mc_ntx", 1, 8192);
  if (j.contains("mc_paout_cap_dbm"))
    c.mc_paout_cap_dbm = num_in(j["mc_paout_cap_dbm"], path + ".mc_paout_cap_dbm", -10.0, 40.0);
  if (j.contains("mc_power_scale")) {
    const double s = num_in(j["mc_power_scale"], path + ".mc_power_scale", 0.01, 100.0);
    c.mc_constants = c.constants;
    c.mc_constants.p_ms_gnb *= s;
    c.mc_constants.p_non_pa *= s;
    c.mc_constants.p_active_dl *= s;
    c.mc_constants.p_active_ul *= s;
  }
  if (j.contains("n_samples"))
    c.n_samples = int_in(j["n_samples"], path + ".n_samples", 1, 100000);
  if (j.contains("distances_m"))
    c.distances_m = num_list(j["distances_m"], path + ".distances_m", 1e-3, 1e5);
}

void parse_deployment(const json& j, const std::string& path,
                      DeploymentParams& d) {
  expect_object(j, path);
  reject_unknown(j, path, {"area_m", "n_sites", "n_ncrs", "n_ues",
                           "max_ncrs_per_sector", "ncr_radius_m"});
  if (j.contains("area_m")) {
    const auto& a = j["area_m"];
    if (!a.is_array() || a.size() != 2) fail(path + ".area_m", "expected [w, h]");
    d.area_w_m = num_in(a[0], path + ".area_m[0]", 1.0, 1e6);
    d.area_h_m = num_in(a[1], path + ".area_m[1]", 1.0, 1e6);
  }
  if (j.contains("n_sites")) d.n_sites = int_in(j["n_sites"], path + ".n_sites", 1, 10000);
  if (j.contains("n_ncrs")) d.n_ncrs = int_in(j["n_ncrs"], path + ".n_ncrs", 0, 100000);
  if (j.contains("n_ues")) d.n_ues = int_in(j["n_ues"], path + ".n_ues", 0, 1000000);
  if (j.contains("max_ncrs_per_sector"))
    d.max_ncrs_per_sector = int_in(j["max_ncrs_per_sector"], path + ".max_ncrs_per_sector", 1, 100);
  if (j.contains("ncr_radius_m"))
    d.ncr_radius_m = num_in(j["ncr_radius_m"], path + ".ncr_radius_m", 1.0, 1e5);
}

std::vector<double> step_dbm_list(double step_db) {
  std::vector<double> v;
  for (double d = 0.0; d <= 10.0 + 1e-9; d += step_db) v.push_back(dbm_to_mw(d));
  return v;
}

void apply_paout_step(RunConfig& cfg, double step_db) {
  if (!(step_db > 0.0) || step_db > 5.0)
    throw std::runtime_error("config: paout_step_db: outside (0, 5]");
  cfg.sweep.grid.gnb_paout_values = step_dbm_list(step_db);
  cfg.sweep.grid.ncr_paout_values = step_dbm_list(step_db);
  cfg.system.grid.gnb_paout_values = step_dbm_list(step_db);
  cfg.system.grid.ncr_paout_values = step_dbm_list(step_db);
}

void set_pa_model(RunConfig& cfg, PaKind kind) {
  cfg.sweep.pa_model.kind = kind;
  cfg.compare.pa_model.kind = kind;
  cfg.system.pa_model.kind = kind;
}

} // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config: " + path + ": " + e.what());
  }
  if (j.is_null()) j = json::object(); // empty file means all defaults
  expect_object(j, "$");
  reject_unknown(j, "$",
                 {"pa_model", "seed", "output_dir", "distances_m", "d_bh_m",
                  "exponent_access", "exponent_bh", "ref_pathloss_db",
                  "coverage_threshold_db", "paout_step_db", "grid",
                  "constants", "noise", "ue", "gnb", "ncr", "pa", "compare",
                  "deployment", "deployment_file", "threads"});

  if (j.contains("pa_model")) {
    const std::string s = j["pa_model"].get<std::string>();
    if (s == "fixed")
      set_pa_model(cfg, PaKind::fixed);
    else if (s == "varying")
      set_pa_model(cfg, PaKind::varying);
    else
      fail("$.pa_model", "expected \"fixed\" or \"varying\"");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("$.seed", "expected an unsigned integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("distances_m")) {
    cfg.sweep.distances_m = num_list(j["distances_m"], "$.distances_m", 1e-3, 1e5);
    if (!std::is_sorted(cfg.sweep.distances_m.begin(), cfg.sweep.distances_m.end()))
      fail("$.distances_m", "must be ascending");
  }
  if (j.contains("d_bh_m"))
    cfg.sweep.d_bh_m = num_in(j["d_bh_m"], "$.d_bh_m", 1e-3, 1e5);
  if (j.contains("exponent_access")) {
    const double e = num_in(j["exponent_access"], "$.exponent_access", 0.1, 8.0);
    cfg.sweep.exponent_access = e;
    cfg.compare.exponent_access = e;
    cfg.system.exponent_access = e;
  }
  if (j.contains("exponent_bh")) {
    const double e = num_in(j["exponent_bh"], "$.exponent_bh", 0.1, 8.0);
    cfg.sweep.exponent_bh = e;
    cfg.compare.exponent_bh = e;
    cfg.system.exponent_bh = e;
  }
  if (j.contains("ref_pathloss_db")) {
    const double r = num_in(j["ref_pathloss_db"], "$.ref_pathloss_db", 0.0, 200.0);
    cfg.sweep.ref_pathloss_db = r;
    cfg.compare.ref_pathloss_db = r;
    cfg.system.ref_pathloss_db = r;
  }
  if (j.contains("coverage_threshold_db"))
    cfg.system.coverage_threshold_snr = db_to_linear(
        num_in(j["coverage_threshold_db"], "$.coverage_threshold_db", -30.0, 60.0));
  if (j.contains("grid")) {
    parse_grid(j["grid"], "$.grid", cfg.sweep.grid);
    parse_grid(j["grid"], "$.grid", cfg.system.grid);
  }
  if (j.contains("constants")) {
    parse_constants(j["constants"], "$.constants", cfg.sweep.constants);
    cfg.compare.constants = cfg.sweep.constants;
    cfg.system.constants = cfg.sweep.constants;
    // keep the MC scale relative to the (possibly overridden) SC constants
    json cmp = j.value("compare", json::object());
    if (!cmp.contains("mc_power_scale")) {
      cfg.compare.mc_constants = cfg.compare.constants;
      cfg.compare.mc_constants.p_ms_gnb *= 4.0;
      cfg.compare.mc_constants.p_non_pa *= 4.0;
      cfg.compare.mc_constants.p_active_dl *= 4.0;
      cfg.compare.mc_constants.p_active_ul *= 4.0;
    }
  }
  if (j.contains("noise")) {
    parse_noise(j["noise"], "$.noise", cfg.sweep.noise_ue, cfg.sweep.noise_ncr);
    cfg.compare.noise_ue = cfg.sweep.noise_ue;
    cfg.compare.noise_ncr = cfg.sweep.noise_ncr;
    cfg.system.noise_ue = cfg.sweep.noise_ue;
    cfg.system.noise_ncr = cfg.sweep.noise_ncr;
  }
  if (j.contains("ue")) {
    expect_object(j["ue"], "$.ue");
    reject_unknown(j["ue"], "$.ue", {"n_rx"});
    if (j["ue"].contains("n_rx")) {
      const int n = int_in(j["ue"]["n_rx"], "$.ue.n_rx", 1, 1024);
      cfg.sweep.ue.n_rx = n;
      cfg.compare.ue.n_rx = n;
      cfg.system.ue.n_rx = n;
    }
  }
  if (j.contains("gnb")) {
    parse_gnb(j["gnb"], "$.gnb", cfg.compare.sc);
    cfg.system.gnb_baseline = cfg.compare.sc;
  }
  if (j.contains("ncr")) {
    parse_ncr(j["ncr"], "$.ncr", cfg.sweep.ncr_template);
    cfg.compare.ncr = cfg.sweep.ncr_template;
    cfg.system.ncr_baseline = cfg.sweep.ncr_template;
  }
  if (j.contains("pa")) {
    parse_pa(j["pa"], "$.pa", cfg.sweep.pa_model);
    PaKind keep_cmp = cfg.compare.pa_model.kind;
    PaKind keep_sys = cfg.system.pa_model.kind;
    cfg.compare.pa_model = cfg.sweep.pa_model;
    cfg.compare.pa_model.kind = keep_cmp;
    cfg.system.pa_model = cfg.sweep.pa_model;
    cfg.system.pa_model.kind = keep_sys;
  }
  if (j.contains("compare")) parse_compare(j["compare"], "$.compare", cfg.compare);
  if (j.contains("deployment"))
    parse_deployment(j["deployment"], "$.deployment", cfg.deployment);
  if (j.contains("deployment_file"))
    cfg.deployment_file = j["deployment_file"].get<std::string>();
  if (j.contains("threads")) {
    const int t = int_in(j["threads"], "$.threads", 0, 256);
    cfg.sweep.opt.n_threads = t;
  }
  if (j.contains("paout_step_db"))
    apply_paout_step(cfg, num_in(j["paout_step_db"], "$.paout_step_db", 0.01, 5.0));
}

RunConfig make_run_config(Study study, const CliOverrides& o) {
  RunConfig cfg;
  cfg.study = study;
  if (o.config_path) apply_config_file(cfg, *o.config_path);
  if (o.pa_model) {
    switch (*o.pa_model) {
      case PaKind::fixed: set_pa_model(cfg, PaKind::fixed); break;
      case PaKind::varying: set_pa_model(cfg, PaKind::varying); break;
    }
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.out_dir) cfg.output_dir = *o.out_dir;
  if (o.paout_step_db) apply_paout_step(cfg, *o.paout_step_db);
  return cfg;
}

} // namespace ncrsim
