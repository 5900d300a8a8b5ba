#include "ncrsim/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ncrsim/kernels.hpp"
#include "ncrsim/units.hpp"

namespace ncrsim {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// CSV per External Interfaces: comma delimiter, '.' decimal, LF endings,
// mandatory header.
class Csv {
 public:
  Csv(const fs::path& path, const std::string& header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << header << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

ordered_json grid_json(const ParameterGrid& g) {
  return {{"bw_hz", g.bw_values},
          {"gnb_paout_mw", g.gnb_paout_values},
          {"gnb_ntx", g.gnb_ntx_values},
          {"ncr_paout_mw", g.ncr_paout_values},
          {"ncr_ntx", g.ncr_ntx_values},
          {"ncr_nrx", g.ncr_nrx_values}};
}

ordered_json pa_json(const PaEfficiencyModel& m) {
  ordered_json j{{"kind", m.kind == PaKind::fixed ? "fixed" : "varying"},
                 {"paout_ref_mw", m.paout_ref_mw},
                 {"curve_exponent", m.curve_exponent},
                 {"eff_max", m.eff_max},
                 {"eta_floor", m.eta_floor}};
  if (!m.table.empty()) {
    ordered_json t = ordered_json::array();
    for (const auto& [x, y] : m.table) t.push_back({x, y});
    j["table"] = t;
  }
  return j;
}

ordered_json constants_json(const PowerConstants& k) {
  return {{"p_ms_gnb", k.p_ms_gnb},
          {"p_non_pa", k.p_non_pa},
          {"p_active_dl", k.p_active_dl},
          {"p_active_ul", k.p_active_ul},
          {"ref_tx_power_per_ru_mw", k.ref_tx_power_per_ru_mw},
          {"ref_n_rx", k.ref_n_rx},
          {"alpha", k.alpha},
          {"beta", k.beta},
          {"gamma", k.gamma},
          {"xi", k.xi},
          {"p_const_ncr", k.p_const_ncr},
          {"ncr_ref_tx_power_mw", k.ncr_ref_tx_power_mw},
          {"ncr_sleep_power", k.ncr_sleep_power}};
}

ordered_json noise_json(const NoiseModel& n) {
  return {{"noise_figure_linear", n.noise_figure_linear},
          {"thermal_noise_density_mw_per_hz", n.thermal_noise_density_mw_per_hz}};
}

ordered_json ncr_json(const NcrConfig& n) {
  return {{"n_tx", n.n_tx},
          {"n_rx", n.n_rx},
          {"paout_max_mw", n.paout_max_mw},
          {"max_gain_linear", n.max_gain_linear}};
}

ordered_json gnb_json(const GnbConfig& g) {
  return {{"n_tx", g.n_tx}, {"paout_mw", g.paout_mw}, {"bandwidth_hz", g.bandwidth_hz}};
}

// Every effective parameter, defaults included.
ordered_json config_echo(const RunConfig& cfg) {
  ordered_json j;
  j["study"] = study_name(cfg.study);
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["sweep"] = {{"distances_m", cfg.sweep.distances_m},
                {"d_bh_m", cfg.sweep.d_bh_m},
                {"exponent_access", cfg.sweep.exponent_access},
                {"exponent_bh", cfg.sweep.exponent_bh},
                {"ref_pathloss_db", cfg.sweep.ref_pathloss_db},
                {"grid", grid_json(cfg.sweep.grid)},
                {"pa_model", pa_json(cfg.sweep.pa_model)},
                {"constants", constants_json(cfg.sweep.constants)},
                {"noise_ue", noise_json(cfg.sweep.noise_ue)},
                {"noise_ncr", noise_json(cfg.sweep.noise_ncr)},
                {"ue_n_rx", cfg.sweep.ue.n_rx},
                {"ncr_template", ncr_json(cfg.sweep.ncr_template)},
                {"threads", cfg.sweep.opt.n_threads}};
  j["compare"] = {{"target_snr_linear", cfg.compare.target_snr_linear},
                  {"sc", gnb_json(cfg.compare.sc)},
                  {"ncr", ncr_json(cfg.compare.ncr)},
                  {"mc_ntx_candidates", cfg.compare.mc_ntx_candidates},
                  {"mc_paout_cap_dbm", cfg.compare.mc_paout_cap_dbm},
                  {"exponent_access", cfg.compare.exponent_access},
                  {"exponent_bh", cfg.compare.exponent_bh},
                  {"ref_pathloss_db", cfg.compare.ref_pathloss_db},
                  {"pa_model", pa_json(cfg.compare.pa_model)},
                  {"constants", constants_json(cfg.compare.constants)},
                  {"mc_constants", constants_json(cfg.compare.mc_constants)},
                  {"distances_m", cfg.compare.distances_m},
                  {"n_samples", cfg.compare.n_samples}};
  j["system"] = {{"grid", grid_json(cfg.system.grid)},
                 {"pa_model", pa_json(cfg.system.pa_model)},
                 {"constants", constants_json(cfg.system.constants)},
                 {"noise_ue", noise_json(cfg.system.noise_ue)},
                 {"noise_ncr", noise_json(cfg.system.noise_ncr)},
                 {"ue_n_rx", cfg.system.ue.n_rx},
                 {"gnb_baseline", gnb_json(cfg.system.gnb_baseline)},
                 {"ncr_baseline", ncr_json(cfg.system.ncr_baseline)},
                 {"exponent_access", cfg.system.exponent_access},
                 {"exponent_bh", cfg.system.exponent_bh},
                 {"ref_pathloss_db", cfg.system.ref_pathloss_db},
                 {"coverage_threshold_snr", cfg.system.coverage_threshold_snr}};
  j["deployment"] = {{"area_m", {cfg.deployment.area_w_m, cfg.deployment.area_h_m}},
                     {"n_sites", cfg.deployment.n_sites},
                     {"n_ncrs", cfg.deployment.n_ncrs},
                     {"n_ues", cfg.deployment.n_ues},
                     {"max_ncrs_per_sector", cfg.deployment.max_ncrs_per_sector},
                     {"ncr_radius_m", cfg.deployment.ncr_radius_m}};
  if (cfg.deployment_file) j["deployment_file"] = *cfg.deployment_file;
  return j;
}

std::vector<std::string> sweep_common_cells(const SweepRow& r) {
  return {g17(r.distance_m),
          g17(r.rel_ee),
          g17(r.rel_rate),
          g17(r.opt.best.bw_hz),
          g17(r.opt.best.gnb_paout_mw),
          std::to_string(r.opt.best.gnb_ntx)};
}

void write_strategy(const fs::path& p, const std::vector<StrategyEvent>& ev) {
  Csv csv(p, "param,distance_m,row_index");
  for (const auto& e : ev)
    csv.row({sweep_param_name(e.param), g17(e.distance_m), std::to_string(e.row_index)});
}

void run_direct(const RunConfig& cfg, const fs::path& dir, ordered_json& summary) {
  const auto rows = direct_sweep(cfg.sweep);
  Csv csv(dir / "direct_sweep.csv",
          "distance_m,rel_ee,rel_rate,opt_bw_hz,opt_gnb_paout_mw,opt_gnb_ntx,"
          "opt_snr,opt_rate_bps,opt_power,opt_ee,"
          "baseline_snr,baseline_rate_bps,baseline_power,baseline_ee");
  for (const auto& r : rows) {
    auto cells = sweep_common_cells(r);
    for (double v : {r.opt.snr, r.opt.rate_bps, r.opt.total_power, r.opt.ee,
                     r.baseline.snr, r.baseline.rate_bps, r.baseline.total_power,
                     r.baseline.ee})
      cells.push_back(g17(v));
    csv.row(cells);
  }
  write_strategy(dir / "direct_strategy.csv", extract_strategy(rows));
  summary["rows"] = rows.size();
}

void run_indirect(const RunConfig& cfg, const fs::path& dir, ordered_json& summary) {
  const auto rows = indirect_sweep(cfg.sweep);
  Csv csv(dir / "indirect_sweep.csv",
          "distance_m,rel_ee,rel_rate,opt_bw_hz,opt_gnb_paout_mw,opt_gnb_ntx,"
          "opt_ncr_paout_max_mw,opt_ncr_ntx,opt_ncr_nrx,opt_ncr_paout_actual_mw,"
          "opt_snr_bh,opt_snr_ac,opt_snr,opt_rate_bps,opt_power,opt_ee,"
          "baseline_snr,baseline_rate_bps,baseline_power,baseline_ee");
  for (const auto& r : rows) {
    auto cells = sweep_common_cells(r);
    cells.push_back(g17(r.opt.best.ncr_paout_max_mw));
    cells.push_back(std::to_string(r.opt.best.ncr_ntx));
    cells.push_back(std::to_string(r.opt.best.ncr_nrx));
    for (double v : {r.opt.ncr_paout_actual_mw, r.opt.snr_bh, r.opt.snr_ac,
                     r.opt.snr, r.opt.rate_bps, r.opt.total_power, r.opt.ee,
                     r.baseline.snr, r.baseline.rate_bps, r.baseline.total_power,
                     r.baseline.ee})
      cells.push_back(g17(v));
    csv.row(cells);
  }
  write_strategy(dir / "indirect_strategy.csv", extract_strategy(rows));
  summary["rows"] = rows.size();
}

void run_compare(const RunConfig& cfg, const fs::path& dir, ordered_json& summary) {
  const CompareResult res = compare_sc_mc(cfg.compare);
  Csv csv(dir / "compare_mc.csv",
          "distance_m,via_ncr,rate_sc_path,rate_mc,ee_sc_path,ee_mc,"
          "rate_ratio,ee_ratio");
  for (const auto& r : res.rows)
    csv.row({g17(r.distance_m), r.via_ncr ? "1" : "0", g17(r.rate_sc_path),
             g17(r.rate_mc), g17(r.ee_sc_path), g17(r.ee_mc),
             g17(r.rate_sc_path / r.rate_mc), g17(r.ee_sc_path / r.ee_mc)});
  summary["d_bh_m"] = res.d_bh;
  summary["d_ac_m"] = res.d_ac;
  summary["full_range_m"] = res.full_range;
  summary["mc_ntx"] = res.mc_ntx;
  summary["mc_paout_mw"] = res.mc_paout_mw;
}

void write_sector_metric(const fs::path& p, const SystemReport& rep,
                         double SectorReport::*field) {
  Csv csv(p, "regime,entity_id,value");
  for (const auto& reg : rep.regimes) {
    std::vector<std::pair<double, int>> vals;
    for (const auto& s : reg.sectors) vals.emplace_back(s.*field, s.sector_id);
    std::sort(vals.begin(), vals.end());
    for (const auto& [v, id] : vals)
      csv.row({reg.name, std::to_string(id), g17(v)});
  }
}

void run_sys(const RunConfig& cfg, const fs::path& dir, ordered_json& summary) {
  Deployment dep;
  if (cfg.deployment_file)
    dep = load_deployment(*cfg.deployment_file);
  else
    dep = generate_deployment(cfg.deployment, cfg.seed);
  save_deployment(dep, (dir / "deployment.json").string());

  const SystemReport rep = run_system(dep, cfg.system);
  write_sector_metric(dir / "sector_throughput.csv", rep,
                      &SectorReport::throughput_bps);
  write_sector_metric(dir / "sector_power.csv", rep, &SectorReport::power);
  write_sector_metric(dir / "sector_ee.csv", rep, &SectorReport::ee);

  Csv csv(dir / "ue_rate.csv", "regime,entity_id,value");
  for (const auto& reg : rep.regimes) {
    std::vector<std::pair<double, int>> vals;
    for (const auto& s : reg.sectors)
      for (std::size_t i = 0; i < s.ue_ids.size(); ++i)
        vals.emplace_back(s.ue_rates[i], s.ue_ids[i]);
    std::sort(vals.begin(), vals.end());
    for (const auto& [v, id] : vals)
      csv.row({reg.name, std::to_string(id), g17(v)});
  }
  summary["n_sectors"] = dep.n_sectors();
  summary["n_shared_ues"] = rep.shared_ue_ids.size();
}

} // namespace

int run(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::runtime_error("output dir not writable: " + cfg.output_dir);

  ordered_json summary;
  switch (cfg.study) {
    case Study::direct_sweep: run_direct(cfg, dir, summary); break;
    case Study::indirect_sweep: run_indirect(cfg, dir, summary); break;
    case Study::compare_mc: run_compare(cfg, dir, summary); break;
    case Study::system: run_sys(cfg, dir, summary); break;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ordered_json manifest;
  manifest["version"] = "1.0.0";
  manifest["kernel_impl"] = kernels::active_impl();
  manifest["config"] = config_echo(cfg);
  manifest["summary"] = summary;
  manifest["wall_time_s"] = wall; // excluded from the byte-identity contract
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest.json");
  out << manifest.dump(2) << "\n";
  return 0;
}

} // namespace ncrsim
