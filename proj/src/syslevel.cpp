#include "ncrsim/syslevel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "ncrsim/units.hpp"

namespace ncrsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

double dist_m(double ax, double ay, double bx, double by) {
  const double d = std::hypot(ax - bx, ay - by);
  return std::max(d, 1.0); // path-loss model floor
}

int wedge_of(double sx, double sy, double px, double py) {
  double deg = std::atan2(py - sy, px - sx) * 180.0 / kPi;
  if (deg < 0.0) deg += 360.0;
  int w = static_cast<int>(deg / 120.0);
  return std::min(w, 2);
}

} // namespace

void Deployment::validate() const {
  if (!(area_w_m > 0.0) || !(area_h_m > 0.0))
    throw std::invalid_argument("Deployment: area must be positive");
  for (std::size_t i = 0; i < sites.size(); ++i)
    if (sites[i].id != static_cast<int>(i))
      throw std::invalid_argument("Deployment: site ids must be 0..n-1 in order");
  for (std::size_t i = 0; i < ncrs.size(); ++i) {
    if (ncrs[i].id != static_cast<int>(i))
      throw std::invalid_argument("Deployment: ncr ids must be 0..n-1 in order");
    if (ncrs[i].sector_id < 0 || ncrs[i].sector_id >= n_sectors())
      throw std::invalid_argument("Deployment: ncr references unknown sector");
  }
  for (std::size_t i = 0; i < ues.size(); ++i)
    if (ues[i].id != static_cast<int>(i))
      throw std::invalid_argument("Deployment: ue ids must be 0..n-1 in order");
}

Deployment generate_deployment(const DeploymentParams& p, std::uint64_t seed) {
  if (p.n_sites <= 0 || p.n_ues < 0 || p.n_ncrs < 0)
    throw std::invalid_argument("generate_deployment: counts must be positive");
  if (!(p.area_w_m > 0.0) || !(p.area_h_m > 0.0) || !(p.ncr_radius_m > 0.0))
    throw std::invalid_argument("generate_deployment: dimensions must be positive");
  const int n_sectors = p.n_sites * 3;
  if (p.n_ncrs > n_sectors * p.max_ncrs_per_sector)
    throw std::invalid_argument(
        "generate_deployment: more NCRs than sectors x max_ncrs_per_sector");

  std::mt19937_64 rng(seed);
  Deployment dep;
  dep.area_w_m = p.area_w_m;
  dep.area_h_m = p.area_h_m;
  dep.seed = seed;

  // Jittered grid of sites, row-major fill. Draw order (sites, ncrs, ues)
  // is part of the determinism contract.
  const int nx = std::max(1, static_cast<int>(std::ceil(
                    std::sqrt(p.n_sites * p.area_w_m / p.area_h_m))));
  const int ny = (p.n_sites + nx - 1) / nx;
  const double cw = p.area_w_m / nx, ch = p.area_h_m / ny;
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  for (int i = 0; i < p.n_sites; ++i) {
    const int col = i % nx, row = i / nx;
    const double x = (col + 0.5) * cw + jitter(rng) * cw;
    const double y = (row + 0.5) * ch + jitter(rng) * ch;
    dep.sites.push_back({i, x, y});
  }

  std::uniform_real_distribution<double> az_jitter(-45.0, 45.0);
  for (int i = 0; i < p.n_ncrs; ++i) {
    const int sector = i % n_sectors;
    const int site = sector / 3, local = sector % 3;
    const double az = (60.0 + 120.0 * local + az_jitter(rng)) * kPi / 180.0;
    const double x = std::clamp(dep.sites[site].x + p.ncr_radius_m * std::cos(az),
                                0.0, p.area_w_m);
    const double y = std::clamp(dep.sites[site].y + p.ncr_radius_m * std::sin(az),
                                0.0, p.area_h_m);
    dep.ncrs.push_back({i, x, y, sector});
  }

  std::uniform_real_distribution<double> ux(0.0, p.area_w_m), uy(0.0, p.area_h_m);
  for (int i = 0; i < p.n_ues; ++i) {
    const double x = ux(rng), y = uy(rng);
    dep.ues.push_back({i, x, y});
  }
  dep.validate();
  return dep;
}

Deployment load_deployment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_deployment: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_deployment: " + path + ": " + e.what());
  }
  Deployment dep;
  try {
    const auto& area = j.at("area_m");
    dep.area_w_m = area.at(0).get<double>();
    dep.area_h_m = area.at(1).get<double>();
    for (const auto& s : j.at("sites"))
      dep.sites.push_back({s.at("id").get<int>(), s.at("x").get<double>(),
                           s.at("y").get<double>()});
    for (const auto& n : j.at("ncrs"))
      dep.ncrs.push_back({n.at("id").get<int>(), n.at("x").get<double>(),
                          n.at("y").get<double>(),
                          n.at("sector_id").get<int>()});
    for (const auto& u : j.at("ues"))
      dep.ues.push_back({u.at("id").get<int>(), u.at("x").get<double>(),
                         u.at("y").get<double>()});
    dep.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_deployment: " + path + ": " + e.what());
  }
  dep.validate();
  return dep;
}

void save_deployment(const Deployment& dep, const std::string& path) {
  nlohmann::ordered_json j;
  j["area_m"] = {dep.area_w_m, dep.area_h_m};
  j["sites"] = nlohmann::ordered_json::array();
  for (const auto& s : dep.sites)
    j["sites"].push_back({{"id", s.id}, {"x", s.x}, {"y", s.y}});
  j["ncrs"] = nlohmann::ordered_json::array();
  for (const auto& n : dep.ncrs)
    j["ncrs"].push_back(
        {{"id", n.id}, {"x", n.x}, {"y", n.y}, {"sector_id", n.sector_id}});
  j["ues"] = nlohmann::ordered_json::array();
  for (const auto& u : dep.ues)
    j["ues"].push_back({{"id", u.id}, {"x", u.x}, {"y", u.y}});
  j["seed"] = dep.seed;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_deployment: cannot write " + path);
  out << j.dump(2) << "\n";
}

namespace {

// Effective SNR of a UE served through one NCR, baseline or candidate
// configs; geometry is fixed by the deployment.
double via_ncr_snr(const GnbConfig& gnb, const NcrConfig& ncr,
                   const SystemConfig& cfg, double d_bh, double d_ac) {
  const LinkGeometry geom_bh{d_bh, cfg.exponent_bh, cfg.ref_pathloss_db};
  const LinkGeometry geom_ac{d_ac, cfg.exponent_access, cfg.ref_pathloss_db};
  const double snr_bh = snr_backhaul(gnb, ncr, geom_bh, cfg.noise_ncr);
  const double pa = ncr_pa_output(ncr, snr_bh, cfg.noise_ncr, gnb.bandwidth_hz);
  const double snr_ac = snr_access(ncr, cfg.ue, geom_ac, cfg.noise_ue, pa,
                                   gnb.bandwidth_hz);
  return effective_snr(snr_bh, snr_ac);
}

double direct_snr(const GnbConfig& gnb, const SystemConfig& cfg, double d) {
  const LinkGeometry geom{d, cfg.exponent_access, cfg.ref_pathloss_db};
  return snr_direct(gnb, cfg.ue, geom, cfg.noise_ue);
}

} // namespace

Association associate_ues(const Deployment& dep, const SystemConfig& cfg,
                          bool with_repeaters) {
  dep.validate();
  Association assoc;
  assoc.entries.resize(dep.ues.size());
  for (const auto& ue : dep.ues) {
    ServingEntry best;
    for (const auto& site : dep.sites) {
      const int sector = site.id * 3 + wedge_of(site.x, site.y, ue.x, ue.y);
      const double snr =
          direct_snr(cfg.gnb_baseline, cfg, dist_m(site.x, site.y, ue.x, ue.y));
      if (snr > best.snr_effective) {
        best = {PathKind::direct, sector, -1, snr};
      }
      if (!with_repeaters) continue;
      for (const auto& ncr : dep.ncrs) {
        if (ncr.sector_id != sector) continue;
        const double snr_r = via_ncr_snr(
            cfg.gnb_baseline, cfg.ncr_baseline, cfg,
            dist_m(site.x, site.y, ncr.x, ncr.y), dist_m(ncr.x, ncr.y, ue.x, ue.y));
        if (snr_r > best.snr_effective)
          best = {PathKind::via_ncr, sector, ncr.id, snr_r};
      }
    }
    if (best.snr_effective < cfg.coverage_threshold_snr) best = ServingEntry{};
    assoc.entries[ue.id] = best;
  }
  return assoc;
}

const char* ncr_mode_name(NcrMode m) {
  switch (m) {
    case NcrMode::always_on: return "always_on";
    case NcrMode::smart: return "smart";
    case NcrMode::no_repeaters: return "no_repeaters";
  }
  return "?";
}

const char* opt_mode_name(OptMode m) {
  return m == OptMode::baseline ? "baseline" : "ee_optimal";
}

namespace {

struct SectorUe {
  int ue_id;
  int ncr_index; // -1 direct, else index into the sector NCR list
  double d_direct;
  double d_ac; // from serving NCR
};

struct SectorScene {
  int sector_id;
  const SitePos* site;
  std::vector<const NcrNode*> ncrs; // attached, deployment order
  std::vector<double> d_bh;         // site -> NCR
  std::vector<SectorUe> ues;        // served, ue id order
  std::vector<bool> ncr_serving;    // has >= 1 indirect UE
};

SectorScene build_scene(const Deployment& dep, const Association& assoc,
                        int sector_id, bool with_ncrs) {
  SectorScene sc;
  sc.sector_id = sector_id;
  sc.site = &dep.sites[sector_id / 3];
  if (with_ncrs) {
    for (const auto& n : dep.ncrs)
      if (n.sector_id == sector_id) {
        sc.ncrs.push_back(&n);
        sc.d_bh.push_back(dist_m(sc.site->x, sc.site->y, n.x, n.y));
      }
  }
  sc.ncr_serving.assign(sc.ncrs.size(), false);
  for (const auto& ue : dep.ues) {
    const auto& e = assoc.entries[ue.id];
    if (e.path == PathKind::uncovered || e.sector_id != sector_id) continue;
    SectorUe su;
    su.ue_id = ue.id;
    su.d_direct = dist_m(sc.site->x, sc.site->y, ue.x, ue.y);
    su.ncr_index = -1;
    su.d_ac = 0;
    if (e.path == PathKind::via_ncr) {
      for (std::size_t i = 0; i < sc.ncrs.size(); ++i)
        if (sc.ncrs[i]->id == e.ncr_id) su.ncr_index = static_cast<int>(i);
      if (su.ncr_index < 0) continue; // stale entry for a repeater-free mode
      const auto* n = sc.ncrs[su.ncr_index];
      su.d_ac = dist_m(n->x, n->y, ue.x, ue.y);
      sc.ncr_serving[su.ncr_index] = true;
    }
    sc.ues.push_back(su);
  }
  return sc;
}

double ue_rate(const SectorScene& sc, const SectorUe& su, const GnbConfig& gnb,
               const std::vector<NcrConfig>& ncr_cfgs,
               const SystemConfig& cfg) {
  if (su.ncr_index < 0)
    return shannon_rate(gnb.bandwidth_hz, direct_snr(gnb, cfg, su.d_direct));
  const double snr = via_ncr_snr(gnb, ncr_cfgs[su.ncr_index], cfg,
                                 sc.d_bh[su.ncr_index], su.d_ac);
  return shannon_rate(gnb.bandwidth_hz, snr);
}

// Sector power for a given configuration set; sleeping NCRs contribute
// their sleep power only.
double sector_power(const SectorScene& sc, const GnbConfig& gnb,
                    const std::vector<NcrConfig>& ncr_cfgs,
                    const std::vector<bool>& active, const SystemConfig& cfg) {
  double p = gnb_power(gnb, cfg.pa_model, cfg.constants).total;
  for (std::size_t i = 0; i < sc.ncrs.size(); ++i) {
    const LinkGeometry geom_bh{sc.d_bh[i], cfg.exponent_bh, cfg.ref_pathloss_db};
    const double snr_bh = snr_backhaul(gnb, ncr_cfgs[i], geom_bh, cfg.noise_ncr);
    const double pa =
        ncr_pa_output(ncr_cfgs[i], snr_bh, cfg.noise_ncr, gnb.bandwidth_hz);
    p += ncr_power(ncr_cfgs[i], pa, cfg.pa_model, cfg.constants, active[i]).total;
  }
  return p;
}

} // namespace

SectorReport evaluate_sector(const Deployment& dep, const Association& assoc,
                             int sector_id, NcrMode mode, OptMode opt_mode,
                             const SystemConfig& cfg) {
  if (sector_id < 0 || sector_id >= dep.n_sectors())
    throw std::invalid_argument("evaluate_sector: unknown sector");
  const bool with_ncrs = mode != NcrMode::no_repeaters;
  SectorScene sc = build_scene(dep, assoc, sector_id, with_ncrs);

  std::vector<bool> active(sc.ncrs.size(), mode == NcrMode::always_on);
  if (mode == NcrMode::smart)
    for (std::size_t i = 0; i < sc.ncrs.size(); ++i) active[i] = sc.ncr_serving[i];

  GnbConfig gnb = cfg.gnb_baseline;
  std::vector<NcrConfig> ncr_cfgs(sc.ncrs.size(), cfg.ncr_baseline);

  if (opt_mode == OptMode::ee_optimal && !sc.ues.empty()) {
    cfg.grid.validate(!sc.ncrs.empty());
    // Joint enumeration: one shared gNB config, one config per NCR that is
    // actually serving (sleeping NCRs keep the baseline config). Objective
    // is sector EE = (sum rate / n) / power with the association fixed.
    std::vector<int> opt_ncrs; // indices of NCRs whose config matters
    for (std::size_t i = 0; i < sc.ncrs.size(); ++i)
      if (active[i] && sc.ncr_serving[i]) opt_ncrs.push_back(static_cast<int>(i));

    std::vector<NcrConfig> ncr_cands;
    for (double pm : cfg.grid.ncr_paout_values)
      for (int nt : cfg.grid.ncr_ntx_values)
        for (int nr : cfg.grid.ncr_nrx_values) {
          NcrConfig c = cfg.ncr_baseline;
          c.paout_max_mw = pm;
          c.n_tx = nt;
          c.n_rx = nr;
          ncr_cands.push_back(c);
        }

    double best_ee = -1.0;
    GnbConfig best_gnb = gnb;
    std::vector<NcrConfig> best_ncr = ncr_cfgs;
    std::vector<NcrConfig> trial = ncr_cfgs;
    const double n_ues = static_cast<double>(sc.ues.size());

    for (double bw : cfg.grid.bw_values)
      for (double gp : cfg.grid.gnb_paout_values)
        for (int gn : cfg.grid.gnb_ntx_values) {
          const GnbConfig g{gn, gp, bw};
          std::vector<std::size_t> odo(opt_ncrs.size(), 0);
          while (true) {
            for (std::size_t k = 0; k < opt_ncrs.size(); ++k)
              trial[opt_ncrs[k]] = ncr_cands[odo[k]];
            double sum = 0.0;
            for (const auto& su : sc.ues) sum += ue_rate(sc, su, g, trial, cfg);
            const double power = sector_power(sc, g, trial, active, cfg);
            const double ee = (sum / n_ues) / power;
            if (ee > best_ee) {
              best_ee = ee;
              best_gnb = g;
              best_ncr = trial;
            }
            std::size_t k = 0;
            for (; k < odo.size(); ++k) {
              if (++odo[k] < ncr_cands.size()) break;
              odo[k] = 0;
            }
            if (opt_ncrs.empty() || k == odo.size()) break;
          }
        }
    gnb = best_gnb;
    ncr_cfgs = best_ncr;
  }

  SectorReport rep;
  rep.sector_id = sector_id;
  for (const auto& su : sc.ues) {
    rep.ue_ids.push_back(su.ue_id);
    rep.ue_rates.push_back(ue_rate(sc, su, gnb, ncr_cfgs, cfg));
    if (su.ncr_index < 0)
      ++rep.n_ues_direct;
    else
      ++rep.n_ues_indirect;
  }
  rep.power = sector_power(sc, gnb, ncr_cfgs, active, cfg);
  if (!sc.ues.empty()) {
    double sum = 0.0;
    for (double r : rep.ue_rates) sum += r;
    rep.throughput_bps = sum / static_cast<double>(sc.ues.size());
    rep.ee = rep.throughput_bps / rep.power;
  }
  return rep;
}

SystemReport run_system(const Deployment& dep, const SystemConfig& cfg) {
  dep.validate();
  const Association with = associate_ues(dep, cfg, true);
  const Association without = associate_ues(dep, cfg, false);

  SystemReport rep;
  for (const auto& ue : dep.ues)
    if (without.entries[ue.id].path != PathKind::uncovered)
      rep.shared_ue_ids.push_back(ue.id);

  // Regimes are compared on the UEs covered without repeaters; everything
  // else is dropped from both associations.
  auto filtered = [&](const Association& a) {
    Association f = a;
    std::vector<bool> keep(dep.ues.size(), false);
    for (int id : rep.shared_ue_ids) keep[id] = true;
    for (std::size_t i = 0; i < f.entries.size(); ++i)
      if (!keep[i]) f.entries[i] = ServingEntry{};
    return f;
  };
  const Association f_with = filtered(with);
  const Association f_without = filtered(without);

  const NcrMode modes[] = {NcrMode::no_repeaters, NcrMode::smart,
                           NcrMode::always_on};
  const OptMode opts[] = {OptMode::baseline, OptMode::ee_optimal};
  for (OptMode om : opts)
    for (NcrMode m : modes) {
      RegimeResult r;
      r.mode = m;
      r.opt_mode = om;
      r.name = std::string(opt_mode_name(om)) + "_" + ncr_mode_name(m);
      const Association& a = (m == NcrMode::no_repeaters) ? f_without : f_with;
      for (int s = 0; s < dep.n_sectors(); ++s) {
        SectorReport sr = evaluate_sector(dep, a, s, m, om, cfg);
        r.sector_throughput.push_back(sr.throughput_bps);
        r.sector_power.push_back(sr.power);
        r.sector_ee.push_back(sr.ee);
        for (double rate : sr.ue_rates) r.ue_rate.push_back(rate);
        r.sectors.push_back(std::move(sr));
      }
      std::sort(r.sector_throughput.begin(), r.sector_throughput.end());
      std::sort(r.sector_power.begin(), r.sector_power.end());
      std::sort(r.sector_ee.begin(), r.sector_ee.end());
      std::sort(r.ue_rate.begin(), r.ue_rate.end());
      rep.regimes.push_back(std::move(r));
    }
  return rep;
}

} // namespace ncrsim
