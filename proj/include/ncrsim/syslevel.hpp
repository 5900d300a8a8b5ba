#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncrsim/ee_optimizer.hpp"

namespace ncrsim {

// Multi-site deployment: sites carry 3 sectors each (sector id =
// site_id * 3 + {0,1,2}, azimuth wedges [0,120), [120,240), [240,360)
// degrees). NCR positions reference their parent sector.
struct SitePos {
  int id = 0;
  double x = 0, y = 0;
};

struct NcrNode {
  int id = 0;
  double x = 0, y = 0;
  int sector_id = 0;
};

struct UeNode {
  int id = 0;
  double x = 0, y = 0;
};

struct Deployment {
  double area_w_m = 0, area_h_m = 0;
  std::vector<SitePos> sites;
  std::vector<NcrNode> ncrs;
  std::vector<UeNode> ues;
  std::uint64_t seed = 0;

  int n_sectors() const { return static_cast<int>(sites.size()) * 3; }
  void validate() const; // ids contiguous, sector refs valid, area positive
};

struct DeploymentParams {
  double area_w_m = 1000.0, area_h_m = 1000.0;
  int n_sites = 20;
  int n_ncrs = 62;
  int n_ues = 600;
  int max_ncrs_per_sector = 2;
  double ncr_radius_m = 80.0; // distance from the site, near coverage edge
};

// Deterministic under seed: jittered-grid sites, round-robin NCR sectors at
// ncr_radius_m with jittered azimuth inside the wedge, uniform UEs.
Deployment generate_deployment(const DeploymentParams& params,
                               std::uint64_t seed);

Deployment load_deployment(const std::string& path);
void save_deployment(const Deployment& dep, const std::string& path);

enum class PathKind { uncovered, direct, via_ncr };

struct ServingEntry {
  PathKind path = PathKind::uncovered;
  int sector_id = -1;
  int ncr_id = -1; // via_ncr only
  double snr_effective = 0;
};

struct Association {
  std::vector<ServingEntry> entries; // indexed by UE id
};

struct SystemConfig {
  ParameterGrid grid = ParameterGrid::sector_default();
  PaEfficiencyModel pa_model = PaEfficiencyModel::fixed_eff();
  PowerConstants constants;
  NoiseModel noise_ue = NoiseModel::ue_default();
  NoiseModel noise_ncr = NoiseModel::ncr_default();
  UeConfig ue;
  GnbConfig gnb_baseline;  // max configuration
  NcrConfig ncr_baseline;
  double exponent_access = 3.2; // gNB->UE and NCR->UE
  double exponent_bh = 2.0;     // gNB->NCR
  double ref_pathloss_db = 61.4;
  double coverage_threshold_snr = 0.5011872336272722; // -3 dB
};

// Each UE is served by the candidate (direct sector, or sector via one of
// its NCRs) with maximal effective SNR among sectors whose azimuth wedge
// contains the UE; below-threshold UEs are uncovered. Baseline configs are
// used; with_repeaters=false skips NCR candidates.
Association associate_ues(const Deployment& dep, const SystemConfig& cfg,
                          bool with_repeaters);

enum class NcrMode { always_on, smart, no_repeaters };
enum class OptMode { baseline, ee_optimal };

const char* ncr_mode_name(NcrMode m);
const char* opt_mode_name(OptMode m);

struct SectorReport {
  int sector_id = 0;
  double throughput_bps = 0; // equal time share: sum(rate_i) / n_ues
  double power = 0;          // Unit Power, gNB + attached NCRs per mode
  double ee = 0;             // throughput / power
  int n_ues_direct = 0;
  int n_ues_indirect = 0;
  std::vector<double> ue_rates; // full-buffer link rates, by UE id order
  std::vector<int> ue_ids;
};

// assoc must match the mode (no_repeaters wants the repeater-free
// association). ee_optimal jointly enumerates one shared gNB config plus a
// config per attached active NCR, maximizing sector EE; smart mode puts
// NCRs with zero indirect UEs to sleep.
SectorReport evaluate_sector(const Deployment& dep, const Association& assoc,
                             int sector_id, NcrMode mode, OptMode opt_mode,
                             const SystemConfig& cfg);

struct RegimeResult {
  NcrMode mode{};
  OptMode opt_mode{};
  std::string name; // "<opt_mode>_<mode>"
  std::vector<SectorReport> sectors;         // by sector id
  std::vector<double> sector_throughput;     // sorted ascending (CDF support)
  std::vector<double> sector_power;
  std::vector<double> sector_ee;
  std::vector<double> ue_rate;               // per-UE link rates, sorted
};

struct SystemReport {
  std::vector<int> shared_ue_ids; // UEs covered without repeaters
  std::vector<RegimeResult> regimes; // fixed order, 6 entries
};

// Evaluates {always_on, smart, no_repeaters} x {baseline, ee_optimal} on
// the shared covered-UE set; associations are computed once per topology
// with the baseline configs. Deterministic for a given (deployment, cfg).
SystemReport run_system(const Deployment& dep, const SystemConfig& cfg);

} // namespace ncrsim
