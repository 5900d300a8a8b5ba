#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "ncrsim/kernels.hpp"
#include "ncrsim/runner.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string pa_model;
  std::uint64_t seed = 0;
  double paout_step_db = 0;
  bool has_seed = false;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  sub->add_option("--out", f.out_dir, "output directory");
  sub->add_option("--pa-model", f.pa_model, "PA efficiency model")
      ->check(CLI::IsMember({"fixed", "varying"}));
  sub->add_option("--seed", f.seed, "RNG seed")->each([&](const std::string&) {
    f.has_seed = true;
  });
  sub->add_option("--paout-step-db", f.paout_step_db,
                  "PA output grid step, dB (rebuilds the 0..10 dBm lists)")
      ->check(CLI::PositiveNumber);
}

ncrsim::CliOverrides to_overrides(const CommonFlags& f) {
  ncrsim::CliOverrides o;
  if (!f.config_path.empty()) o.config_path = f.config_path;
  if (!f.out_dir.empty()) o.out_dir = f.out_dir;
  if (f.pa_model == "fixed") o.pa_model = ncrsim::PaKind::fixed;
  if (f.pa_model == "varying") o.pa_model = ncrsim::PaKind::varying;
  if (f.has_seed) o.seed = f.seed;
  if (f.paout_step_db > 0) o.paout_step_db = f.paout_step_db;
  return o;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave repeater link-budget and energy-efficiency simulator"};
  app.require_subcommand(1);

  struct SubDef {
    const char* name;
    const char* help;
    ncrsim::Study study;
  };
  const SubDef defs[] = {
      {"direct-sweep", "gNB->UE distance sweep with EE optimization",
       ncrsim::Study::direct_sweep},
      {"indirect-sweep", "NCR-relayed distance sweep with EE optimization",
       ncrsim::Study::indirect_sweep},
      {"compare-mc", "small cell + NCR versus macro cell comparison",
       ncrsim::Study::compare_mc},
      {"system", "multi-sector system-level study with CDF outputs",
       ncrsim::Study::system},
  };

  CommonFlags flags[4];
  CLI::App* subs[4];
  for (int i = 0; i < 4; ++i) {
    subs[i] = app.add_subcommand(defs[i].name, defs[i].help);
    add_common(subs[i], flags[i]);
  }

  CLI11_PARSE(app, argc, argv);

  for (int i = 0; i < 4; ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      const ncrsim::RunConfig cfg =
          ncrsim::make_run_config(defs[i].study, to_overrides(flags[i]));
      const int status = ncrsim::run(cfg);
      std::printf("%s: done (kernels: %s, out: %s)\n", defs[i].name,
                  ncrsim::kernels::active_impl(), cfg.output_dir.c_str());
      return status;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }
  return 1;
}
