#pragma once

#include "ncrsim/config.hpp"

namespace ncrsim {

// Executes the configured study, writing CSV reports plus manifest.json
// into cfg.output_dir (created if missing). Returns 0 on success; throws
// on configuration or I/O failures. All CSV bytes are determined by
// (config, seed); the manifest additionally records wall time.
int run(const RunConfig& cfg);

} // namespace ncrsim
