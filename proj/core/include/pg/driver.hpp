#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pg/config.hpp"

namespace pg {

struct RunOutcome {
  std::string file;
  std::string algorithm;
  std::string gamma0_label;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
};

struct ExperimentOutcome {
  std::vector<RunOutcome> runs;
  std::filesystem::path manifest;
  int n_failed = 0;
};

/// Number of worker threads: explicit argument, else the PGBENCH_WORKERS
/// environment variable, else hardware concurrency.
unsigned resolve_workers(unsigned requested = 0);

/// Execute the (algorithm x gamma_0 x seed) grid of the config, one CSV per
/// run plus a manifest.json in the output directory. `sweep` expands the
/// sweep.gamma0 grid; otherwise each algorithm runs once with its
/// configured (or theory-derived) gamma_0. Deterministic: rerunning an
/// identical config yields byte-identical CSVs regardless of worker count.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, bool sweep = false,
                                 unsigned workers = 0);

}  // namespace pg
