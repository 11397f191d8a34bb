#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pg/optimizers.hpp"

namespace pg {

/// Shortest round-trip decimal form with 17 significant digits.
std::string format_g17(double v);

inline constexpr const char* kRunCsvHeader =
    "t,system_probes,mean_return,discounted_return_est,step_len,dir_norm,grad_norm_est";

/// Serialize the pinned CSV columns, one row per iteration.
void write_run_csv(const std::filesystem::path& path, const std::vector<IterationRecord>& records);

std::vector<IterationRecord> read_run_csv(const std::filesystem::path& path);

/// File stem for one run of the sweep grid, stable across platforms.
std::string run_file_stem(const std::string& algorithm, const std::string& gamma0_label,
                          std::uint64_t seed);

}  // namespace pg
