#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pg/schedule.hpp"

namespace pg {

/// Declarative experiment description parsed from a JSON config file.
/// Sections: env, policy, algorithms, schedule, sweep (optional), run.
/// See README for the full schema.
struct ExperimentConfig {
  nlohmann::json env;
  nlohmann::json policy;
  std::vector<Algorithm> algorithms;
  nlohmann::json schedule;           // variant, M_g, mu_F, gamma0 (number or per-algorithm map)
  std::vector<double> sweep_gamma0;  // gamma_0 grid; empty means no sweep
  int T = 2;
  int batch_size = 1;
  std::vector<std::uint64_t> seeds;
  std::optional<int> horizon_override;
  double theta0_norm = 0.0;  // 0 -> zeros; otherwise norm * e_1
  std::filesystem::path out_dir = "runs";

  std::string canonical;  // canonical JSON dump backing the config hash
  std::uint64_t config_hash() const;

  /// gamma_0 for one algorithm in non-sweep mode (schedule.gamma0 scalar or map).
  std::optional<double> gamma0_for(Algorithm alg) const;
  ScheduleVariant variant() const;
};

ExperimentConfig parse_config_json(const nlohmann::json& j);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

}  // namespace pg
