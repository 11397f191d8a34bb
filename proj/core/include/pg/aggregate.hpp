#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pg/optimizers.hpp"

namespace pg {

enum class Metric {
  kMeanReturn,
  kDiscountedReturn,
  kStepLen,
  kDirNorm,
  kGradNormEst,
};

std::optional<Metric> metric_from_name(const std::string& name);
const char* metric_name(Metric m);
double metric_value(const IterationRecord& r, Metric m);

/// Nearest-rank quantile: index ceil(q n) (1-based) of the sorted values.
double nearest_rank_quantile(std::vector<double> values, double q);

struct AggregateSeries {
  std::vector<int> t;
  std::vector<std::int64_t> probes;
  std::vector<double> q25, q50, q75;
};

/// Per-iteration q25/median/q75 of one metric across seed runs. All runs
/// must share the iteration and probe grid; mismatches are rejected.
/// Permutation-invariant in the order of runs.
AggregateSeries aggregate_runs(const std::vector<std::vector<IterationRecord>>& runs, Metric m);

void write_summary_csv(const std::filesystem::path& path,
                       const std::map<std::string, AggregateSeries>& groups);

struct RobustnessPoint {
  double gamma0 = 0.0;
  double q25 = 0.0, q50 = 0.0, q75 = 0.0;  // probes to threshold (inf when unreached)
};

/// Probes needed to push the metric to or above `threshold`, per seed, then
/// quantiles across seeds. One point per gamma_0 value of one algorithm.
std::vector<RobustnessPoint> robustness_curve(
    const std::map<double, std::vector<std::vector<IterationRecord>>>& runs_by_gamma0, Metric m,
    double threshold);

void write_robustness_csv(const std::filesystem::path& path,
                          const std::map<std::string, std::vector<RobustnessPoint>>& curves);

}  // namespace pg
