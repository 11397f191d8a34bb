#include "pg/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "pg/runio.hpp"

namespace pg {

std::optional<Metric> metric_from_name(const std::string& name) {
  if (name == "mean_return") return Metric::kMeanReturn;
  if (name == "discounted_return_est") return Metric::kDiscountedReturn;
  if (name == "step_len") return Metric::kStepLen;
  if (name == "dir_norm") return Metric::kDirNorm;
  if (name == "grad_norm_est") return Metric::kGradNormEst;
  return std::nullopt;
}

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::kMeanReturn: return "mean_return";
    case Metric::kDiscountedReturn: return "discounted_return_est";
    case Metric::kStepLen: return "step_len";
    case Metric::kDirNorm: return "dir_norm";
    case Metric::kGradNormEst: return "grad_norm_est";
  }
  return "unknown";
}

double metric_value(const IterationRecord& r, Metric m) {
  switch (m) {
    case Metric::kMeanReturn: return r.mean_return;
    case Metric::kDiscountedReturn: return r.discounted_return;
    case Metric::kStepLen: return r.step_len;
    case Metric::kDirNorm: return r.dir_norm;
    case Metric::kGradNormEst: return r.grad_norm_est;
  }
  return 0.0;
}

double nearest_rank_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("nearest_rank_quantile: empty input");
  if (!(q > 0.0 && q <= 1.0))
    throw std::invalid_argument("nearest_rank_quantile: q must lie in (0,1]");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  const auto rank = static_cast<std::size_t>(std::ceil(q * n));
  return values[std::max<std::size_t>(rank, 1) - 1];
}

AggregateSeries aggregate_runs(const std::vector<std::vector<IterationRecord>>& runs, Metric m) {
  if (runs.empty()) throw std::invalid_argument("aggregate_runs: no runs");
  const std::size_t len = runs[0].size();
  for (const auto& r : runs) {
    if (r.size() != len) throw std::invalid_argument("aggregate_runs: mismatched iteration grids");
    for (std::size_t i = 0; i < len; ++i) {
      if (r[i].t != runs[0][i].t || r[i].system_probes != runs[0][i].system_probes)
        throw std::invalid_argument("aggregate_runs: mismatched iteration grids");
    }
  }
  AggregateSeries out;
  out.t.reserve(len);
  out.probes.reserve(len);
  std::vector<double> column(runs.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t k = 0; k < runs.size(); ++k) column[k] = metric_value(runs[k][i], m);
    out.t.push_back(runs[0][i].t);
    out.probes.push_back(runs[0][i].system_probes);
    out.q25.push_back(nearest_rank_quantile(column, 0.25));
    out.q50.push_back(nearest_rank_quantile(column, 0.50));
    out.q75.push_back(nearest_rank_quantile(column, 0.75));
  }
  return out;
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::map<std::string, AggregateSeries>& groups) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_summary_csv: cannot open " + path.string());
  out << "group,t,system_probes,q25,median,q75\n";
  for (const auto& [name, s] : groups) {
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      out << name << ',' << s.t[i] << ',' << s.probes[i] << ',' << format_g17(s.q25[i]) << ','
          << format_g17(s.q50[i]) << ',' << format_g17(s.q75[i]) << '\n';
    }
  }
}

std::vector<RobustnessPoint> robustness_curve(
    const std::map<double, std::vector<std::vector<IterationRecord>>>& runs_by_gamma0, Metric m,
    double threshold) {
  std::vector<RobustnessPoint> curve;
  for (const auto& [gamma0, runs] : runs_by_gamma0) {
    std::vector<double> probes_to_hit;
    for (const auto& records : runs) {
      double hit = std::numeric_limits<double>::infinity();
      for (const auto& r : records) {
        if (metric_value(r, m) >= threshold) {
          hit = static_cast<double>(r.system_probes);
          break;
        }
      }
      probes_to_hit.push_back(hit);
    }
    RobustnessPoint p;
    p.gamma0 = gamma0;
    p.q25 = nearest_rank_quantile(probes_to_hit, 0.25);
    p.q50 = nearest_rank_quantile(probes_to_hit, 0.50);
    p.q75 = nearest_rank_quantile(probes_to_hit, 0.75);
    curve.push_back(p);
  }
  return curve;
}

void write_robustness_csv(const std::filesystem::path& path,
                          const std::map<std::string, std::vector<RobustnessPoint>>& curves) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_robustness_csv: cannot open " + path.string());
  out << "group,gamma0,probes_q25,probes_median,probes_q75\n";
  for (const auto& [name, curve] : curves) {
    for (const RobustnessPoint& p : curve) {
      out << name << ',' << format_g17(p.gamma0) << ',' << format_g17(p.q25) << ','
          << format_g17(p.q50) << ',' << format_g17(p.q75) << '\n';
    }
  }
}

}  // namespace pg
