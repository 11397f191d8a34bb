// Benchmark CLI: seeded experiment runs, step-size sweeps, CSV aggregation
// with quantile learning-curve plots, schedule constants, and check suites.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "pg/aggregate.hpp"
#include "pg/checks.hpp"
#include "pg/config.hpp"
#include "pg/constants.hpp"
#include "pg/driver.hpp"
#include "pg/runio.hpp"
#include "pg/svg.hpp"

namespace fs = std::filesystem;

namespace {

struct RunKey {
  std::string algorithm;
  std::string gamma0_label;
};

// File stems look like <algorithm>__g<gamma0>__s<seed>.csv.
bool parse_stem(const std::string& stem, RunKey& key, std::uint64_t& seed) {
  const auto g_pos = stem.find("__g");
  const auto s_pos = stem.rfind("__s");
  if (g_pos == std::string::npos || s_pos == std::string::npos || s_pos <= g_pos) return false;
  key.algorithm = stem.substr(0, g_pos);
  key.gamma0_label = stem.substr(g_pos + 3, s_pos - (g_pos + 3));
  try {
    seed = std::stoull(stem.substr(s_pos + 3));
  } catch (...) {
    return false;
  }
  return true;
}

int do_run(const std::string& config_path, bool sweep, unsigned workers) {
  const pg::ExperimentConfig cfg = pg::parse_config_file(config_path);
  const pg::ExperimentOutcome outcome = pg::run_experiment(cfg, sweep, workers);
  std::cout << outcome.runs.size() << " runs -> " << cfg.out_dir.string() << " (manifest "
            << outcome.manifest.string() << ")\n";
  for (const auto& r : outcome.runs) {
    if (!r.ok)
      std::cerr << "failed: " << r.algorithm << " gamma0=" << r.gamma0_label
                << " seed=" << r.seed << ": " << r.error << "\n";
  }
  return outcome.n_failed == 0 ? 0 : 1;
}

int do_aggregate(const std::string& dir, const std::string& metric_name_arg,
                 const std::string& out_svg, const std::string& summary_csv, double threshold,
                 const std::string& robustness_csv, const std::string& robustness_svg) {
  const auto metric = pg::metric_from_name(metric_name_arg);
  if (!metric) {
    std::cerr << "unknown metric '" << metric_name_arg << "'\n";
    return 2;
  }
  std::map<std::string, std::vector<std::vector<pg::IterationRecord>>> groups;
  std::map<std::string, std::map<double, std::vector<std::vector<pg::IterationRecord>>>>
      by_alg_gamma;
  std::size_t n_files = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".csv") continue;
    RunKey key;
    std::uint64_t seed = 0;
    if (!parse_stem(entry.path().stem().string(), key, seed)) continue;
    auto records = pg::read_run_csv(entry.path());
    const std::string label = key.algorithm + " g0=" + key.gamma0_label;
    groups[label].push_back(records);
    if (key.gamma0_label != "theory")
      by_alg_gamma[key.algorithm][std::stod(key.gamma0_label)].push_back(std::move(records));
    ++n_files;
  }
  if (groups.empty()) {
    std::cerr << "no run CSVs found in " << dir << "\n";
    return 2;
  }

  std::map<std::string, pg::AggregateSeries> aggregated;
  std::vector<pg::SvgSeries> series;
  for (const auto& [label, runs] : groups) {
    pg::AggregateSeries agg = pg::aggregate_runs(runs, *metric);
    pg::SvgSeries s;
    s.label = label;
    for (std::size_t i = 0; i < agg.t.size(); ++i) {
      s.x.push_back(static_cast<double>(agg.probes[i]));
      s.y.push_back(agg.q50[i]);
      s.y_lo.push_back(agg.q25[i]);
      s.y_hi.push_back(agg.q75[i]);
    }
    series.push_back(std::move(s));
    aggregated.emplace(label, std::move(agg));
  }
  if (!summary_csv.empty()) pg::write_summary_csv(summary_csv, aggregated);
  if (!out_svg.empty()) {
    pg::SvgOptions opt;
    opt.title = std::string(pg::metric_name(*metric)) + " (median, interquartile band)";
    opt.x_label = "system probes";
    opt.y_label = pg::metric_name(*metric);
    pg::write_svg_plot(out_svg, series, opt);
  }

  if (!robustness_csv.empty() || !robustness_svg.empty()) {
    std::map<std::string, std::vector<pg::RobustnessPoint>> curves;
    for (const auto& [alg, by_gamma] : by_alg_gamma)
      curves[alg] = pg::robustness_curve(by_gamma, *metric, threshold);
    if (!robustness_csv.empty()) pg::write_robustness_csv(robustness_csv, curves);
    if (!robustness_svg.empty()) {
      std::vector<pg::SvgSeries> rseries;
      for (const auto& [alg, curve] : curves) {
        pg::SvgSeries s;
        s.label = alg;
        for (const auto& p : curve) {
          s.x.push_back(p.gamma0);
          s.y.push_back(p.q50);
          s.y_lo.push_back(p.q25);
          s.y_hi.push_back(p.q75);
        }
        rseries.push_back(std::move(s));
      }
      pg::SvgOptions opt;
      opt.title = "probes to reach threshold " + pg::format_g17(threshold);
      opt.x_label = "initial step size gamma0";
      opt.y_label = "system probes";
      opt.log_x = true;
      pg::write_svg_plot(robustness_svg, rseries, opt);
    }
  }
  std::cout << "aggregated " << n_files << " runs in " << groups.size() << " groups\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polygrad benchmark driver"};
  app.require_subcommand(1);

  std::string config_path;
  unsigned workers = 0;

  auto* run_cmd = app.add_subcommand("run", "execute the configured runs (no sweep expansion)");
  run_cmd->add_option("config", config_path, "experiment config JSON")->required();
  run_cmd->add_option("--workers", workers, "worker threads (default: PGBENCH_WORKERS or #cores)");

  auto* sweep_cmd = app.add_subcommand("sweep", "expand the gamma0 grid and run everything");
  sweep_cmd->add_option("config", config_path, "experiment config JSON")->required();
  sweep_cmd->add_option("--workers", workers, "worker threads");

  std::string dir, metric = "mean_return", out_svg, summary_csv, robustness_csv, robustness_svg;
  double threshold = 0.0;
  auto* agg_cmd = app.add_subcommand("aggregate", "quantile-aggregate run CSVs into plots");
  agg_cmd->add_option("dir", dir, "directory of run CSVs")->required();
  agg_cmd->add_option("--metric", metric, "CSV column to aggregate (default mean_return)");
  agg_cmd->add_option("--out", out_svg, "learning-curve SVG path");
  agg_cmd->add_option("--summary", summary_csv, "summary CSV path");
  agg_cmd->add_option("--threshold", threshold, "metric threshold for the robustness report");
  agg_cmd->add_option("--robustness", robustness_csv, "robustness CSV path");
  agg_cmd->add_option("--robustness-svg", robustness_svg, "robustness SVG path");

  std::string suite, report_path;
  auto* check_cmd = app.add_subcommand("check", "run a verification suite");
  check_cmd->add_option("suite", suite, "estimators|schedules|optimizers|oracle|rates|determinism|acceptance")
      ->required();
  check_cmd->add_option("--workers", workers, "worker threads");
  check_cmd->add_option("--json", report_path, "write a machine-readable report");

  double Mg = 1.0, Mh = 0.0, l2 = 0.0, rmax = 1.0, gamma = 0.9;
  int H = 1;
  auto* const_cmd = app.add_subcommand("constants", "print the derived estimator constants");
  const_cmd->add_option("--Mg", Mg, "score bound M_g")->required();
  const_cmd->add_option("--Mh", Mh, "log-density hessian bound M_h")->required();
  const_cmd->add_option("--l2", l2, "hessian Lipschitz bound l_2");
  const_cmd->add_option("--rmax", rmax, "reward bound")->required();
  const_cmd->add_option("--gamma", gamma, "discount")->required();
  const_cmd->add_option("--H", H, "horizon")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return do_run(config_path, /*sweep=*/false, workers);
    if (sweep_cmd->parsed()) return do_run(config_path, /*sweep=*/true, workers);
    if (agg_cmd->parsed())
      return do_aggregate(dir, metric, out_svg, summary_csv, threshold, robustness_csv,
                          robustness_svg);
    if (check_cmd->parsed()) {
      const auto results = pg::checks::run_suite(suite, workers);
      pg::checks::print_report(std::cout, results);
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << pg::checks::report_json(results) << "\n";
      }
      return pg::checks::all_passed(results) ? 0 : 1;
    }
    if (const_cmd->parsed()) {
      const pg::EstimatorConstants c = pg::estimator_constants(Mg, Mh, l2, rmax, gamma, H);
      std::cout << "L_g " << pg::format_g17(c.L_g) << "\n"
                << "sigma_g " << pg::format_g17(c.sigma_g) << "\n"
                << "sigma_h " << pg::format_g17(c.sigma_h) << "\n"
                << "L_h " << pg::format_g17(c.L_h) << "\n"
                << "D_g " << pg::format_g17(c.D_g) << "\n"
                << "D_h " << pg::format_g17(c.D_h) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
