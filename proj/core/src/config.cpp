#include "pg/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "pg/types.hpp"

namespace pg {
namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument("config: " + msg);
}

}  // namespace

std::uint64_t ExperimentConfig::config_hash() const { return fnv1a64(canonical); }

ScheduleVariant ExperimentConfig::variant() const {
  const std::string v = schedule.value("variant", "main");
  if (v == "main") return ScheduleVariant::kMain;
  if (v == "detailed") return ScheduleVariant::kDetailed;
  throw std::invalid_argument("config: unknown schedule variant '" + v + "'");
}

std::optional<double> ExperimentConfig::gamma0_for(Algorithm alg) const {
  if (!schedule.contains("gamma0")) return std::nullopt;
  const auto& g = schedule.at("gamma0");
  if (g.is_number()) return g.get<double>();
  if (g.is_object()) {
    const std::string key = algorithm_name(alg);
    if (g.contains(key)) return g.at(key).get<double>();
    return std::nullopt;
  }
  throw std::invalid_argument("config: schedule.gamma0 must be a number or a map");
}

ExperimentConfig parse_config_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  require(j.contains("env") && j.at("env").is_object(), "missing env section");
  require((j.contains("policy") && j.at("policy").is_object()) || j.at("env").value("type", "") == "synth",
          "missing policy section");
  require(j.contains("algorithms") && j.at("algorithms").is_array(), "missing algorithms list");
  require(j.contains("run") && j.at("run").is_object(), "missing run section");

  cfg.env = j.at("env");
  const std::string env_type = cfg.env.value("type", "");
  require(env_type == "finite" || env_type == "point_mass" || env_type == "synth",
          "env.type must be finite | point_mass | synth");
  cfg.policy = j.contains("policy") ? j.at("policy") : nlohmann::json::object();
  if (env_type != "synth") {
    const std::string ptype = cfg.policy.value("type", "");
    require(ptype == "softmax_tabular" || ptype == "gaussian_linear" || ptype == "cauchy_linear",
            "policy.type must be softmax_tabular | gaussian_linear | cauchy_linear");
    if (env_type == "finite")
      require(ptype == "softmax_tabular", "finite env requires softmax_tabular policy");
    if (env_type == "point_mass")
      require(ptype != "softmax_tabular", "point_mass env requires a continuous-action policy");
  }

  for (const auto& a : j.at("algorithms")) {
    const auto alg = algorithm_from_name(a.get<std::string>());
    require(alg.has_value(), "unknown algorithm '" + a.get<std::string>() + "'");
    cfg.algorithms.push_back(*alg);
  }
  require(!cfg.algorithms.empty(), "algorithms list is empty");

  cfg.schedule = j.value("schedule", nlohmann::json::object());
  if (j.contains("sweep")) {
    const auto& sweep = j.at("sweep");
    require(sweep.is_object() && sweep.contains("gamma0"), "sweep requires a gamma0 grid");
    for (const auto& g : sweep.at("gamma0")) {
      const double v = g.get<double>();
      require(v > 0.0, "sweep gamma0 values must be positive");
      cfg.sweep_gamma0.push_back(v);
    }
    require(!cfg.sweep_gamma0.empty(), "sweep gamma0 grid is empty");
  }

  const auto& run = j.at("run");
  cfg.T = run.value("T", 2);
  require(cfg.T >= 2, "run.T must be >= 2");
  cfg.batch_size = run.value("batch_size", 1);
  require(cfg.batch_size >= 1, "run.batch_size must be >= 1");
  require(run.contains("seeds") && run.at("seeds").is_array() && !run.at("seeds").empty(),
          "run.seeds must be a nonempty list");
  std::set<std::uint64_t> seen;
  for (const auto& s : run.at("seeds")) {
    const auto seed = s.get<std::uint64_t>();
    require(seen.insert(seed).second, "seeds must be distinct");
    cfg.seeds.push_back(seed);
  }
  if (run.contains("horizon")) {
    cfg.horizon_override = run.at("horizon").get<int>();
    require(*cfg.horizon_override >= 1, "run.horizon must be >= 1");
  }
  cfg.theta0_norm = run.value("theta0_norm", 0.0);
  cfg.out_dir = run.value("out_dir", std::string("runs"));

  cfg.canonical = j.dump();
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return parse_config_json(j);
}

}  // namespace pg
