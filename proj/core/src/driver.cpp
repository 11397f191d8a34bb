#include "pg/driver.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>

#include "pg/envs.hpp"
#include "pg/optimizers.hpp"
#include "pg/policies.hpp"
#include "pg/runio.hpp"
#include "pg/synth.hpp"

namespace pg {
namespace {

// Owns whichever env/policy/problem combination the config selects and
// hands out fresh SampleModel instances over it.
struct World {
  std::unique_ptr<FiniteMdp> mdp;
  std::unique_ptr<SoftmaxTabularPolicy> softmax;
  std::unique_ptr<PointMassEnv> point_mass;
  std::unique_ptr<GaussianLinearPolicy> gaussian;
  std::unique_ptr<CauchyLinearPolicy> cauchy;
  std::unique_ptr<SynthProblem> synth;
  double discount = 0.9;
  int dim = 0;

  std::unique_ptr<SampleModel> make_model(int horizon) const {
    if (synth) return std::make_unique<SynthModel>(*synth);
    if (mdp) return std::make_unique<TrajectoryModel<FiniteMdp, SoftmaxTabularPolicy>>(
        *mdp, *softmax, discount, horizon);
    if (gaussian)
      return std::make_unique<TrajectoryModel<PointMassEnv, GaussianLinearPolicy>>(
          *point_mass, *gaussian, discount, horizon);
    return std::make_unique<TrajectoryModel<PointMassEnv, CauchyLinearPolicy>>(
        *point_mass, *cauchy, discount, horizon);
  }
};

FiniteMdp build_finite(const nlohmann::json& env) {
  const double discount = env.value("discount", 0.9);
  const std::string name = env.value("name", "two_state_chain");
  if (env.contains("transition")) {
    std::vector<Matrix> P;
    for (const auto& per_state : env.at("transition")) {
      Matrix rows(per_state.size(), per_state[0].size());
      for (std::size_t a = 0; a < per_state.size(); ++a)
        for (std::size_t sp = 0; sp < per_state[a].size(); ++sp)
          rows(a, sp) = per_state[a][sp].get<double>();
      P.push_back(std::move(rows));
    }
    const auto& rj = env.at("reward");
    Matrix r(rj.size(), rj[0].size());
    for (std::size_t s = 0; s < rj.size(); ++s)
      for (std::size_t a = 0; a < rj[s].size(); ++a) r(s, a) = rj[s][a].get<double>();
    const auto& dj = env.at("init_dist");
    Eigen::VectorXd rho(dj.size());
    for (std::size_t s = 0; s < dj.size(); ++s) rho(s) = dj[s].get<double>();
    return FiniteMdp(std::move(P), std::move(r), std::move(rho), discount,
                     env.value("r_max", 1.0));
  }
  if (name == "two_state_chain") return FiniteMdp::two_state_chain(discount);
  if (name == "five_state_walk") return FiniteMdp::five_state_walk(discount);
  throw std::invalid_argument("config: unknown bundled finite MDP '" + name + "'");
}

PointMassEnv build_point_mass(const nlohmann::json& env) {
  const int dim = env.value("dim", 2);
  PointMassEnv base = PointMassEnv::standard(dim);
  PointMassEnv::Config cfg = base.config();
  cfg.action_cost = env.value("action_cost", cfg.action_cost);
  cfg.r_max = env.value("r_max", cfg.r_max);
  cfg.action_clip = env.value("action_clip", cfg.action_clip);
  cfg.noise_scale = env.value("noise_scale", cfg.noise_scale);
  cfg.init_noise = env.value("init_noise", cfg.init_noise);
  if (env.contains("start")) {
    const auto& sj = env.at("start");
    if (static_cast<int>(sj.size()) != dim)
      throw std::invalid_argument("config: start dimension mismatch");
    for (int i = 0; i < dim; ++i) cfg.start(i) = sj[i].get<double>();
  }
  return PointMassEnv(std::move(cfg));
}

FeatureMap build_features(const nlohmann::json& policy, int state_dim) {
  const std::string kind = policy.value("features", "tanh");
  if (kind == "raw") return FeatureMap::raw(state_dim);
  if (kind == "tanh") return FeatureMap::bounded_tanh(state_dim);
  if (kind == "fourier")
    return FeatureMap::random_fourier(state_dim, policy.value("n_features", 16),
                                      policy.value("bandwidth", 1.0),
                                      policy.value("feature_seed", std::uint64_t{17}));
  throw std::invalid_argument("config: unknown feature map '" + kind + "'");
}

World build_world(const ExperimentConfig& cfg) {
  World w;
  const std::string env_type = cfg.env.value("type", "");
  if (env_type == "finite") {
    w.mdp = std::make_unique<FiniteMdp>(build_finite(cfg.env));
    w.discount = w.mdp->discount();
    w.softmax = std::make_unique<SoftmaxTabularPolicy>(w.mdp->n_states(), w.mdp->n_actions());
    w.dim = w.softmax->dim();
  } else if (env_type == "point_mass") {
    w.point_mass = std::make_unique<PointMassEnv>(build_point_mass(cfg.env));
    w.discount = cfg.env.value("discount", 0.99);
    FeatureMap f = build_features(cfg.policy, w.point_mass->state_dim());
    const double sigma = cfg.policy.value("sigma", 0.5);
    const int adim = w.point_mass->action_dim();
    if (cfg.policy.value("type", "") == "gaussian_linear") {
      std::optional<double> clip = w.point_mass->action_clip();
      if (cfg.policy.contains("action_clip")) clip = cfg.policy.at("action_clip").get<double>();
      std::optional<double> theta_bound;
      if (cfg.policy.contains("theta_norm_bound"))
        theta_bound = cfg.policy.at("theta_norm_bound").get<double>();
      w.gaussian = std::make_unique<GaussianLinearPolicy>(std::move(f), sigma, adim, clip,
                                                          theta_bound);
      w.dim = w.gaussian->dim();
    } else {
      w.cauchy = std::make_unique<CauchyLinearPolicy>(std::move(f), sigma, adim);
      w.dim = w.cauchy->dim();
    }
  } else if (env_type == "synth") {
    const std::string kind = cfg.env.value("kind", "quadratic");
    const double mu = cfg.env.value("mu", 1.0);
    const int dim = cfg.env.value("dim", 10);
    const double gn = cfg.env.value("noise", 1.0);
    const double hn = cfg.env.value("hvp_noise", gn);
    const double j_star = cfg.env.value("j_star", 0.0);
    if (kind == "quadratic") {
      w.synth = std::make_unique<SynthProblem>(SynthProblem::quadratic(mu, dim, gn, hn, j_star));
    } else if (kind == "smoothed_norm") {
      w.synth = std::make_unique<SynthProblem>(SynthProblem::smoothed_norm(
          mu, cfg.env.value("eps_floor", 0.1), dim, gn, hn, j_star, cfg.env.value("width", 1.0)));
    } else {
      throw std::invalid_argument("config: unknown synth kind '" + kind + "'");
    }
    w.discount = cfg.env.value("discount", 0.9);
    w.dim = dim;
  } else {
    throw std::invalid_argument("config: unknown env type");
  }
  return w;
}

ScheduleSpec build_schedule(const ExperimentConfig& cfg, Algorithm alg, double discount,
                            std::optional<double> gamma0) {
  ScheduleSpec spec;
  spec.kind = alg;
  spec.variant = cfg.variant();
  spec.T = cfg.T;
  spec.discount = discount;
  spec.M_g = cfg.schedule.value("M_g", 1.0);
  spec.mu_F = cfg.schedule.value("mu_F", 1.0);
  if (cfg.schedule.contains("sigma_g")) spec.sigma_g = cfg.schedule.at("sigma_g").get<double>();
  if (cfg.schedule.contains("L_g")) spec.L_g = cfg.schedule.at("L_g").get<double>();
  if (cfg.schedule.contains("D_h")) spec.D_h = cfg.schedule.at("D_h").get<double>();
  spec.gamma0 = gamma0;
  return spec;
}

struct Task {
  Algorithm alg;
  std::optional<double> gamma0;
  std::string gamma0_label;
  std::uint64_t seed;
};

}  // namespace

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PGBENCH_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, bool sweep, unsigned workers) {
  const World world = build_world(cfg);
  std::filesystem::create_directories(cfg.out_dir);

  std::vector<Task> tasks;
  for (Algorithm alg : cfg.algorithms) {
    std::vector<std::optional<double>> gammas;
    if (sweep && !cfg.sweep_gamma0.empty()) {
      for (double g : cfg.sweep_gamma0) gammas.emplace_back(g);
    } else {
      gammas.push_back(cfg.gamma0_for(alg));
    }
    for (const auto& g : gammas) {
      const std::string label = g ? format_g17(*g) : "theory";
      for (std::uint64_t seed : cfg.seeds) tasks.push_back({alg, g, label, seed});
    }
  }

  ExperimentOutcome outcome;
  outcome.runs.resize(tasks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      RunOutcome& ro = outcome.runs[i];
      ro.algorithm = algorithm_name(task.alg);
      ro.gamma0_label = task.gamma0_label;
      ro.seed = task.seed;
      try {
        ScheduleSpec spec = build_schedule(cfg, task.alg, world.discount, task.gamma0);
        const int H = cfg.horizon_override ? *cfg.horizon_override : horizon(spec);
        auto model = world.make_model(H);
        ParamVector theta0 = ParamVector::Zero(world.dim);
        if (cfg.theta0_norm != 0.0) theta0(0) = cfg.theta0_norm;
        const std::uint64_t stream = fnv1a64(std::string(ro.algorithm) + "|" + ro.gamma0_label +
                                             "|" + std::to_string(task.seed));
        RunResult res =
            run_optimizer(task.alg, *model, spec, theta0, cfg.batch_size, task.seed, stream);
        const std::string stem = run_file_stem(ro.algorithm, ro.gamma0_label, task.seed);
        ro.file = stem + ".csv";
        write_run_csv(cfg.out_dir / ro.file, res.records);
        if (res.aborted) {
          ro.ok = false;
          ro.error = res.abort_reason;
        }
      } catch (const std::exception& e) {
        ro.ok = false;
        ro.error = e.what();
      }
    }
  };

  const unsigned n_workers = std::min<std::size_t>(resolve_workers(workers), tasks.size());
  std::vector<std::thread> pool;
  for (unsigned i = 0; i + 1 < n_workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  nlohmann::json manifest;
  manifest["config_hash"] = std::to_string(cfg.config_hash());
  manifest["tool"] = "polygrad";
  manifest["version"] = "0.1.0";
  manifest["csv_header"] = kRunCsvHeader;
  manifest["runs"] = nlohmann::json::array();
  for (const RunOutcome& ro : outcome.runs) {
    nlohmann::json r;
    r["file"] = ro.file;
    r["algorithm"] = ro.algorithm;
    r["gamma0"] = ro.gamma0_label;
    r["seed"] = ro.seed;
    r["status"] = ro.ok ? "ok" : "failed";
    if (!ro.ok) r["error"] = ro.error;
    manifest["runs"].push_back(r);
    if (!ro.ok) ++outcome.n_failed;
  }
  outcome.manifest = cfg.out_dir / "manifest.json";
  std::ofstream mf(outcome.manifest, std::ios::binary);
  mf << manifest.dump(2) << '\n';
  return outcome;
}

}  // namespace pg
