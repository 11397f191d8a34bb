#include "pg/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace pg {
namespace {

void check_iter(const ScheduleSpec& spec, int t) {
  if (t < 0 || t >= spec.T) throw std::out_of_range("schedule: iteration index outside [0, T)");
}

double decay(int t, double exponent) { return std::pow(2.0 / (t + 2.0), exponent); }

double theory_step(const ScheduleSpec& spec) {
  if (!(spec.M_g > 0.0) || !(spec.mu_F > 0.0))
    throw std::invalid_argument("schedule: M_g and mu_F must be positive");
  return 6.0 * spec.M_g / spec.mu_F;
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kVanillaPg: return "vanilla_pg";
    case Algorithm::kNMpg: return "n_mpg";
    case Algorithm::kNPgIgt: return "n_pg_igt";
    case Algorithm::kNPgIgtFosp: return "n_pg_igt_fosp";
    case Algorithm::kHarpg: return "harpg";
    case Algorithm::kNHarpg: return "n_harpg";
  }
  return "unknown";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
  for (Algorithm a : {Algorithm::kVanillaPg, Algorithm::kNMpg, Algorithm::kNPgIgt,
                      Algorithm::kNPgIgtFosp, Algorithm::kHarpg, Algorithm::kNHarpg}) {
    if (name == algorithm_name(a)) return a;
  }
  return std::nullopt;
}

void validate(const ScheduleSpec& spec) {
  if (spec.T < 1) throw std::invalid_argument("schedule: T must be >= 1");
  if (!(spec.discount > 0.0) || !(spec.discount < 1.0))
    throw std::invalid_argument("schedule: discount must lie in (0,1)");
  if (spec.gamma0 && !(*spec.gamma0 > 0.0))
    throw std::invalid_argument("schedule: gamma0 must be positive");
}

double momentum(const ScheduleSpec& spec, int t) {
  check_iter(spec, t);
  switch (spec.kind) {
    case Algorithm::kVanillaPg:
      return 1.0;  // fresh gradient every step
    case Algorithm::kNMpg:
      return decay(t, 2.0 / 3.0);
    case Algorithm::kNPgIgt:
      return decay(t, 4.0 / 5.0);
    case Algorithm::kNPgIgtFosp:
      return decay(t, 4.0 / 7.0);
    case Algorithm::kHarpg:
      if (spec.variant == ScheduleVariant::kDetailed) return 5.0 / (t + 5.0);
      return 2.0 / (t + 2.0);
    case Algorithm::kNHarpg:
      return 2.0 / (t + 2.0);
  }
  throw std::logic_error("momentum: unhandled kind");
}

double harpg_auto_gamma0(const ScheduleSpec& spec) {
  if (!spec.sigma_g || !spec.L_g || !spec.D_h)
    throw std::invalid_argument("harpg_auto_gamma0: sigma_g, L_g and D_h are required");
  const double sg = *spec.sigma_g;
  const double lg = *spec.L_g;
  const double dh = *spec.D_h;
  if (!(sg > 0.0)) throw std::invalid_argument("harpg_auto_gamma0: sigma_g must be positive");
  const int H = horizon(spec);
  const double second = std::sqrt(2.0) * spec.M_g / (std::sqrt(3.0) * sg * spec.mu_F);
  double first;
  if (spec.variant == ScheduleVariant::kDetailed) {
    first = 1.0 / (8.0 * std::sqrt(3.0) * (lg + sg + dh * std::pow(spec.discount, 2.0 * H)));
  } else {
    first = 1.0 / (8.0 * std::sqrt(6.0) * (lg + sg + dh * std::pow(spec.discount, H)));
  }
  return std::min(first, second);
}

double step_size(const ScheduleSpec& spec, int t) {
  check_iter(spec, t);
  switch (spec.kind) {
    case Algorithm::kVanillaPg:
      if (!spec.gamma0) throw std::invalid_argument("vanilla_pg: gamma0 is required");
      return *spec.gamma0 * decay(t, 2.0 / 3.0);
    case Algorithm::kNMpg:
    case Algorithm::kNPgIgt:
    case Algorithm::kNHarpg:
      // Tuned form 2 gamma_0 / (t+2); theory form 6 M_g / (mu_F (t+2)).
      if (spec.gamma0) return 2.0 * (*spec.gamma0) / (t + 2.0);
      return theory_step(spec) / (t + 2.0);
    case Algorithm::kNPgIgtFosp:
      if (spec.gamma0) return *spec.gamma0 * decay(t, 5.0 / 7.0);
      return decay(t, 5.0 / 7.0);
    case Algorithm::kHarpg: {
      const double g0 = spec.gamma0 ? *spec.gamma0 : harpg_auto_gamma0(spec);
      return g0 * std::sqrt(momentum(spec, t));
    }
  }
  throw std::logic_error("step_size: unhandled kind");
}

int horizon(const ScheduleSpec& spec) {
  validate(spec);
  const double inv = 1.0 / (1.0 - spec.discount);
  double factor = 1.0;
  double log_arg = spec.T + 1.0;
  if (spec.variant == ScheduleVariant::kDetailed) {
    switch (spec.kind) {
      case Algorithm::kNMpg: factor = 5.0 / 3.0; break;
      case Algorithm::kNPgIgt: factor = 9.0 / 5.0; break;
      case Algorithm::kNHarpg: factor = 3.0 / 2.0; break;
      case Algorithm::kHarpg:
        factor = 2.0;
        log_arg = spec.T + 4.0;
        break;
      default: break;
    }
  }
  const double h = factor * inv * std::log(log_arg);
  const int ceiled = static_cast<int>(std::ceil(h));
  return ceiled < 1 ? 1 : ceiled;
}

}  // namespace pg
