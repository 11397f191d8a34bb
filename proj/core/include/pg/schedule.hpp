#pragma once

#include <optional>
#include <string>

namespace pg {

enum class Algorithm {
  kVanillaPg,
  kNMpg,
  kNPgIgt,
  kNPgIgtFosp,
  kHarpg,
  kNHarpg,
};

/// Each method ships two published parameterizations: the default (kMain)
/// and a long-horizon variant (kDetailed). They differ only in the horizon
/// factor and, for HARPG, in the momentum law (2/(t+2) vs 5/(t+5)) and the
/// auto step-size constant.
enum class ScheduleVariant { kMain, kDetailed };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

/// Parameters of the prescribed (gamma_t, eta_t, H) sequences.
///
/// When `gamma0` is set, step sizes follow the tuned experimental form
/// (gamma_0 scaled by the method's decay law); when unset, normalized
/// methods use the theory constant 6 M_g / mu_F and HARPG derives gamma_0
/// from (sigma_g, L_g, D_h) if those are provided. Vanilla-PG has no
/// theory form and always requires gamma0.
struct ScheduleSpec {
  Algorithm kind = Algorithm::kNHarpg;
  ScheduleVariant variant = ScheduleVariant::kMain;
  double M_g = 1.0;
  double mu_F = 1.0;
  double discount = 0.9;
  int T = 1;
  std::optional<double> gamma0;
  // Problem constants for the HARPG auto gamma_0 rule.
  std::optional<double> sigma_g;
  std::optional<double> L_g;
  std::optional<double> D_h;
};

void validate(const ScheduleSpec& spec);

/// gamma_t for 0 <= t < spec.T. Throws std::out_of_range past T and
/// std::invalid_argument when required constants are missing.
double step_size(const ScheduleSpec& spec, int t);

/// eta_t for 0 <= t < spec.T; eta_0 = 1 and eta is non-increasing for every
/// kind. Vanilla-PG carries no momentum and reports eta_t = 1.
double momentum(const ScheduleSpec& spec, int t);

/// Prescribed trajectory length for a T-iteration run: ceil of the
/// variant's expression (natural log), clamped to >= 1.
int horizon(const ScheduleSpec& spec);

/// Auto-derived HARPG gamma_0 = min{ 1/(8 sqrt(6) (L_g + sigma_g + D_h gamma^H)),
/// sqrt(2) M_g / (sqrt(3) sigma_g mu_F) } (main) or the detailed-variant
/// analogue with 8 sqrt(3) and gamma^{2H}. Requires sigma_g, L_g, D_h.
double harpg_auto_gamma0(const ScheduleSpec& spec);

}  // namespace pg
