#pragma once

namespace pg {

/// Regularity and truncation constants of the policy-gradient objective,
/// all derived from the policy bounds (M_g, M_h, l_2), the reward bound
/// r_max, the discount and the horizon:
///   L_g     smoothness of J,               r_max (M_g^2 + M_h) / (1-g)^2
///   sigma_g gradient-noise bound,          sigma_g^2 = r_max^2 M_g^2 / (1-g)^3
///   sigma_h Hessian-noise bound,           sigma_h^2 = r_max^2 (H^2 M_g^4 + M_h^2) / (1-g)^4
///   L_h     Hessian Lipschitz constant (explicit max-expression)
///   D_g,D_h truncation constants:          |grad J_H - grad J| <= D_g gamma^H etc.
struct EstimatorConstants {
  double L_g = 0.0;
  double sigma_g = 0.0;
  double sigma_h = 0.0;
  double L_h = 0.0;
  double D_g = 0.0;
  double D_h = 0.0;
};

EstimatorConstants estimator_constants(double M_g, double M_h, double l_2,
                                       double r_max, double discount, int H);

}  // namespace pg
