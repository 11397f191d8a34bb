#include "pg/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pg {

EstimatorConstants estimator_constants(double M_g, double M_h, double l_2,
                                       double r_max, double discount, int H) {
  if (!(M_g > 0.0) || !(M_h >= 0.0) || !(l_2 >= 0.0) || !(r_max > 0.0))
    throw std::invalid_argument("estimator_constants: bounds must be positive");
  if (!(discount > 0.0) || !(discount < 1.0))
    throw std::invalid_argument("estimator_constants: discount must lie in (0,1)");
  if (H < 1) throw std::invalid_argument("estimator_constants: H must be >= 1");

  const double g = discount;
  const double om = 1.0 - g;
  EstimatorConstants c;
  c.L_g = r_max * (M_g * M_g + M_h) / (om * om);
  c.sigma_g = std::sqrt(r_max * r_max * M_g * M_g / (om * om * om));
  c.sigma_h = std::sqrt(r_max * r_max * (double(H) * H * std::pow(M_g, 4) + M_h * M_h) /
                        std::pow(om, 4));
  const double max_term = std::max({M_h,
                                    g * M_g * M_g / om,
                                    l_2 / M_g,
                                    M_h * g / om,
                                    (M_g * (1.0 + g) + M_h * g * om) / (1.0 - g * g)});
  c.L_h = r_max * M_g * M_h / (om * om) +
          r_max * std::pow(M_g, 3) * (1.0 + g) / std::pow(om, 3) +
          r_max * M_g / om * max_term;
  c.D_g = M_g * r_max / om * std::sqrt(1.0 / om + H);
  c.D_h = r_max * (M_h + M_g * M_g) / om * (H + 1.0 / om);
  return c;
}

}  // namespace pg
