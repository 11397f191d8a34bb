#include "pg/oracle.hpp"

namespace pg::oracle {

std::vector<int> optimal_policy(const FiniteMdp& mdp) {
  const int S = mdp.n_states();
  const int A = mdp.n_actions();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(S);
  for (int iter = 0; iter < 1000000; ++iter) {
    Eigen::VectorXd next(S);
    for (int s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        const double q = mdp.reward(s, a) + mdp.discount() * mdp.transition_row(s, a).dot(v);
        if (q > best) best = q;
      }
      next(s) = best;
    }
    const double delta = (next - v).cwiseAbs().maxCoeff();
    v = next;
    if (delta < 1e-14) break;
  }
  std::vector<int> actions(S, 0);
  for (int s = 0; s < S; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int a = 0; a < A; ++a) {
      const double q = mdp.reward(s, a) + mdp.discount() * mdp.transition_row(s, a).dot(v);
      if (q > best + 1e-12) {  // strict improvement; ties keep the lowest index
        best = q;
        arg = a;
      }
    }
    actions[s] = arg;
  }
  return actions;
}

int reference_horizon(const FiniteMdp& mdp, double M_g, double tol) {
  const double g = mdp.discount();
  const double om = 1.0 - g;
  int h = 1;
  while (h < 5000) {
    const double d_g = M_g * mdp.r_max() / om * std::sqrt(1.0 / om + h);
    if (d_g * std::pow(g, h) < tol) break;
    ++h;
  }
  return h;
}

}  // namespace pg::oracle
