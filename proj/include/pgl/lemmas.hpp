#ifndef PGL_LEMMAS_HPP
#define PGL_LEMMAS_HPP

#include <functional>
#include <map>

#include "pgl/geometry.hpp"

namespace pgl {

struct ContainmentResult {
  double level = 0;  // 0.9 * l1, realizing l in (0, l1)
  double l1 = 0;     // second-stage minimum (handles disconnected sublevels)
  double l2 = 0;     // minimum of phi on the boundary shell at rho + eps
  double grid_resolution = 0;
  bool certified = false;
  std::optional<Vector> violator;  // grid point with phi <= level outside
};

struct ContainmentOptions {
  double grid_resolution = 0.01;
  // Dimensions above this fall back to random search and stay uncertified.
  int max_grid_dim = 3;
  long random_samples = 100000;
  std::uint64_t seed = 7;
  Exec exec = Exec::Parallel;
};

// Two-stage sublevel containment: l2 = min of phi over the shell at distance
// rho + eps from the attractor, l1 = min of phi over grid points outside the
// open (rho+eps)-neighborhood with phi <= l2, level = 0.9 l1. Certification
// is an exhaustive grid sweep of the bounding box of the sigma-ball.
ContainmentResult containment_level(
    const std::function<double(const Vector &)> &phi,
    const ConvexSet &attractor, double epsilon, double rho, double sigma,
    const ContainmentOptions &opts = {});

struct UnderestimationAlphas {
  double alpha_q = 0;  // c / (K_phi sigma_hat^2)
  double alpha_l = 0;  // c / (K_phi sigma_hat)
  double coeff_quad = 0;     // c / sigma_hat^2
  double coeff_lin = 0;      // c / sigma_hat
  double combined_lin = 0;   // c / (2 sigma_hat)
  double combined_quad = 0;  // c / (2 sigma_hat^2)
};

UnderestimationAlphas underestimation_alphas(double c, double k_phi,
                                             double sigma_hat);

struct StepSizeBudget {
  double alpha_max = 0;  // min over components
  std::map<std::string, double> components;
  std::map<std::string, double> params;
};

// Relative-growth case: alpha_max = min(1/(w beta), alpha_1), where alpha_1
// is the largest value such that alpha b (1 - alpha w beta) <= b_o holds on
// all of (0, alpha_1].
StepSizeBudget budget_growth(double w, double beta, double b, double b_o);

// Locally-bounded case.
StepSizeBudget budget_bounded(double w, double bound, double b, double c,
                              double sigma_o, double epsilon_o, double rho_o,
                              double b_o);

// Locally-Lipschitz case; s_star = max over the attractor of ||s||^2.
StepSizeBudget budget_lipschitz(double w, double lipschitz, double s_star,
                                double b, double c, double sigma_o,
                                double epsilon_o, double rho_o, double b_o);

struct RobustnessMargins {
  double a_max = 0;  // c / (2 sigma_hat L_gradV)
  double r_max = 0;  // c / (2 sigma_hat^2 L_gradV)
  double c = 0;
  double sigma_hat = 0;
  double l_grad_v = 0;
  double b = 0;
  double epsilon_hat = 0;

  double b_hat(double a, double r) const {
    return b + l_grad_v * epsilon_hat * (a + r * epsilon_hat);
  }

  // Perturbed lower bound (c/(2s) - aL) d + (c/(2s^2) - rL) d^2.
  std::function<double(const Vector &)> phi_hat(double a, double r,
                                                const ConvexSet &attractor) const;
};

RobustnessMargins robustness_margins(double c, double sigma_hat,
                                     double l_grad_v, double b,
                                     double epsilon_hat);

}  // namespace pgl

#endif
