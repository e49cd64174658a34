#include "pgl/lemmas.hpp"

#include <algorithm>
#include <cmath>

namespace pgl {

namespace {

struct GridSpec {
  Vector lo;
  Vector step;
  std::vector<long> counts;
  long total = 1;

  Vector point(long flat) const {
    Vector p(lo.size());
    for (std::size_t k = 0; k < lo.size(); ++k) {
      long idx = flat % counts[k];
      flat /= counts[k];
      p[k] = lo[k] + idx * step[k];
    }
    return p;
  }
};

GridSpec make_grid(const BoxSet &bb, double resolution) {
  GridSpec g;
  g.lo = bb.lo;
  const std::size_t n = bb.lo.size();
  g.step.resize(n);
  g.counts.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double span = bb.hi[k] - bb.lo[k];
    long cnt = std::max<long>(2, static_cast<long>(std::floor(span / resolution)) + 1);
    g.counts[k] = cnt;
    g.step[k] = cnt > 1 ? span / (cnt - 1) : 0.0;
    g.total *= cnt;
  }
  return g;
}

double positive_root_increasing(double quad, double lin, double rhs) {
  // Largest alpha with quad alpha^2 + lin alpha <= rhs (quad > 0, lin >= 0).
  if (quad <= 0) throw std::invalid_argument("budget: nonpositive quadratic");
  return (-lin + std::sqrt(lin * lin + 4.0 * quad * rhs)) / (2.0 * quad);
}

void require_positive(double x, const char *name) {
  if (!(x > 0))
    throw std::invalid_argument(std::string(name) + " must be > 0");
}

}  // namespace

ContainmentResult containment_level(
    const std::function<double(const Vector &)> &phi,
    const ConvexSet &attractor, double epsilon, double rho, double sigma,
    const ContainmentOptions &opts) {
  require_positive(rho, "containment_level: rho");
  if (epsilon < 0)
    throw std::invalid_argument("containment_level: epsilon must be >= 0");
  const double shell = rho + epsilon;
  if (!(shell <= sigma))
    throw std::invalid_argument(
        "containment_level: B_{rho+eps}(A) must fit inside B_sigma(A)");

  const int n = attractor.dim();
  BoxSet bb = bounding_box(attractor);
  for (int k = 0; k < n; ++k) {
    bb.lo[k] -= sigma;
    bb.hi[k] += sigma;
  }

  ContainmentResult res;
  res.grid_resolution = opts.grid_resolution;

  std::vector<Vector> points;
  bool gridded = n <= opts.max_grid_dim;
  if (gridded) {
    GridSpec g = make_grid(bb, opts.grid_resolution);
    points.resize(g.total);
    parallel_for(g.total, opts.exec,
                 [&](std::size_t i) { points[i] = g.point(static_cast<long>(i)); });
  } else {
    points.resize(opts.random_samples);
    parallel_for(points.size(), opts.exec, [&](std::size_t i) {
      Rng rng(mix_seed(opts.seed, i));
      Vector p(n);
      for (int k = 0; k < n; ++k) p[k] = rng.uniform(bb.lo[k], bb.hi[k]);
      points[i] = p;
    });
  }

  std::vector<double> dist_vals(points.size()), phi_vals(points.size());
  parallel_for(points.size(), opts.exec, [&](std::size_t i) {
    dist_vals[i] = distance(attractor, points[i]);
    phi_vals[i] = phi(points[i]);
  });

  // Stage one: minimum of phi on the discretized boundary shell.
  double l2 = std::numeric_limits<double>::infinity();
  bool shell_hit = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (dist_vals[i] > sigma) continue;
    if (std::abs(dist_vals[i] - shell) <= opts.grid_resolution) {
      shell_hit = true;
      l2 = std::min(l2, phi_vals[i]);
    }
  }
  if (!shell_hit) {
    res.certified = false;
    return res;  // grid too coarse to see the shell
  }
  if (!(l2 > 0))
    throw std::invalid_argument(
        "containment_level: phi not positive on the boundary shell");
  res.l2 = l2;

  // Stage two: minimum over the l2-sublevel set outside the open
  // neighborhood; binds when sublevel sets are disconnected.
  double l1 = l2;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (dist_vals[i] > sigma || dist_vals[i] < shell) continue;
    if (phi_vals[i] <= l2) l1 = std::min(l1, phi_vals[i]);
  }
  res.l1 = l1;
  res.level = 0.9 * l1;

  // Certification sweep: no point with phi <= level may lie strictly
  // outside the (rho+eps)-neighborhood.
  res.certified = gridded;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (dist_vals[i] > sigma) continue;
    if (phi_vals[i] <= res.level && dist_vals[i] > shell) {
      res.certified = false;
      res.violator = points[i];
      break;
    }
  }
  return res;
}

UnderestimationAlphas underestimation_alphas(double c, double k_phi,
                                             double sigma_hat) {
  require_positive(c, "underestimation_alphas: c");
  require_positive(k_phi, "underestimation_alphas: K_phi");
  require_positive(sigma_hat, "underestimation_alphas: sigma_hat");
  UnderestimationAlphas a;
  a.alpha_q = c / (k_phi * sigma_hat * sigma_hat);
  a.alpha_l = c / (k_phi * sigma_hat);
  a.coeff_quad = c / (sigma_hat * sigma_hat);
  a.coeff_lin = c / sigma_hat;
  a.combined_lin = c / (2.0 * sigma_hat);
  a.combined_quad = c / (2.0 * sigma_hat * sigma_hat);
  return a;
}

StepSizeBudget budget_growth(double w, double beta, double b, double b_o) {
  require_positive(w, "budget_growth: w");
  require_positive(beta, "budget_growth: beta");
  require_positive(b_o, "budget_growth: b_o");
  if (b < 0) throw std::invalid_argument("budget_growth: b must be >= 0");

  const double alpha_ub = 1.0 / (w * beta);
  double alpha_1 = alpha_ub;
  if (b > 0) {
    // alpha b (1 - alpha w beta) peaks at b/(4 w beta); below that peak the
    // constraint binds at the smaller root of the quadratic.
    double peak = b / (4.0 * w * beta);
    if (b_o < peak)
      alpha_1 = (1.0 - std::sqrt(1.0 - 4.0 * w * beta * b_o / b)) /
                (2.0 * w * beta);
  }
  StepSizeBudget out;
  out.components["inv_w_beta"] = alpha_ub;
  out.components["alpha_1"] = alpha_1;
  out.alpha_max = std::min(alpha_ub, alpha_1);
  out.params = {{"w", w}, {"beta", beta}, {"b", b}, {"b_o", b_o}};
  return out;
}

StepSizeBudget budget_bounded(double w, double bound, double b, double c,
                              double sigma_o, double epsilon_o, double rho_o,
                              double b_o) {
  require_positive(w, "budget_bounded: w");
  require_positive(bound, "budget_bounded: B");
  require_positive(c, "budget_bounded: c");
  require_positive(sigma_o, "budget_bounded: sigma_o");
  require_positive(rho_o, "budget_bounded: rho_o");
  require_positive(b_o, "budget_bounded: b_o");
  if (b < 0 || epsilon_o < 0)
    throw std::invalid_argument("budget_bounded: b, epsilon_o must be >= 0");
  const double inner = epsilon_o + rho_o;
  if (!(sigma_o > inner))
    throw std::invalid_argument("budget_bounded: need sigma_o > epsilon_o + rho_o");

  const double alpha_q = c * inner * inner / (sigma_o * sigma_o * w * bound * bound);
  const double alpha_1 = positive_root_increasing(w * bound * bound, b, b_o);
  const double k_phi = 1.01 * w * bound * bound / (inner * inner);

  StepSizeBudget out;
  out.components["alpha_q"] = alpha_q;
  out.components["alpha_1"] = alpha_1;
  out.alpha_max = std::min(alpha_q, alpha_1);
  out.params = {{"w", w},       {"B", bound},        {"b", b},
                {"c", c},       {"sigma_o", sigma_o}, {"epsilon_o", epsilon_o},
                {"rho_o", rho_o}, {"b_o", b_o},       {"K_phi", k_phi}};
  return out;
}

StepSizeBudget budget_lipschitz(double w, double lipschitz, double s_star,
                                double b, double c, double sigma_o,
                                double epsilon_o, double rho_o, double b_o) {
  require_positive(w, "budget_lipschitz: w");
  require_positive(lipschitz, "budget_lipschitz: L");
  require_positive(c, "budget_lipschitz: c");
  require_positive(sigma_o, "budget_lipschitz: sigma_o");
  require_positive(rho_o, "budget_lipschitz: rho_o");
  require_positive(b_o, "budget_lipschitz: b_o");
  if (b < 0 || epsilon_o < 0 || s_star < 0)
    throw std::invalid_argument("budget_lipschitz: b, epsilon_o, s* must be >= 0");
  const double inner = epsilon_o + rho_o;
  if (!(sigma_o > inner))
    throw std::invalid_argument("budget_lipschitz: need sigma_o > epsilon_o + rho_o");

  const double l2w = 2.0 * w * lipschitz * lipschitz;
  const double kappa_floor = 2.0 * w * s_star / (inner * inner);
  const double alpha_q = c / (sigma_o * sigma_o * (l2w + kappa_floor));
  // kappa must be strictly positive; when s* = 0 any positive value works.
  const double kappa = s_star > 0 ? 1.01 * kappa_floor : 0.01 * l2w;
  const double quad = l2w * inner * inner + 2.0 * w * s_star;
  const double alpha_1 = positive_root_increasing(quad, b, b_o);

  StepSizeBudget out;
  out.components["alpha_q"] = alpha_q;
  out.components["alpha_1"] = alpha_1;
  out.alpha_max = std::min(alpha_q, alpha_1);
  out.params = {{"w", w},        {"L", lipschitz},    {"s_star", s_star},
                {"b", b},        {"c", c},            {"sigma_o", sigma_o},
                {"epsilon_o", epsilon_o}, {"rho_o", rho_o}, {"b_o", b_o},
                {"kappa", kappa}, {"K_phi", l2w + kappa}};
  return out;
}

std::function<double(const Vector &)> RobustnessMargins::phi_hat(
    double a, double r, const ConvexSet &attractor) const {
  const double lin = c / (2.0 * sigma_hat) - a * l_grad_v;
  const double quad = c / (2.0 * sigma_hat * sigma_hat) - r * l_grad_v;
  return [lin, quad, attractor](const Vector &y) {
    double d = distance(attractor, y);
    return lin * d + quad * d * d;
  };
}

RobustnessMargins robustness_margins(double c, double sigma_hat,
                                     double l_grad_v, double b,
                                     double epsilon_hat) {
  require_positive(c, "robustness_margins: c");
  require_positive(sigma_hat, "robustness_margins: sigma_hat");
  require_positive(l_grad_v, "robustness_margins: L_gradV");
  if (b < 0 || epsilon_hat < 0)
    throw std::invalid_argument("robustness_margins: b, epsilon_hat must be >= 0");
  RobustnessMargins m;
  m.a_max = c / (2.0 * sigma_hat * l_grad_v);
  m.r_max = c / (2.0 * sigma_hat * sigma_hat * l_grad_v);
  m.c = c;
  m.sigma_hat = sigma_hat;
  m.l_grad_v = l_grad_v;
  m.b = b;
  m.epsilon_hat = epsilon_hat;
  return m;
}

}  // namespace pgl
