#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pgl/lemmas.hpp"

using namespace pgl;

namespace {

// Disconnected sublevel sets: a well at the origin plus a second, shallower
// well near y = 3 that never reaches zero.
double two_wells(const Vector &y) {
  double a = y[0] * y[0];
  double b = (y[0] - 3.0) * (y[0] - 3.0) + 0.5;
  return std::min(a, b);
}

}  // namespace

TEST_CASE("containment separates the two sublevel stages") {
  auto attr = ConvexSet::point({0.0});
  ContainmentOptions opts;
  opts.grid_resolution = 0.005;
  auto res = containment_level(two_wells, attr, 0.0, 1.0, 5.0, opts);
  // Shell minimum at |y| = 1 is ~1; the far well pulls the second stage
  // down to ~0.5.
  CHECK(res.l2 == doctest::Approx(1.0).epsilon(0.03));
  CHECK(res.l1 == doctest::Approx(0.5).epsilon(0.03));
  CHECK(res.l1 < res.l2);
  CHECK(res.level == doctest::Approx(0.9 * res.l1));
  CHECK(res.certified);
  CHECK(!res.violator);
}

TEST_CASE("second stage collapses the level for flat landscapes") {
  // With rho = 0.5 the shell minimum is 0.25 and the far well (value 0.5)
  // does not bind.
  auto attr = ConvexSet::point({0.0});
  ContainmentOptions opts;
  opts.grid_resolution = 0.005;
  auto res = containment_level(two_wells, attr, 0.0, 0.5, 5.0, opts);
  CHECK(res.l2 == doctest::Approx(0.25).epsilon(0.05));
  CHECK(res.l1 == doctest::Approx(0.25).epsilon(0.05));
  CHECK(res.certified);

  // A phi that is flat and low outside the neighborhood drags l1 (and thus
  // the certified level) down to that plateau.
  auto flat = [](const Vector &y) {
    double d = std::abs(y[0]);
    return d <= 1.0 ? d : 0.01;
  };
  auto low = containment_level(flat, attr, 0.0, 0.9, 5.0, opts);
  CHECK(low.l1 == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(low.l1 < low.l2);
  CHECK(low.level == doctest::Approx(0.009).epsilon(1e-6));
}

TEST_CASE("containment rejects nonpositive shell values") {
  auto attr = ConvexSet::point({0.0});
  auto negative = [](const Vector &y) { return -std::abs(y[0]); };
  CHECK_THROWS_AS(containment_level(negative, attr, 0.0, 1.0, 5.0),
                  std::invalid_argument);
  auto fine = [](const Vector &y) { return norm_sq(y); };
  CHECK_THROWS_AS(containment_level(fine, attr, 0.0, -1.0, 5.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(containment_level(fine, attr, 0.0, 6.0, 5.0),
                  std::invalid_argument);
}

TEST_CASE("high dimensions fall back to uncertified random search") {
  auto attr = ConvexSet::point(Vector(5, 0.0));
  auto phi = [](const Vector &y) { return norm_sq(y); };
  ContainmentOptions opts;
  opts.random_samples = 20000;
  auto res = containment_level(phi, attr, 0.0, 1.0, 3.0, opts);
  CHECK(!res.certified);
  CHECK(res.l2 > 0.0);
}

TEST_CASE("underestimation constants are exact") {
  auto a = underestimation_alphas(0.5, 1.0, 2.0);
  CHECK(a.alpha_q == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(a.alpha_l == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(a.coeff_lin == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(a.coeff_quad == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(a.combined_lin == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(a.combined_quad == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK_THROWS_AS(underestimation_alphas(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("growth budget matches an independent root solve") {
  auto budget = budget_growth(0.5, 1.0, 0.01, 0.001);
  CHECK(budget.components.at("inv_w_beta") == doctest::Approx(2.0));
  double a1 = budget.components.at("alpha_1");
  // alpha b (1 - alpha w beta) = b_o at the budgeted alpha_1, taken on the
  // increasing branch (left of the parabola's peak).
  CHECK(a1 * 0.01 * (1.0 - a1 * 0.5) == doctest::Approx(0.001).epsilon(1e-10));
  CHECK(a1 < 1.0);  // peak argument is 1/(2 w beta) = 1
  CHECK(budget.alpha_max == doctest::Approx(a1));

  // Independent bisection on the same increasing branch.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (mid * 0.01 * (1.0 - mid * 0.5) <= 0.001 ? lo : hi) = mid;
  }
  CHECK(a1 == doctest::Approx(lo).epsilon(1e-10));

  // Exact directions (b = 0) are limited only by 1/(w beta).
  auto exact = budget_growth(0.5, 1.0, 0.0, 0.001);
  CHECK(exact.alpha_max == doctest::Approx(2.0));
  // A loose overshoot budget is also limited only by 1/(w beta).
  auto loose = budget_growth(0.5, 1.0, 0.01, 1.0);
  CHECK(loose.alpha_max == doctest::Approx(2.0));
}

TEST_CASE("bounded budget satisfies its defining equations") {
  const double w = 0.5, B = 2.0, b = 0.01, c = 1.0;
  const double sigma_o = 3.0, eps_o = 0.1, rho_o = 0.4, b_o = 0.01;
  auto budget = budget_bounded(w, B, b, c, sigma_o, eps_o, rho_o, b_o);
  double inner = eps_o + rho_o;
  CHECK(budget.components.at("alpha_q") ==
        doctest::Approx(c * inner * inner / (sigma_o * sigma_o * w * B * B))
            .epsilon(1e-14));
  double a1 = budget.components.at("alpha_1");
  CHECK(w * B * B * a1 * a1 + b * a1 == doctest::Approx(b_o).epsilon(1e-10));
  CHECK(budget.alpha_max ==
        doctest::Approx(std::min(budget.components.at("alpha_q"), a1)));
  CHECK(budget.params.at("K_phi") ==
        doctest::Approx(1.01 * w * B * B / (inner * inner)).epsilon(1e-12));
  CHECK_THROWS_AS(budget_bounded(w, B, b, c, 0.4, eps_o, rho_o, b_o),
                  std::invalid_argument);
}

TEST_CASE("lipschitz budget satisfies its defining equations") {
  const double w = 0.5, L = 3.0, s_star = 4.0, b = 0.02, c = 1.0;
  const double sigma_o = 3.0, eps_o = 0.1, rho_o = 0.4, b_o = 0.01;
  auto budget = budget_lipschitz(w, L, s_star, b, c, sigma_o, eps_o, rho_o, b_o);
  double inner = eps_o + rho_o;
  double l2w = 2.0 * w * L * L;
  CHECK(budget.components.at("alpha_q") ==
        doctest::Approx(c / (sigma_o * sigma_o *
                             (l2w + 2.0 * w * s_star / (inner * inner))))
            .epsilon(1e-12));
  double a1 = budget.components.at("alpha_1");
  double quad = l2w * inner * inner + 2.0 * w * s_star;
  CHECK(quad * a1 * a1 + b * a1 == doctest::Approx(b_o).epsilon(1e-10));
  CHECK(budget.params.at("kappa") ==
        doctest::Approx(1.01 * 2.0 * w * s_star / (inner * inner)));

  // Attractor-stationary oracles still need a positive kappa.
  auto stationary =
      budget_lipschitz(w, L, 0.0, b, c, sigma_o, eps_o, rho_o, b_o);
  CHECK(stationary.params.at("kappa") == doctest::Approx(0.01 * l2w));
  CHECK(stationary.params.at("kappa") > 0.0);
}

TEST_CASE("robustness margins and perturbed lower bound") {
  auto m = robustness_margins(1.0, 2.0, 1.0, 0.0, 0.2);
  CHECK(m.a_max == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(m.r_max == doctest::Approx(0.125).epsilon(1e-14));
  // b_hat = b + L eps (a + r eps) at (a, r) = (0.1, 0.05).
  CHECK(m.b_hat(0.1, 0.05) ==
        doctest::Approx(0.2 * (0.1 + 0.05 * 0.2)).epsilon(1e-14));

  auto attr = ConvexSet::point({0.0});
  auto phi = m.phi_hat(0.1, 0.05, attr);
  // (c/(2s) - aL) d + (c/(2s^2) - rL) d^2 = 0.15 d + 0.075 d^2 at d = 2.
  CHECK(phi({2.0}) == doctest::Approx(0.15 * 2.0 + 0.075 * 4.0).epsilon(1e-12));
  // Beyond a_max the linear coefficient flips sign.
  auto degenerate = m.phi_hat(2.0 * m.a_max, 0.0, attr);
  CHECK(degenerate({0.5}) < 0.0);
  CHECK_THROWS_AS(robustness_margins(1.0, -1.0, 1.0, 0.0, 0.0),
                  std::invalid_argument);
}
