#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pgl/dynamics.hpp"

using namespace pgl;

TEST_CASE("gradient flow on the quadratic contracts geometrically") {
  Problem pr = builtin("quadratic", {{"n", 2}});
  LyapunovField v = make_lyapunov(LyapunovKind::SquaredDistance, pr.minimizers);
  auto traj = iterate({1.0, 0.0}, gradient_oracle(pr.objective),
                      ConvexSet::whole_space(2), 0.1, 50, Selection::First, 1, &v);
  REQUIRE(traj.iterates.size() == 51);
  double expected = 1.0;
  for (const auto &y : traj.iterates) {
    CHECK(y[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(0.0));
    expected *= 0.9;
  }
  CHECK(!traj.aborted);
}

TEST_CASE("minimizers are stationary") {
  Problem pr = builtin("quadratic", {{"n", 2}});
  auto traj = iterate({0.0, 0.0}, gradient_oracle(pr.objective),
                      ConvexSet::whole_space(2), 0.5, 20, Selection::First, 1);
  for (const auto &y : traj.iterates) CHECK(norm(y) == doctest::Approx(0.0));
}

TEST_CASE("feasible set clamps the iterates") {
  Problem pr = builtin("quadratic", {{"n", 2}});
  auto box = ConvexSet::box({-1.0, -1.0}, {1.0, 1.0});
  auto traj = iterate({5.0, 5.0}, gradient_oracle(pr.objective), box, 0.1, 30,
                      Selection::First, 1);
  // The start is projected in before the first step.
  CHECK(traj.iterates.front()[0] == doctest::Approx(1.0));
  for (const auto &y : traj.iterates) CHECK(contains(box, y, 1e-9));
  CHECK_THROWS_AS(iterate({1.0, 1.0}, gradient_oracle(pr.objective), box, -0.1,
                          10, Selection::First, 1),
                  std::invalid_argument);
}

TEST_CASE("oracle failures abort with a partial record") {
  Problem pr = builtin("norm-cone", {{"n", 2}});
  // The gradient is undefined on the minimizer set itself.
  auto traj = iterate({0.0, 0.0}, gradient_oracle(pr.objective),
                      ConvexSet::whole_space(2), 0.1, 10, Selection::First, 1);
  CHECK(traj.aborted);
  CHECK(!traj.abort_reason.empty());
  CHECK(traj.iterates.size() == 1);
}

TEST_CASE("descent bound holds along recorded trajectories") {
  Problem pr = builtin("strongly-convex-quadratic", {{"n", 3}, {"c", 2.0}});
  LyapunovField v = make_lyapunov(LyapunovKind::SquaredDistance, pr.minimizers);
  auto box = ConvexSet::box(Vector(3, -2.0), Vector(3, 2.0));
  auto traj = iterate({1.9, -1.5, 0.7}, gradient_oracle(pr.objective), box,
                      0.2, 100, Selection::First, 1, &v);
  auto chk = check_descent_lemma(traj, v, WMode::Half);
  CHECK(chk.worst_margin >= -1e-9);
  CHECK(chk.margins.size() == 100);

  // Unconstrained squared-distance descent holds with equality.
  auto free_traj = iterate({1.0, 1.0, 1.0}, gradient_oracle(pr.objective),
                           ConvexSet::whole_space(3), 0.2, 50,
                           Selection::First, 1, &v);
  auto free_chk = check_descent_lemma(free_traj, v, WMode::Half);
  CHECK(free_chk.worst_margin >= -1e-12);
  CHECK(free_chk.worst_margin <= 1e-12);

  // Objective-gap V over the whole space uses the gradient modulus.
  LyapunovField gap =
      make_lyapunov(LyapunovKind::ObjectiveGap, pr.minimizers, &pr.objective);
  auto gap_chk = check_descent_lemma(free_traj, gap, WMode::Lipschitz);
  CHECK(gap_chk.worst_margin >= -1e-9);
  CHECK_THROWS_AS(check_descent_lemma(free_traj, gap, WMode::Half),
                  std::invalid_argument);
}

TEST_CASE("one-step lyapunov conditions on the exact quadratic") {
  Problem pr = builtin("quadratic", {{"n", 2}});
  LyapunovField v = make_lyapunov(LyapunovKind::SquaredDistance, pr.minimizers);
  SpasConditionsParams p;
  p.sigma_o = 4.0;
  p.epsilon_o = 0.0;
  p.rho_o = 0.5;
  p.alpha = 0.1;
  p.b_o = 1e-3;
  p.samples = 2000;
  // deltaV = -(alpha - alpha^2/2) ||y||^2 exactly, so W at that rate is tight.
  auto w_fn = [&](const Vector &y) {
    return (p.alpha - 0.5 * p.alpha * p.alpha) * norm_sq(y);
  };
  auto rep = check_spas_conditions(v, gradient_oracle(pr.objective),
                                   ConvexSet::whole_space(2), p, w_fn);
  CHECK(rep.p1);
  CHECK(rep.p2);
  CHECK(rep.p3);
  CHECK(rep.p2_margin == doctest::Approx(0.0).epsilon(1e-9));

  // An overstated W breaks the decrease condition and leaves a witness.
  auto greedy = [&](const Vector &y) { return 2.0 * p.alpha * norm_sq(y); };
  auto bad = check_spas_conditions(v, gradient_oracle(pr.objective),
                                   ConvexSet::whole_space(2), p, greedy);
  CHECK(!bad.p2);
  CHECK(bad.p2_witness.has_value());
}

TEST_CASE("spas certification on the contracting quadratic") {
  Problem pr = builtin("quadratic", {{"n", 2}});
  LyapunovField v = make_lyapunov(LyapunovKind::SquaredDistance, pr.minimizers);
  auto oracle = gradient_oracle(pr.objective);
  SpasTrialParams params;
  params.sigma = 2.0;
  params.rho_a = 0.1;
  params.rho_s = 2.5;
  params.trials = 8;
  params.horizon = 400;
  auto rep = certify_spas(oracle, ConvexSet::whole_space(2), pr.minimizers, v,
                          0.1, params, 21);
  CHECK(rep.stable);
  CHECK(rep.attractive);
  CHECK(rep.spas);
  REQUIRE(rep.t_found);
  CHECK(*rep.t_found <= 60);  // 2 * 0.9^t <= 0.1 needs t >= 29
  CHECK(rep.rho_a_achieved <= 0.1);
  CHECK(*rep.delta_found == doctest::Approx(params.rho_s));

  // Overstepping destroys stability and attractivity.
  auto bad = certify_spas(oracle, ConvexSet::whole_space(2), pr.minimizers, v,
                          2.5, params, 21);
  CHECK(!bad.spas);
  CHECK(!bad.attractive);
  CHECK(bad.straggler_witness.has_value());
}

TEST_CASE("grid certification covers each step size") {
  Problem pr = builtin("quadratic", {{"n", 2}});
  LyapunovField v = make_lyapunov(LyapunovKind::SquaredDistance, pr.minimizers);
  SpasTrialParams params;
  params.sigma = 2.0;
  params.rho_a = 0.2;
  params.rho_s = 2.5;
  params.trials = 4;
  params.horizon = 300;
  auto reports =
      certify_spas_grid(gradient_oracle(pr.objective), ConvexSet::whole_space(2),
                        pr.minimizers, v, {0.05, 0.1}, params, 3);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].alpha == doctest::Approx(0.05));
  CHECK(reports[1].alpha == doctest::Approx(0.1));
  for (const auto &r : reports) CHECK(r.spas);
}

TEST_CASE("worst-case selection picks the least aligned direction") {
  LyapunovField v = make_lyapunov(LyapunovKind::SquaredDistance,
                                  ConvexSet::point({0.0, 0.0}));
  DirectionOracle two;
  two.dim = 2;
  two.singleton = false;
  two.query = [](const Vector &y, std::uint64_t) {
    return std::vector<Vector>{y, scaled(y, 0.1)};
  };
  auto traj = iterate({1.0, 0.0}, two, ConvexSet::whole_space(2), 0.1, 1,
                      Selection::WorstCaseVsV, 1, &v);
  // The weaker direction (0.1 y) has the smaller inner product with gradV.
  CHECK(traj.iterates[1][0] == doctest::Approx(0.99).epsilon(1e-12));
}
