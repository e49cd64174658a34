#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pgl/dynamics.hpp"
#include "pgl/lemmas.hpp"

using namespace pgl;

// Every kernel must produce bit-identical results under both execution
// policies: per-index seed derivation makes the partitioning irrelevant.

TEST_CASE("band sampling is execution-policy invariant") {
  auto attr = ConvexSet::ball({0.5, -0.5}, 0.5);
  auto feasible = ConvexSet::halfspace({0.0, -1.0}, 2.0);
  auto serial = sample_annulus(attr, 0.3, 4.0, feasible, 5000, 77, Exec::Serial);
  auto parallel =
      sample_annulus(attr, 0.3, 4.0, feasible, 5000, 77, Exec::Parallel);
  CHECK(serial == parallel);
}

TEST_CASE("verification is execution-policy invariant") {
  Problem pr = builtin("strongly-convex-quadratic", {{"n", 2}, {"c", 2.0}});
  LyapunovField v = make_lyapunov(LyapunovKind::SquaredDistance, pr.minimizers);
  auto oracle = perturb(gradient_oracle(pr.objective), ErrorModel(0.05, 0.05),
                        pr.minimizers, &v);
  auto cert = std::get<SpspCertificate>(
      certify_strongly_convex(2.0, 0.05, 0.05, pr.minimizers));
  VerifyOptions opts;
  opts.samples = 5000;
  opts.truncation_radius = 6.0;
  opts.exec = Exec::Serial;
  auto serial = verify(oracle, v, ConvexSet::whole_space(2), cert, opts);
  opts.exec = Exec::Parallel;
  auto parallel = verify(oracle, v, ConvexSet::whole_space(2), cert, opts);
  CHECK(serial.pass == parallel.pass);
  CHECK(serial.min_margin == parallel.min_margin);
  CHECK(serial.inner_margin == parallel.inner_margin);
  CHECK(serial.min_phi == parallel.min_phi);
  REQUIRE(serial.witnesses.size() == parallel.witnesses.size());
  for (std::size_t i = 0; i < serial.witnesses.size(); ++i)
    CHECK(serial.witnesses[i].margin == parallel.witnesses[i].margin);
}

TEST_CASE("containment is execution-policy invariant") {
  auto attr = ConvexSet::point({0.0, 0.0});
  auto phi = [](const Vector &y) {
    return std::min(norm_sq(y), (y[0] - 3.0) * (y[0] - 3.0) + y[1] * y[1] + 0.5);
  };
  ContainmentOptions opts;
  opts.grid_resolution = 0.02;
  opts.exec = Exec::Serial;
  auto serial = containment_level(phi, attr, 0.0, 1.0, 5.0, opts);
  opts.exec = Exec::Parallel;
  auto parallel = containment_level(phi, attr, 0.0, 1.0, 5.0, opts);
  CHECK(serial.level == parallel.level);
  CHECK(serial.l1 == parallel.l1);
  CHECK(serial.l2 == parallel.l2);
  CHECK(serial.certified == parallel.certified);
}

TEST_CASE("one-step condition checks are execution-policy invariant") {
  Problem pr = builtin("quadratic", {{"n", 2}});
  LyapunovField v = make_lyapunov(LyapunovKind::SquaredDistance, pr.minimizers);
  SpasConditionsParams p;
  p.sigma_o = 4.0;
  p.rho_o = 0.5;
  p.alpha = 0.1;
  p.b_o = 1e-3;
  p.samples = 3000;
  auto w_fn = [&](const Vector &y) {
    return (p.alpha - 0.5 * p.alpha * p.alpha) * norm_sq(y);
  };
  p.exec = Exec::Serial;
  auto serial = check_spas_conditions(v, gradient_oracle(pr.objective),
                                      ConvexSet::whole_space(2), p, w_fn);
  p.exec = Exec::Parallel;
  auto parallel = check_spas_conditions(v, gradient_oracle(pr.objective),
                                        ConvexSet::whole_space(2), p, w_fn);
  CHECK(serial.w_min == parallel.w_min);
  CHECK(serial.p2_margin == parallel.p2_margin);
  CHECK(serial.p3_margin == parallel.p3_margin);
}

TEST_CASE("spas trials are execution-policy invariant") {
  Problem pr = builtin("quadratic", {{"n", 2}});
  LyapunovField v = make_lyapunov(LyapunovKind::SquaredDistance, pr.minimizers);
  auto oracle = perturb(gradient_oracle(pr.objective), ErrorModel(0.02, 0.0),
                        pr.minimizers, &v);
  SpasTrialParams params;
  params.sigma = 2.0;
  params.rho_a = 0.1;
  params.rho_s = 2.5;
  params.trials = 8;
  params.horizon = 300;
  auto serial = certify_spas(oracle, ConvexSet::whole_space(2), pr.minimizers,
                             v, 0.1, params, 5, Exec::Serial);
  auto parallel = certify_spas(oracle, ConvexSet::whole_space(2), pr.minimizers,
                               v, 0.1, params, 5, Exec::Parallel);
  CHECK(serial.stable == parallel.stable);
  CHECK(serial.attractive == parallel.attractive);
  CHECK(serial.rho_a_achieved == parallel.rho_a_achieved);
  CHECK(serial.delta_found == parallel.delta_found);
  CHECK(serial.t_found == parallel.t_found);
}
