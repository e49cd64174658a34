#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pgl/problems.hpp"

using namespace pgl;

namespace {

Vector central_diff(const ScalarField &f, const Vector &y, double h = 1e-5) {
  Vector g(y.size());
  Vector p = y;
  for (std::size_t i = 0; i < y.size(); ++i) {
    p[i] = y[i] + h;
    double up = f.value(p);
    p[i] = y[i] - h;
    double dn = f.value(p);
    p[i] = y[i];
    g[i] = (up - dn) / (2.0 * h);
  }
  return g;
}

Vector random_point(Rng &rng, int n, double span) {
  Vector x(n);
  for (auto &v : x) v = rng.uniform(-span, span);
  return x;
}

}  // namespace

TEST_CASE("gradients match central differences") {
  struct Case {
    const char *name;
    std::map<std::string, double> params;
  };
  for (const Case &c : {Case{"quadratic", {{"n", 3}}},
                        Case{"strongly-convex-quadratic", {{"n", 3}, {"c", 2.0}}},
                        Case{"weighted-quadratic", {{"n", 2}, {"d0", 2.0}, {"d1", 0.5}}},
                        Case{"nonconvex-1d", {{"xstar", 1.5}}}}) {
    Problem pr = builtin(c.name, c.params);
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
      Vector y = random_point(rng, pr.objective.dim, 3.0);
      Vector g = pr.objective.gradient(y);
      Vector fd = central_diff(pr.objective, y);
      for (std::size_t k = 0; k < y.size(); ++k)
        CHECK(std::abs(g[k] - fd[k]) <= 1e-6);
    }
  }
}

TEST_CASE("subgradient inequality holds for the nonsmooth builtins") {
  for (const char *name : {"max-affine", "norm-cone"}) {
    Problem pr = builtin(name, {{"n", 2}, {"radius", 0.5}});
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
      Vector y = random_point(rng, 2, 3.0);
      Vector z = random_point(rng, 2, 3.0);
      auto subs = pr.objective.subdifferential(y, 100 + i, 3);
      REQUIRE(!subs.empty());
      double fy = pr.objective.value(y);
      double fz = pr.objective.value(z);
      for (const auto &g : subs)
        CHECK(fz >= fy + dot(g, sub(z, y)) - 1e-9);
    }
  }
}

TEST_CASE("strong convexity certificate of the quadratic builtin") {
  Problem pr = builtin("strongly-convex-quadratic", {{"n", 2}, {"c", 2.0}});
  REQUIRE(pr.objective.strong_convexity);
  double c = *pr.objective.strong_convexity;
  CHECK(c == doctest::Approx(2.0));
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    Vector y = random_point(rng, 2, 3.0);
    Vector z = random_point(rng, 2, 3.0);
    Vector g = pr.objective.gradient(y);
    double lhs = pr.objective.value(z);
    double rhs = pr.objective.value(y) + dot(g, sub(z, y)) +
                 0.5 * c * norm_sq(sub(z, y));
    CHECK(lhs >= rhs - 1e-9);
  }
}

TEST_CASE("nonconvex-1d: gradient sign is coercive but curvature is not") {
  Problem pr = builtin("nonconvex-1d", {{"xstar", 2.0}});
  bool pos_curv = false, neg_curv = false;
  for (double d = -10.0; d <= 10.0; d += 1e-3) {
    double y = 2.0 + d;
    double g = pr.objective.gradient({y})[0];
    if (std::abs(d) > 1e-6) CHECK(d * g > 0.0);
    double curv = 2.0 + std::cos(3.0 * d) - 3.0 * d * std::sin(3.0 * d);
    (curv > 0 ? pos_curv : neg_curv) = true;
  }
  CHECK(pos_curv);
  CHECK(neg_curv);
  CHECK(pr.objective.value({2.0}) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(!pr.objective.convex);
}

TEST_CASE("max-affine subdifferential at a kink") {
  Problem pr = builtin("max-affine", {{"n", 2}});
  // At (1, 1) both e_0 and e_1 are active.
  auto subs = pr.objective.subdifferential({1.0, 1.0}, 42, 5);
  CHECK(subs.size() >= 2);
  bool saw_e0 = false, saw_e1 = false;
  for (const auto &g : subs) {
    // Every element lies in the convex hull of {e_0, e_1}.
    CHECK(g[0] >= -1e-12);
    CHECK(g[1] >= -1e-12);
    CHECK(g[0] + g[1] == doctest::Approx(1.0).epsilon(1e-9));
    if (std::abs(g[0] - 1.0) < 1e-12) saw_e0 = true;
    if (std::abs(g[1] - 1.0) < 1e-12) saw_e1 = true;
  }
  CHECK(saw_e0);
  CHECK(saw_e1);
  // Away from kinks the subdifferential is a singleton.
  auto single = pr.objective.subdifferential({2.0, 0.5}, 42, 5);
  REQUIRE(single.size() == 1);
  CHECK(single[0][0] == doctest::Approx(1.0));
  CHECK(single[0][1] == doctest::Approx(0.0));
}

TEST_CASE("norm-cone value and metadata") {
  Problem pr = builtin("norm-cone", {{"n", 2}, {"c", 2.0}, {"radius", 1.0}});
  CHECK(pr.objective.value({3.0, 0.0}) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(pr.objective.value({0.5, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(pr.objective.gradient({0.0, 0.0}), std::domain_error);
  auto subs = pr.objective.subdifferential({0.5, 0.0}, 1, 1);
  CHECK(norm(subs[0]) == doctest::Approx(0.0));
}

TEST_CASE("squared-distance lyapunov field") {
  auto attr = ConvexSet::ball({0.0, 0.0}, 1.0);
  LyapunovField v = make_lyapunov(LyapunovKind::SquaredDistance, attr);
  CHECK(v.value({3.0, 0.0}) == doctest::Approx(2.0).epsilon(1e-12));
  Vector g = v.gradient({3.0, 0.0});
  CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v.value({0.5, 0.5}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v.kind == LyapunovKind::SquaredDistance);
  CHECK(*v.lipschitz_grad == doctest::Approx(1.0));
}

TEST_CASE("objective-gap lyapunov field") {
  Problem pr = builtin("strongly-convex-quadratic", {{"n", 2}, {"c", 2.0}});
  LyapunovField v =
      make_lyapunov(LyapunovKind::ObjectiveGap, pr.minimizers, &pr.objective);
  CHECK(v.value({1.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(v.gradient({1.0, 0.0})[0] == doctest::Approx(2.0).epsilon(1e-12));
  ScalarField no_min;
  no_min.dim = 1;
  no_min.value = [](const Vector &y) { return y[0]; };
  CHECK_THROWS_AS(
      make_lyapunov(LyapunovKind::ObjectiveGap, pr.minimizers, &no_min),
      std::invalid_argument);
}

TEST_CASE("builtin rejects unknown names and bad parameters") {
  CHECK_THROWS_AS(builtin("no-such-problem"), std::invalid_argument);
  CHECK_THROWS_AS(builtin("strongly-convex-quadratic", {{"c", -1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(builtin("weighted-quadratic", {{"d0", 0.0}}),
                  std::invalid_argument);
}
