#include "pgl/problems.hpp"

#include <algorithm>
#include <cmath>

namespace pgl {

namespace {

double param(const std::map<std::string, double> &p, const std::string &key,
             double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

Problem make_quadratic(int n, double c) {
  Problem pr;
  pr.objective.dim = n;
  pr.objective.value = [c](const Vector &y) { return 0.5 * c * norm_sq(y); };
  pr.objective.gradient = [c](const Vector &y) { return scaled(y, c); };
  pr.objective.subdifferential = [c](const Vector &y, std::uint64_t, int) {
    return std::vector<Vector>{scaled(y, c)};
  };
  pr.objective.lipschitz_grad = c;
  pr.objective.strong_convexity = c;
  pr.objective.minimum_value = 0.0;
  pr.objective.convex = true;
  pr.minimizers = ConvexSet::point(Vector(n, 0.0));
  return pr;
}

}  // namespace

ScalarField make_max_affine(std::vector<Vector> slopes, Vector offsets,
                            std::optional<double> minimum_value) {
  if (slopes.empty() || slopes.size() != offsets.size())
    throw std::invalid_argument("make_max_affine: piece count mismatch");
  const int n = static_cast<int>(slopes.front().size());
  auto piece = [slopes, offsets](const Vector &y, std::size_t i) {
    return dot(slopes[i], y) + offsets[i];
  };
  ScalarField f;
  f.dim = n;
  f.convex = true;
  f.minimum_value = minimum_value;
  f.value = [slopes, offsets, piece](const Vector &y) {
    double v = piece(y, 0);
    for (std::size_t i = 1; i < slopes.size(); ++i)
      v = std::max(v, piece(y, i));
    return v;
  };
  f.gradient = [slopes, offsets, piece](const Vector &y) {
    std::size_t best = 0;
    double v = piece(y, 0);
    for (std::size_t i = 1; i < slopes.size(); ++i) {
      double vi = piece(y, i);
      if (vi > v) { v = vi; best = i; }
    }
    return slopes[best];
  };
  // Active pieces within a tie tolerance; extreme subgradients plus random
  // convex combinations of them.
  f.subdifferential = [slopes, offsets, piece](const Vector &y,
                                               std::uint64_t seed, int count) {
    constexpr double kTieTol = 1e-9;
    double v = piece(y, 0);
    for (std::size_t i = 1; i < slopes.size(); ++i) v = std::max(v, piece(y, i));
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < slopes.size(); ++i)
      if (piece(y, i) >= v - kTieTol) active.push_back(i);
    std::vector<Vector> out;
    for (auto i : active) out.push_back(slopes[i]);
    if (active.size() > 1 && count > 0) {
      Rng rng(seed);
      for (int k = 0; k < count; ++k) {
        std::vector<double> w(active.size());
        double tot = 0;
        for (auto &x : w) { x = rng.uniform(0.0, 1.0); tot += x; }
        Vector g(y.size(), 0.0);
        for (std::size_t j = 0; j < active.size(); ++j)
          g = axpy(g, w[j] / tot, slopes[active[j]]);
        out.push_back(std::move(g));
      }
    }
    return out;
  };
  return f;
}

Problem builtin(const std::string &name,
                const std::map<std::string, double> &params) {
  const int n = static_cast<int>(param(params, "n", 2));
  if (n < 1) throw std::invalid_argument("builtin: n must be >= 1");

  if (name == "quadratic") {
    Problem pr = make_quadratic(n, 1.0);
    pr.name = name;
    return pr;
  }

  if (name == "strongly-convex-quadratic") {
    double c = param(params, "c", 2.0);
    if (c <= 0) throw std::invalid_argument("builtin: c must be > 0");
    Problem pr = make_quadratic(n, c);
    pr.name = name;
    return pr;
  }

  if (name == "norm-cone") {
    double c = param(params, "c", 1.0);
    double radius = param(params, "radius", 0.0);
    if (c <= 0) throw std::invalid_argument("builtin: c must be > 0");
    if (radius < 0) throw std::invalid_argument("builtin: radius must be >= 0");
    ConvexSet xstar = ConvexSet::ball(Vector(n, 0.0), radius);
    Problem pr;
    pr.name = name;
    pr.minimizers = xstar;
    pr.objective.dim = n;
    pr.objective.convex = true;
    pr.objective.minimum_value = 0.0;
    pr.objective.value = [c, xstar](const Vector &y) {
      return c * distance(xstar, y);
    };
    pr.objective.gradient = [c, xstar](const Vector &y) {
      Vector p = project(xstar, y);
      double d = dist_between(y, p);
      if (d < 1e-12)
        throw std::domain_error("norm-cone gradient: not differentiable on X*");
      return scaled(sub(y, p), c / d);
    };
    pr.objective.subdifferential = [c, xstar](const Vector &y, std::uint64_t,
                                              int) {
      Vector p = project(xstar, y);
      double d = dist_between(y, p);
      if (d < 1e-12)
        return std::vector<Vector>{Vector(y.size(), 0.0)};
      return std::vector<Vector>{scaled(sub(y, p), c / d)};
    };
    return pr;
  }

  if (name == "max-affine") {
    // max_i |y_i|: slopes +-e_i, zero offsets, minimized exactly at 0.
    std::vector<Vector> slopes;
    for (int i = 0; i < n; ++i) {
      Vector e(n, 0.0);
      e[i] = 1.0;
      slopes.push_back(e);
      e[i] = -1.0;
      slopes.push_back(e);
    }
    Problem pr;
    pr.name = name;
    pr.objective = make_max_affine(slopes, Vector(slopes.size(), 0.0), 0.0);
    pr.minimizers = ConvexSet::point(Vector(n, 0.0));
    return pr;
  }

  if (name == "weighted-quadratic") {
    Vector diag(n);
    for (int i = 0; i < n; ++i)
      diag[i] = param(params, "d" + std::to_string(i), i == 0 ? 2.0 : 1.0);
    for (double d : diag)
      if (d <= 0) throw std::invalid_argument("builtin: weights must be > 0");
    Problem pr;
    pr.name = name;
    pr.minimizers = ConvexSet::point(Vector(n, 0.0));
    pr.objective.dim = n;
    pr.objective.convex = true;
    pr.objective.minimum_value = 0.0;
    pr.objective.strong_convexity = *std::min_element(diag.begin(), diag.end());
    pr.objective.lipschitz_grad = *std::max_element(diag.begin(), diag.end());
    pr.objective.value = [diag](const Vector &y) {
      double s = 0;
      for (std::size_t i = 0; i < y.size(); ++i) s += diag[i] * y[i] * y[i];
      return 0.5 * s;
    };
    pr.objective.gradient = [diag](const Vector &y) {
      Vector g(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) g[i] = diag[i] * y[i];
      return g;
    };
    pr.objective.subdifferential = [grad = pr.objective.gradient](
                                       const Vector &y, std::uint64_t, int) {
      return std::vector<Vector>{grad(y)};
    };
    return pr;
  }

  if (name == "nonconvex-1d") {
    // J(d) = d^2 + (d/3) sin 3d + (cos 3d - 1)/9 with d = y - x*, so that
    // J'(d) = d (2 + cos 3d) and hence (y - x*) J'(y) > 0 off x*, while
    // J'' = 2 + cos 3d - 3d sin 3d changes sign.
    double xstar = param(params, "xstar", 0.0);
    Problem pr;
    pr.name = name;
    pr.minimizers = ConvexSet::point(Vector{xstar});
    pr.objective.dim = 1;
    pr.objective.convex = false;
    pr.objective.minimum_value = 0.0;
    pr.objective.lipschitz_grad = 33.0;  // |J''| bound on |d| <= 10
    pr.objective.value = [xstar](const Vector &y) {
      double d = y[0] - xstar;
      return d * d + (d / 3.0) * std::sin(3.0 * d) +
             (std::cos(3.0 * d) - 1.0) / 9.0;
    };
    pr.objective.gradient = [xstar](const Vector &y) {
      double d = y[0] - xstar;
      return Vector{d * (2.0 + std::cos(3.0 * d))};
    };
    pr.objective.subdifferential = [grad = pr.objective.gradient](
                                       const Vector &y, std::uint64_t, int) {
      return std::vector<Vector>{grad(y)};
    };
    return pr;
  }

  throw std::invalid_argument("builtin: unknown name '" + name + "'");
}

LyapunovField make_lyapunov(LyapunovKind kind, ConvexSet attractor,
                            const ScalarField *objective) {
  LyapunovField v;
  v.attractor = std::move(attractor);
  v.kind = kind;
  if (kind == LyapunovKind::SquaredDistance) {
    ConvexSet a = v.attractor;
    v.dim = a.dim();
    v.value = [a](const Vector &y) {
      double d = distance(a, y);
      return 0.5 * d * d;
    };
    v.gradient = [a](const Vector &y) { return sub(y, project(a, y)); };
    v.subdifferential = [grad = v.gradient](const Vector &y, std::uint64_t,
                                            int) {
      return std::vector<Vector>{grad(y)};
    };
    v.lipschitz_grad = 1.0;
    v.minimum_value = 0.0;
    v.convex = true;
    return v;
  }
  if (kind == LyapunovKind::ObjectiveGap) {
    if (!objective)
      throw std::invalid_argument("make_lyapunov: objective-gap needs an objective");
    if (!objective->minimum_value)
      throw std::invalid_argument("make_lyapunov: objective-gap needs a known minimum value");
    double jstar = *objective->minimum_value;
    v.dim = objective->dim;
    v.value = [val = objective->value, jstar](const Vector &y) {
      return val(y) - jstar;
    };
    v.gradient = objective->gradient;
    v.subdifferential = objective->subdifferential;
    v.lipschitz_grad = objective->lipschitz_grad;
    v.strong_convexity = objective->strong_convexity;
    v.minimum_value = 0.0;
    v.convex = objective->convex;
    return v;
  }
  throw std::invalid_argument("make_lyapunov: custom fields are built directly");
}

}  // namespace pgl
