#include "pgl/geometry.hpp"

#include <algorithm>
#include <limits>

namespace pgl {

std::vector<double> symmetric_eigenvalues(Matrix m, int sweeps) {
  if (!m.symmetric(1e-9))
    throw std::invalid_argument("symmetric_eigenvalues: matrix not symmetric");
  const int n = m.n;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += m.at(p, q) * m.at(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = m.at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = m.at(k, p), akq = m.at(k, q);
          m.at(k, p) = c * akp - s * akq;
          m.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = m.at(p, k), aqk = m.at(q, k);
          m.at(p, k) = c * apk - s * aqk;
          m.at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = m.at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

int ConvexSet::dim() const {
  return std::visit(
      [](const auto &s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, WholeSpace>) return s.dim;
        else if constexpr (std::is_same_v<T, BoxSet>) return static_cast<int>(s.lo.size());
        else if constexpr (std::is_same_v<T, BallSet>) return static_cast<int>(s.center.size());
        else if constexpr (std::is_same_v<T, HalfspaceSet>) return static_cast<int>(s.normal.size());
        else if constexpr (std::is_same_v<T, AffineSet>) return static_cast<int>(s.anchor.size());
        else return s.parts.empty() ? 0 : s.parts.front().dim();
      },
      shape);
}

ConvexSet ConvexSet::whole_space(int n) { return {WholeSpace{n}}; }

ConvexSet ConvexSet::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size())
    throw std::invalid_argument("box: dimension mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) throw std::invalid_argument("box: lo > hi");
  return {BoxSet{std::move(lo), std::move(hi)}};
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (radius < 0) throw std::invalid_argument("ball: negative radius");
  require_finite(center, "ball center");
  return {BallSet{std::move(center), radius}};
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
  if (norm(normal) <= 0)
    throw std::invalid_argument("halfspace: zero normal");
  return {HalfspaceSet{std::move(normal), offset}};
}

ConvexSet ConvexSet::affine(Vector anchor, std::vector<Vector> basis) {
  // Gram-Schmidt; drop near-dependent columns.
  std::vector<Vector> ortho;
  for (auto &v : basis) {
    Vector u = v;
    for (const auto &e : ortho) u = axpy(u, -dot(u, e), e);
    double nu = norm(u);
    if (nu > 1e-12) ortho.push_back(scaled(u, 1.0 / nu));
  }
  return {AffineSet{std::move(anchor), std::move(ortho)}};
}

ConvexSet ConvexSet::intersection(std::vector<ConvexSet> parts) {
  if (parts.empty())
    throw std::invalid_argument("intersection: no parts");
  return {IntersectionSet{std::move(parts)}};
}

namespace {

Vector project_box(const BoxSet &b, const Vector &x) {
  Vector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    r[i] = std::clamp(x[i], b.lo[i], b.hi[i]);
  return r;
}

Vector project_ball(const BallSet &b, const Vector &x) {
  Vector d = sub(x, b.center);
  double nd = norm(d);
  if (nd <= b.radius) return x;
  if (nd == 0) return b.center;
  return axpy(b.center, b.radius / nd, d);
}

Vector project_halfspace(const HalfspaceSet &h, const Vector &x) {
  double viol = dot(h.normal, x) - h.offset;
  if (viol <= 0) return x;
  return axpy(x, -viol / norm_sq(h.normal), h.normal);
}

Vector project_affine(const AffineSet &a, const Vector &x) {
  Vector d = sub(x, a.anchor);
  Vector r = a.anchor;
  for (const auto &e : a.basis) r = axpy(r, dot(d, e), e);
  return r;
}

// Dykstra's alternating projection scheme for intersections.
Vector project_intersection(const IntersectionSet &s, const Vector &x0) {
  const std::size_t m = s.parts.size();
  Vector x = x0;
  std::vector<Vector> corrections(m, Vector(x0.size(), 0.0));
  Vector prev = x;
  for (long iter = 0; iter < kProjectionMaxIter; ++iter) {
    // The iterate can plateau on a feasible point before the corrections
    // settle, so convergence is measured on the corrections as well.
    double correction_shift = 0;
    for (std::size_t k = 0; k < m; ++k) {
      Vector z = add(x, corrections[k]);
      Vector px = project(s.parts[k], z);
      Vector next = sub(z, px);
      correction_shift += dist_between(next, corrections[k]);
      corrections[k] = std::move(next);
      x = px;
    }
    double res = dist_between(x, prev) + correction_shift;
    if (res <= kProjectionTol * (1.0 + norm(x))) {
      // Require actual membership as well; Dykstra residual alone can
      // stall early on thin intersections.
      bool inside = true;
      for (const auto &p : s.parts)
        if (distance(p, x) > 1e-9) { inside = false; break; }
      if (inside) return x;
    }
    prev = x;
  }
  double achieved = 0;
  for (const auto &p : s.parts) achieved = std::max(achieved, distance(p, x));
  throw ProjectionError(
      "project: cyclic scheme did not meet tolerance, residual=" +
          std::to_string(achieved),
      achieved, kProjectionMaxIter);
}

}  // namespace

Vector project(const ConvexSet &s, const Vector &x) {
  require_finite(x, "project input");
  return std::visit(
      [&](const auto &sh) -> Vector {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, WholeSpace>) return x;
        else if constexpr (std::is_same_v<T, BoxSet>) return project_box(sh, x);
        else if constexpr (std::is_same_v<T, BallSet>) return project_ball(sh, x);
        else if constexpr (std::is_same_v<T, HalfspaceSet>) return project_halfspace(sh, x);
        else if constexpr (std::is_same_v<T, AffineSet>) return project_affine(sh, x);
        else return project_intersection(sh, x);
      },
      s.shape);
}

double distance(const ConvexSet &s, const Vector &x) {
  return dist_between(x, project(s, x));
}

bool contains(const ConvexSet &s, const Vector &x, double tol) {
  return distance(s, x) <= tol;
}

bool is_compact(const ConvexSet &s) {
  return std::visit(
      [](const auto &sh) -> bool {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, BoxSet> || std::is_same_v<T, BallSet>)
          return true;
        else if constexpr (std::is_same_v<T, IntersectionSet>) {
          for (const auto &p : sh.parts)
            if (is_compact(p)) return true;
          return false;
        } else
          return false;
      },
      s.shape);
}

BoxSet bounding_box(const ConvexSet &s) {
  return std::visit(
      [&](const auto &sh) -> BoxSet {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, BoxSet>) {
          return sh;
        } else if constexpr (std::is_same_v<T, BallSet>) {
          Vector lo(sh.center), hi(sh.center);
          for (std::size_t i = 0; i < lo.size(); ++i) {
            lo[i] -= sh.radius;
            hi[i] += sh.radius;
          }
          return BoxSet{lo, hi};
        } else if constexpr (std::is_same_v<T, IntersectionSet>) {
          // Bounding box of any compact part bounds the intersection.
          for (const auto &p : sh.parts)
            if (is_compact(p)) return bounding_box(p);
          throw std::invalid_argument("bounding_box: set not compact");
        } else {
          throw std::invalid_argument("bounding_box: set not compact");
        }
      },
      s.shape);
}

double circumradius(const ConvexSet &s) {
  BoxSet bb = bounding_box(s);
  double r2 = 0;
  for (std::size_t i = 0; i < bb.lo.size(); ++i) {
    double half = 0.5 * (bb.hi[i] - bb.lo[i]);
    r2 += half * half;
  }
  return std::sqrt(r2);
}

Band::Band(ConvexSet attractor_, double sigma_, double epsilon_,
           ConvexSet feasible_)
    : attractor(std::move(attractor_)),
      sigma(sigma_),
      epsilon(epsilon_),
      feasible(std::move(feasible_)) {
  if (!(sigma > 0)) throw std::invalid_argument("Band: sigma must be > 0");
  if (epsilon < 0) throw std::invalid_argument("Band: epsilon must be >= 0");
  if (!(sigma > epsilon))
    throw std::invalid_argument("Band: sigma must exceed epsilon");
  if (!is_compact(attractor))
    throw std::invalid_argument("Band: attractor must be a compact kind");
}

bool Band::member(const Vector &y, double tol) const {
  double d = distance(attractor, y);
  return d >= epsilon - tol && d <= sigma + tol && contains(feasible, y, tol);
}

std::vector<Vector> sample_annulus(const ConvexSet &attractor, double lo,
                                   double hi, const ConvexSet &feasible,
                                   int count, std::uint64_t seed, Exec exec) {
  if (count < 0) throw std::invalid_argument("sample_annulus: negative count");
  if (hi < lo) throw std::invalid_argument("sample_annulus: hi < lo");
  const int n = attractor.dim();
  BoxSet bb = bounding_box(attractor);
  for (int i = 0; i < n; ++i) {
    bb.lo[i] -= hi;
    bb.hi[i] += hi;
  }

  // Degenerate annulus: points of the attractor itself.
  if (hi == 0.0) {
    std::vector<Vector> out(count);
    parallel_for(count, exec, [&](std::size_t i) {
      Rng rng(mix_seed(seed, i));
      Vector x(n);
      for (int k = 0; k < n; ++k) x[k] = rng.uniform(bb.lo[k], bb.hi[k]);
      out[i] = project(attractor, project(feasible, x));
    });
    return out;
  }

  constexpr long kRejectionBudget = 200000;
  std::vector<Vector> out(count);
  std::vector<long> attempts_used(count, 0);
  std::vector<char> failed(count, 0);
  parallel_for(count, exec, [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    Vector x(n);
    for (long a = 1; a <= kRejectionBudget; ++a) {
      for (int k = 0; k < n; ++k) x[k] = rng.uniform(bb.lo[k], bb.hi[k]);
      double d = distance(attractor, x);
      if (d >= lo && d <= hi && contains(feasible, x)) {
        out[i] = x;
        attempts_used[i] = a;
        return;
      }
    }
    failed[i] = 1;
    attempts_used[i] = kRejectionBudget;
  });
  long total_attempts = 0;
  bool any_failed = false;
  for (int i = 0; i < count; ++i) {
    total_attempts += attempts_used[i];
    if (failed[i]) any_failed = true;
  }
  if (any_failed) {
    double rate = count > 0 ? static_cast<double>(count) / total_attempts : 0;
    throw EmptyBandError(
        "sample_annulus: rejection budget exhausted (acceptance rate ~" +
            std::to_string(rate) + ")",
        rate);
  }
  return out;
}

std::vector<Vector> sample_band(const Band &band, int count,
                                std::uint64_t seed, Exec exec) {
  return sample_annulus(band.attractor, band.epsilon, band.sigma,
                        band.feasible, count, seed, exec);
}

std::vector<Vector> sample_set(const ConvexSet &compact_set, int count,
                               std::uint64_t seed, Exec exec) {
  return sample_annulus(compact_set, 0.0, 0.0,
                        ConvexSet::whole_space(compact_set.dim()), count, seed,
                        exec);
}

}  // namespace pgl
