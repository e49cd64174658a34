#ifndef PGL_GEOMETRY_HPP
#define PGL_GEOMETRY_HPP

#include <memory>
#include <optional>
#include <variant>

#include "pgl/common.hpp"

namespace pgl {

struct ConvexSet;

struct WholeSpace {
  int dim;
};

struct BoxSet {
  Vector lo, hi;  // lo <= hi componentwise
};

struct BallSet {
  Vector center;
  double radius;  // >= 0; radius 0 is a singleton
};

// { x : normal . x <= offset }
struct HalfspaceSet {
  Vector normal;
  double offset;
};

// anchor + span(basis); basis orthonormalized at construction
struct AffineSet {
  Vector anchor;
  std::vector<Vector> basis;
};

struct IntersectionSet {
  std::vector<ConvexSet> parts;
};

struct ConvexSet {
  std::variant<WholeSpace, BoxSet, BallSet, HalfspaceSet, AffineSet,
               IntersectionSet>
      shape;

  int dim() const;

  static ConvexSet whole_space(int n);
  static ConvexSet box(Vector lo, Vector hi);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet point(Vector x) { return ball(std::move(x), 0.0); }
  static ConvexSet halfspace(Vector normal, double offset);
  static ConvexSet affine(Vector anchor, std::vector<Vector> basis);
  static ConvexSet intersection(std::vector<ConvexSet> parts);
};

struct ProjectionError : std::runtime_error {
  double residual;
  long iterations;
  ProjectionError(const std::string &msg, double res, long iters)
      : std::runtime_error(msg), residual(res), iterations(iters) {}
};

struct EmptyBandError : std::runtime_error {
  double acceptance_rate;
  explicit EmptyBandError(const std::string &msg, double rate)
      : std::runtime_error(msg), acceptance_rate(rate) {}
};

// Dykstra parameters for intersection projections.
inline constexpr double kProjectionTol = 1e-12;
inline constexpr long kProjectionMaxIter = 100000;

Vector project(const ConvexSet &s, const Vector &x);
double distance(const ConvexSet &s, const Vector &x);
bool contains(const ConvexSet &s, const Vector &x, double tol = 1e-10);

bool is_compact(const ConvexSet &s);
// Radius of the smallest origin-agnostic enclosing ball; compact kinds only.
double circumradius(const ConvexSet &s);
// Axis-aligned bounding box; compact kinds only.
BoxSet bounding_box(const ConvexSet &s);

// Annular verification region: feasible \cap (B_sigma(attractor) \ B_eps).
struct Band {
  ConvexSet attractor;
  double sigma;
  double epsilon;
  ConvexSet feasible;

  Band(ConvexSet attractor_, double sigma_, double epsilon_,
       ConvexSet feasible_);

  bool member(const Vector &y, double tol = 1e-10) const;
};

// Uniform rejection sampling on the annulus lo <= dist(attractor, .) <= hi
// intersected with `feasible`, from the bounding box of B_hi(attractor).
// Deterministic given the seed and invariant to the execution policy.
std::vector<Vector> sample_annulus(const ConvexSet &attractor, double lo,
                                   double hi, const ConvexSet &feasible,
                                   int count, std::uint64_t seed,
                                   Exec exec = Exec::Parallel);

std::vector<Vector> sample_band(const Band &band, int count,
                                std::uint64_t seed,
                                Exec exec = Exec::Parallel);

// Points of the attractor itself, obtained by projecting box samples onto it.
std::vector<Vector> sample_set(const ConvexSet &compact_set, int count,
                               std::uint64_t seed,
                               Exec exec = Exec::Parallel);

}  // namespace pgl

#endif
