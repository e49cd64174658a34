#ifndef PGL_PROBLEMS_HPP
#define PGL_PROBLEMS_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "pgl/geometry.hpp"

namespace pgl {

struct ScalarField {
  int dim = 0;
  std::function<double(const Vector &)> value;
  std::function<Vector(const Vector &)> gradient;
  // Sampled subset of the subdifferential at y; singleton {gradient(y)}
  // wherever the field is differentiable.
  std::function<std::vector<Vector>(const Vector &, std::uint64_t, int)>
      subdifferential;
  std::optional<double> lipschitz_grad;
  std::optional<double> strong_convexity;
  std::optional<double> minimum_value;
  bool convex = false;
};

enum class LyapunovKind { SquaredDistance, ObjectiveGap, Custom };

struct LyapunovField : ScalarField {
  ConvexSet attractor = ConvexSet::whole_space(0);
  LyapunovKind kind = LyapunovKind::Custom;
};

struct Problem {
  std::string name;
  ScalarField objective;
  ConvexSet minimizers = ConvexSet::whole_space(0);
};

// name in {quadratic, strongly-convex-quadratic, norm-cone, max-affine,
// weighted-quadratic, nonconvex-1d}
Problem builtin(const std::string &name,
                const std::map<std::string, double> &params = {});

// J(y) = max_i (a_i . y + b_i). Minimum value/metadata must be supplied by
// the caller when known.
ScalarField make_max_affine(std::vector<Vector> slopes, Vector offsets,
                            std::optional<double> minimum_value = {});

LyapunovField make_lyapunov(LyapunovKind kind, ConvexSet attractor,
                            const ScalarField *objective = nullptr);

}  // namespace pgl

#endif
