#ifndef PGL_ORACLES_HPP
#define PGL_ORACLES_HPP

#include <functional>
#include <memory>

#include "pgl/problems.hpp"

namespace pgl {

// Multi-valued search-direction map. Stateless oracles are freely shareable;
// oracles with a weight schedule carry a per-instance query counter, so use
// clone() to give each worker its own instance.
struct DirectionOracle {
  int dim = 0;
  std::function<std::vector<Vector>(const Vector &, std::uint64_t)> query;
  std::optional<double> bound;        // ||s|| <= B on the declared region
  std::optional<double> lipschitz;    // ||s(y1)-s(y2)|| <= L ||y1-y2||
  std::optional<double> growth_beta;  // ||s||^2 <= beta gradV.s
  std::optional<double> lambda_min;   // weighted-gradient schedules only
  bool singleton = true;
  std::function<DirectionOracle()> clone_fn;

  DirectionOracle clone() const { return clone_fn ? clone_fn() : *this; }
};

enum class ErrorLaw { WorstCaseAligned, RandomUnit, FixedVector };

// Deterministic perturbation with ||eta(y)|| <= a + r dist(y, attractor).
struct ErrorModel {
  double absolute = 0.0;  // a
  double relative = 0.0;  // r
  ErrorLaw law = ErrorLaw::WorstCaseAligned;
  Vector fixed_direction;  // FixedVector law only; normalized at use

  ErrorModel() = default;
  ErrorModel(double a, double r, ErrorLaw l = ErrorLaw::WorstCaseAligned)
      : absolute(a), relative(r), law(l) {
    if (a < 0 || r < 0)
      throw std::invalid_argument("ErrorModel: a and r must be >= 0");
  }
};

DirectionOracle gradient_oracle(const ScalarField &f);

DirectionOracle subgradient_oracle(const ScalarField &f,
                                   int samples_per_query = 4);

// Direction H(t) grad f(y), where t is the per-instance query counter and
// H(t) cycles through the schedule. Each H must be symmetric positive
// definite.
DirectionOracle weighted_gradient_oracle(const ScalarField &f,
                                         std::vector<Matrix> schedule);

// Forward differences along the standard basis; error <= sqrt(n) mu L.
DirectionOracle finite_difference_oracle(const ScalarField &f, double mu);

// Wraps each direction s as s + eta(y). For the worst-case-aligned law eta
// is anti-parallel to grad V when a V is registered, else parallel to -s,
// with magnitude exactly a + r dist(y, attractor).
DirectionOracle perturb(const DirectionOracle &base, const ErrorModel &em,
                        const ConvexSet &attractor,
                        const LyapunovField *v = nullptr);

}  // namespace pgl

#endif
