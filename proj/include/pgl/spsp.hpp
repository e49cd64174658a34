#ifndef PGL_SPSP_HPP
#define PGL_SPSP_HPP

#include <limits>
#include <variant>

#include "pgl/oracles.hpp"

namespace pgl {

enum class SpspClass { SP, SSP, PSP, SPSP };

const char *to_string(SpspClass c);

// Classification follows from the shape of (sigma, epsilon, b): epsilon=b=0
// and sigma=inf gives SP; epsilon=b=0 gives SSP; sigma=inf gives PSP.
SpspClass classify(double sigma, double epsilon, double b);

struct SpspCertificate {
  double sigma = std::numeric_limits<double>::infinity();
  double epsilon = 0.0;
  double b = 0.0;
  std::function<double(const Vector &)> phi;
  SpspClass classification = SpspClass::SP;
  std::string provenance;  // "analytic:<name>" or "empirical"
};

struct Infeasible {
  std::string violated;  // the inequality that failed, e.g. "a < c"
};

using CertResult = std::variant<SpspCertificate, Infeasible>;

struct Witness {
  Vector point;
  Vector direction;
  double margin;
};

struct VerificationReport {
  bool pass = false;
  int band_samples = 0;
  double min_margin = 0;    // min over band of gradV.s - phi(y)
  double inner_margin = 0;  // min over the inner set of gradV.s + b
  double min_phi = 0;       // min of phi over band samples
  std::vector<Witness> witnesses;
  std::uint64_t seed = 0;
  double truncation_radius = 0;  // finite sampling radius used for sigma=inf
};

struct VerifyOptions {
  int samples = 10000;
  int inner_samples = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  // 0 means automatic: min(sigma, 10 * circumradius(attractor) + 10).
  double truncation_radius = 0;
  int witnesses_kept = 10;
  Exec exec = Exec::Parallel;
};

// Samples the band and the inner set, evaluates every oracle direction at
// every sample, and reports worst-case margins against the certificate.
VerificationReport verify(const DirectionOracle &oracle,
                          const LyapunovField &v, const ConvexSet &feasible,
                          const SpspCertificate &cert,
                          const VerifyOptions &opts = {});

// Closed-form certificate for J = c dist(y, X*) under the (a, r) error
// model; feasible iff a < c and r < (c - a) / sigma.
CertResult certify_linear_objective(double c, double a, double r, double sigma,
                                    const ConvexSet &attractor);

// Closed-form certificate for a c-strongly-convex objective; feasible iff
// r < c/2, with epsilon = 2a/(c-2r) and b = a^2/(2(c-2r)).
CertResult certify_strongly_convex(double c, double a, double r,
                                   const ConvexSet &attractor);

struct ConvexCertifyOptions {
  double grid_resolution = 0.01;
  int fixed_point_iters = 100;
};

// Certificate for a general convex objective with known minimum: the
// underestimation constant c is taken from the sublevel construction, then
// epsilon = sigma^2 a / (c - sigma^2 r) and b = a eps + r eps^2.
CertResult certify_convex(const ScalarField &objective,
                          const ConvexSet &attractor, double a, double r,
                          double sigma,
                          const ConvexCertifyOptions &opts = {});

enum class PolyakClass { StrongPseudogradient, Strict, Pseudogradient, None };

const char *to_string(PolyakClass c);

struct PolyakReport {
  PolyakClass cls = PolyakClass::None;
  double tau_hat = 0;        // min over samples of gradV.s / V off the attractor
  double min_inner_product = 0;
  int samples = 0;
  std::uint64_t seed = 0;
};

PolyakReport classify_polyak(const DirectionOracle &oracle,
                             const LyapunovField &v, const Band &region,
                             int samples, std::uint64_t seed,
                             Exec exec = Exec::Parallel);

}  // namespace pgl

#endif
