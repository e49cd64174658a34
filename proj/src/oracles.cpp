#include "pgl/oracles.hpp"

#include <cmath>

namespace pgl {

DirectionOracle gradient_oracle(const ScalarField &f) {
  if (!f.gradient)
    throw std::invalid_argument("gradient_oracle: field has no gradient");
  DirectionOracle o;
  o.dim = f.dim;
  o.singleton = true;
  o.lipschitz = f.lipschitz_grad;
  o.query = [grad = f.gradient](const Vector &y, std::uint64_t) {
    return std::vector<Vector>{grad(y)};
  };
  return o;
}

DirectionOracle subgradient_oracle(const ScalarField &f,
                                   int samples_per_query) {
  if (!f.convex)
    throw std::invalid_argument("subgradient_oracle: field must be convex");
  if (!f.subdifferential)
    throw std::invalid_argument("subgradient_oracle: field has no subdifferential");
  DirectionOracle o;
  o.dim = f.dim;
  o.singleton = false;
  o.query = [sub = f.subdifferential, samples_per_query](const Vector &y,
                                                         std::uint64_t seed) {
    return sub(y, seed, samples_per_query);
  };
  return o;
}

DirectionOracle weighted_gradient_oracle(const ScalarField &f,
                                         std::vector<Matrix> schedule) {
  if (!f.gradient)
    throw std::invalid_argument("weighted_gradient_oracle: field has no gradient");
  if (schedule.empty())
    throw std::invalid_argument("weighted_gradient_oracle: empty schedule");
  double lambda_min = std::numeric_limits<double>::infinity();
  double lambda_max = 0;
  for (const auto &h : schedule) {
    if (h.n != f.dim)
      throw std::invalid_argument("weighted_gradient_oracle: dimension mismatch");
    auto ev = symmetric_eigenvalues(h);
    if (ev.front() <= 0)
      throw std::invalid_argument(
          "weighted_gradient_oracle: weight not positive definite");
    lambda_min = std::min(lambda_min, ev.front());
    lambda_max = std::max(lambda_max, ev.back());
  }

  auto make = [f, schedule, lambda_min, lambda_max]() {
    DirectionOracle o;
    o.dim = f.dim;
    o.singleton = true;
    o.lambda_min = lambda_min;
    if (f.lipschitz_grad) o.lipschitz = lambda_max * *f.lipschitz_grad;
    auto counter = std::make_shared<std::size_t>(0);
    o.query = [grad = f.gradient, schedule, counter](const Vector &y,
                                                     std::uint64_t) {
      const Matrix &h = schedule[*counter % schedule.size()];
      ++*counter;
      return std::vector<Vector>{matvec(h, grad(y))};
    };
    return o;
  };
  DirectionOracle o = make();
  o.clone_fn = make;
  return o;
}

DirectionOracle finite_difference_oracle(const ScalarField &f, double mu) {
  if (mu <= 0)
    throw std::invalid_argument("finite_difference_oracle: mu must be > 0");
  if (!f.value)
    throw std::invalid_argument("finite_difference_oracle: field has no value");
  DirectionOracle o;
  o.dim = f.dim;
  o.singleton = true;
  o.query = [val = f.value, mu, n = f.dim](const Vector &y, std::uint64_t) {
    double base = val(y);
    Vector s(n);
    Vector probe = y;
    for (int i = 0; i < n; ++i) {
      probe[i] = y[i] + mu;
      s[i] = (val(probe) - base) / mu;
      probe[i] = y[i];
    }
    return std::vector<Vector>{s};
  };
  return o;
}

DirectionOracle perturb(const DirectionOracle &base, const ErrorModel &em,
                        const ConvexSet &attractor, const LyapunovField *v) {
  std::optional<Vector> fixed_unit;
  if (em.law == ErrorLaw::FixedVector) {
    double nf = norm(em.fixed_direction);
    if (nf <= 0)
      throw std::invalid_argument("perturb: fixed-vector law needs a direction");
    fixed_unit = scaled(em.fixed_direction, 1.0 / nf);
  }
  std::function<Vector(const Vector &)> vgrad;
  if (v) vgrad = v->gradient;

  auto wrap = [em, attractor, vgrad, fixed_unit](DirectionOracle inner) {
    DirectionOracle o;
    o.dim = inner.dim;
    o.singleton = inner.singleton && em.law != ErrorLaw::RandomUnit;
    o.query = [inner, em, attractor, vgrad, fixed_unit](
                  const Vector &y, std::uint64_t seed) {
      double bound = em.absolute + em.relative * distance(attractor, y);
      std::vector<Vector> dirs = inner.query(y, seed);
      if (bound <= 0) return dirs;
      for (std::size_t k = 0; k < dirs.size(); ++k) {
        Vector &s = dirs[k];
        Vector eta;
        switch (em.law) {
          case ErrorLaw::WorstCaseAligned: {
            Vector axis = vgrad ? vgrad(y) : s;
            double na = norm(axis);
            if (na <= 1e-300) {
              // No descent axis to oppose; push along a fixed coordinate.
              axis = Vector(y.size(), 0.0);
              axis[0] = 1.0;
              na = 1.0;
            }
            eta = scaled(axis, -bound / na);
            break;
          }
          case ErrorLaw::RandomUnit: {
            Rng rng(mix_seed(seed, 0x9e1au + k));
            double mag = rng.uniform(0.0, bound);
            eta = scaled(rng.unit_vector(static_cast<int>(y.size())), mag);
            break;
          }
          case ErrorLaw::FixedVector:
            eta = scaled(*fixed_unit, bound);
            break;
        }
        s = add(s, eta);
      }
      return dirs;
    };
    return o;
  };

  DirectionOracle o = wrap(base);
  if (base.clone_fn) {
    o.clone_fn = [wrap, inner_clone = base.clone_fn]() {
      return wrap(inner_clone());
    };
  }
  return o;
}

}  // namespace pgl
