#include "pgl/spsp.hpp"

#include <algorithm>
#include <cmath>

#include "pgl/lemmas.hpp"

namespace pgl {

const char *to_string(SpspClass c) {
  switch (c) {
    case SpspClass::SP: return "SP";
    case SpspClass::SSP: return "SSP";
    case SpspClass::PSP: return "PSP";
    default: return "SPSP";
  }
}

const char *to_string(PolyakClass c) {
  switch (c) {
    case PolyakClass::StrongPseudogradient: return "strong-pseudogradient";
    case PolyakClass::Strict: return "strict";
    case PolyakClass::Pseudogradient: return "pseudogradient";
    default: return "none";
  }
}

SpspClass classify(double sigma, double epsilon, double b) {
  bool global = std::isinf(sigma);
  bool exact = epsilon == 0.0 && b == 0.0;
  if (global && exact) return SpspClass::SP;
  if (exact) return SpspClass::SSP;
  if (global) return SpspClass::PSP;
  return SpspClass::SPSP;
}

namespace {

double auto_truncation(const ConvexSet &attractor, double sigma,
                       double requested) {
  if (requested > 0) return requested;
  if (std::isfinite(sigma)) return sigma;
  return 10.0 * circumradius(attractor) + 10.0;
}

void keep_worst(std::vector<Witness> &ws, int cap) {
  std::sort(ws.begin(), ws.end(),
            [](const Witness &a, const Witness &b) { return a.margin < b.margin; });
  if (static_cast<int>(ws.size()) > cap) ws.resize(cap);
}

}  // namespace

VerificationReport verify(const DirectionOracle &oracle,
                          const LyapunovField &v, const ConvexSet &feasible,
                          const SpspCertificate &cert,
                          const VerifyOptions &opts) {
  if (!cert.phi) throw std::invalid_argument("verify: certificate has no phi");
  VerificationReport rep;
  rep.seed = opts.seed;
  rep.band_samples = opts.samples;
  rep.truncation_radius =
      auto_truncation(v.attractor, cert.sigma, opts.truncation_radius);

  Band band(v.attractor, rep.truncation_radius, cert.epsilon, feasible);
  auto band_pts = sample_band(band, opts.samples, opts.seed, opts.exec);

  struct PerSample {
    double margin;
    double phi;
    Vector dir;
  };
  std::vector<PerSample> per(band_pts.size());
  parallel_for(band_pts.size(), opts.exec, [&](std::size_t i) {
    DirectionOracle local = oracle.clone();
    const Vector &y = band_pts[i];
    Vector g = v.gradient(y);
    double phi_y = cert.phi(y);
    auto dirs = local.query(y, mix_seed(opts.seed, 0xb00 + i));
    double worst = std::numeric_limits<double>::infinity();
    Vector worst_dir;
    for (const auto &s : dirs) {
      double m = dot(g, s) - phi_y;
      if (m < worst) { worst = m; worst_dir = s; }
    }
    per[i] = {worst, phi_y, std::move(worst_dir)};
  });

  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.min_phi = std::numeric_limits<double>::infinity();
  std::vector<Witness> ws;
  for (std::size_t i = 0; i < per.size(); ++i) {
    rep.min_margin = std::min(rep.min_margin, per[i].margin);
    rep.min_phi = std::min(rep.min_phi, per[i].phi);
    ws.push_back({band_pts[i], per[i].dir, per[i].margin});
  }
  keep_worst(ws, opts.witnesses_kept);
  rep.witnesses = std::move(ws);

  // Inner condition on feasible \cap B_eps(A); for eps = 0 this degenerates
  // to points of the attractor itself.
  auto inner_pts = sample_annulus(v.attractor, 0.0, cert.epsilon, feasible,
                                  opts.inner_samples, mix_seed(opts.seed, 0x1u),
                                  opts.exec);
  std::vector<double> inner_margins(inner_pts.size());
  parallel_for(inner_pts.size(), opts.exec, [&](std::size_t i) {
    DirectionOracle local = oracle.clone();
    const Vector &y = inner_pts[i];
    Vector g = v.gradient(y);
    auto dirs = local.query(y, mix_seed(opts.seed, 0x177e + i));
    double worst = std::numeric_limits<double>::infinity();
    for (const auto &s : dirs) worst = std::min(worst, dot(g, s) + cert.b);
    inner_margins[i] = worst;
  });
  rep.inner_margin = std::numeric_limits<double>::infinity();
  for (double m : inner_margins) rep.inner_margin = std::min(rep.inner_margin, m);

  // Definition 1 also requires phi itself to be positive on the band; a
  // candidate whose phi dips negative there is rejected even if the margin
  // inequality holds.
  bool phi_ok = rep.min_phi >= -opts.tol;
  rep.pass = rep.min_margin >= -opts.tol && rep.inner_margin >= -opts.tol && phi_ok;
  if (!phi_ok) {
    // Surface the most negative phi point as the leading witness.
    std::size_t worst_i = 0;
    for (std::size_t i = 1; i < per.size(); ++i)
      if (per[i].phi < per[worst_i].phi) worst_i = i;
    rep.witnesses.insert(rep.witnesses.begin(),
                         {band_pts[worst_i], per[worst_i].dir, per[worst_i].phi});
    if (static_cast<int>(rep.witnesses.size()) > opts.witnesses_kept)
      rep.witnesses.resize(opts.witnesses_kept);
  }
  return rep;
}

CertResult certify_linear_objective(double c, double a, double r, double sigma,
                                    const ConvexSet &attractor) {
  if (c <= 0) throw std::invalid_argument("certify_linear_objective: c must be > 0");
  if (a < 0 || r < 0 || sigma <= 0)
    throw std::invalid_argument("certify_linear_objective: bad a, r, or sigma");
  if (!(a < c)) return Infeasible{"a < c"};
  if (!(r < (c - a) / sigma)) return Infeasible{"r < (c - a) / sigma"};
  SpspCertificate cert;
  cert.sigma = sigma;
  cert.epsilon = 0.0;
  cert.b = 0.0;
  cert.classification = SpspClass::SSP;
  cert.provenance = "analytic:linear-objective";
  if (r > 0) {
    cert.phi = [attractor, c, a, r](const Vector &y) {
      double d = distance(attractor, y);
      return r * d * ((c - a) / r - d);
    };
  } else {
    cert.phi = [attractor, c, a](const Vector &y) {
      return (c - a) * distance(attractor, y);
    };
  }
  return cert;
}

CertResult certify_strongly_convex(double c, double a, double r,
                                   const ConvexSet &attractor) {
  if (c <= 0) throw std::invalid_argument("certify_strongly_convex: c must be > 0");
  if (a < 0 || r < 0)
    throw std::invalid_argument("certify_strongly_convex: a, r must be >= 0");
  if (!(r < c / 2.0)) return Infeasible{"r < c/2"};
  SpspCertificate cert;
  cert.sigma = std::numeric_limits<double>::infinity();
  cert.epsilon = 2.0 * a / (c - 2.0 * r);
  cert.b = a * a / (2.0 * (c - 2.0 * r));
  cert.classification = classify(cert.sigma, cert.epsilon, cert.b);
  cert.provenance = "analytic:strongly-convex";
  double half = (c - 2.0 * r) / 2.0;
  double eps = cert.epsilon;
  cert.phi = [attractor, half, eps](const Vector &y) {
    double d = distance(attractor, y);
    return half * d * (d - eps);
  };
  return cert;
}

CertResult certify_convex(const ScalarField &objective,
                          const ConvexSet &attractor, double a, double r,
                          double sigma, const ConvexCertifyOptions &opts) {
  if (!objective.convex)
    throw std::invalid_argument("certify_convex: objective must be convex");
  if (!objective.minimum_value)
    throw std::invalid_argument("certify_convex: minimum value must be known");
  if (a < 0 || r < 0 || sigma <= 0)
    throw std::invalid_argument("certify_convex: bad a, r, or sigma");
  const double jstar = *objective.minimum_value;
  auto gap = [&objective, jstar](const Vector &y) {
    return objective.value(y) - jstar;
  };

  // The underestimation constant is the shell minimum of J - J* at radius
  // eps_hat, and eps_hat itself depends on the resulting constant; iterate
  // to the fixed point, starting from a thin shell.
  ContainmentOptions copts;
  copts.grid_resolution = opts.grid_resolution;
  double eps_hat = std::max(sigma / 100.0, 2.0 * opts.grid_resolution);
  double c = 0, eps = 0;
  for (int it = 0; it < opts.fixed_point_iters; ++it) {
    ContainmentResult cr =
        containment_level(gap, attractor, 0.0, eps_hat, sigma, copts);
    c = cr.l2;
    if (!(c > 0)) return Infeasible{"c > 0 (shell minimum of J - J*)"};
    if (!(r < c / (sigma * sigma))) return Infeasible{"r < c / sigma^2"};
    if (!(a < (c - sigma * sigma * r) / sigma))
      return Infeasible{"a < (c - sigma^2 r) / sigma"};
    eps = sigma * sigma * a / (c - sigma * sigma * r);
    if (eps <= eps_hat + opts.grid_resolution) break;
    eps_hat = eps;
  }

  SpspCertificate cert;
  cert.sigma = sigma;
  cert.epsilon = eps;
  cert.b = a * eps + r * eps * eps;
  cert.classification = classify(cert.sigma, cert.epsilon, cert.b);
  cert.provenance = "analytic:convex";
  const double coeff = (c - sigma * sigma * r) / (sigma * sigma);
  cert.phi = [attractor, coeff, eps](const Vector &y) {
    double d = distance(attractor, y);
    return coeff * d * d * (d - eps);
  };
  return cert;
}

PolyakReport classify_polyak(const DirectionOracle &oracle,
                             const LyapunovField &v, const Band &region,
                             int samples, std::uint64_t seed, Exec exec) {
  auto pts = sample_band(region, samples, seed, exec);
  std::vector<double> tau(pts.size()), ip(pts.size());
  parallel_for(pts.size(), exec, [&](std::size_t i) {
    DirectionOracle local = oracle.clone();
    const Vector &y = pts[i];
    Vector g = v.gradient(y);
    double vy = v.value(y);
    auto dirs = local.query(y, mix_seed(seed, i));
    double worst_ip = std::numeric_limits<double>::infinity();
    for (const auto &s : dirs) worst_ip = std::min(worst_ip, dot(g, s));
    ip[i] = worst_ip;
    tau[i] = vy > 1e-12 ? worst_ip / vy : std::numeric_limits<double>::infinity();
  });

  PolyakReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.tau_hat = std::numeric_limits<double>::infinity();
  rep.min_inner_product = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rep.tau_hat = std::min(rep.tau_hat, tau[i]);
    rep.min_inner_product = std::min(rep.min_inner_product, ip[i]);
  }
  constexpr double kTol = 1e-9;
  if (rep.tau_hat > kTol)
    rep.cls = PolyakClass::StrongPseudogradient;
  else if (rep.min_inner_product > kTol)
    rep.cls = PolyakClass::Strict;
  else if (rep.min_inner_product >= -kTol)
    rep.cls = PolyakClass::Pseudogradient;
  else
    rep.cls = PolyakClass::None;
  return rep;
}

}  // namespace pgl
