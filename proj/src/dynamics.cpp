#include "pgl/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace pgl {

namespace {

Vector select_direction(const std::vector<Vector> &dirs, Selection sel,
                        const Vector &vgrad_or_empty, std::uint64_t seed) {
  if (dirs.empty())
    throw std::runtime_error("iterate: oracle returned no direction");
  switch (sel) {
    case Selection::First:
      return dirs.front();
    case Selection::WorstCaseVsV: {
      if (vgrad_or_empty.empty()) return dirs.front();
      std::size_t best = 0;
      double worst = dot(vgrad_or_empty, dirs[0]);
      for (std::size_t i = 1; i < dirs.size(); ++i) {
        double ip = dot(vgrad_or_empty, dirs[i]);
        if (ip < worst) { worst = ip; best = i; }
      }
      return dirs[best];
    }
    case Selection::Random: {
      Rng rng(seed);
      return dirs[static_cast<std::size_t>(rng.raw() % dirs.size())];
    }
  }
  return dirs.front();
}

}  // namespace

TrajectoryRecord iterate(const Vector &y0, const DirectionOracle &oracle,
                         const ConvexSet &feasible, double alpha, int horizon,
                         Selection selection, std::uint64_t seed,
                         const LyapunovField *v) {
  if (!(alpha > 0)) throw std::invalid_argument("iterate: alpha must be > 0");
  if (horizon < 0) throw std::invalid_argument("iterate: negative horizon");
  require_finite(y0, "iterate y0");

  TrajectoryRecord rec;
  rec.alpha = alpha;
  rec.seed = seed;
  rec.iterates.reserve(horizon + 1);
  rec.steps.reserve(horizon);

  DirectionOracle local = oracle.clone();
  Vector y = project(feasible, y0);
  rec.iterates.push_back(y);
  double v_prev = v ? v->value(y) : 0.0;

  for (int t = 0; t < horizon; ++t) {
    StepDiag diag;
    try {
      std::uint64_t step_seed = mix_seed(seed, static_cast<std::uint64_t>(t));
      auto dirs = local.query(y, step_seed);
      Vector vgrad = v ? v->gradient(y) : Vector{};
      Vector s = select_direction(dirs, selection, vgrad, step_seed);
      Vector y_next = project(feasible, axpy(y, -alpha, s));

      if (v) {
        double v_next = v->value(y_next);
        diag.v = v_prev;
        diag.dv = v_next - v_prev;
        diag.dist = distance(v->attractor, y);
        diag.descent_rhs =
            -alpha * dot(vgrad, s) + 0.5 * alpha * alpha * norm_sq(s);
        v_prev = v_next;
      }
      diag.direction = s;
      rec.steps.push_back(std::move(diag));
      y = std::move(y_next);
      rec.iterates.push_back(y);
    } catch (const std::exception &e) {
      rec.aborted = true;
      rec.abort_reason = e.what();
      break;
    }
  }
  return rec;
}

DescentCheck check_descent_lemma(const TrajectoryRecord &traj,
                                 const LyapunovField &v, WMode mode) {
  double w;
  if (mode == WMode::Half) {
    if (v.kind != LyapunovKind::SquaredDistance)
      throw std::invalid_argument(
          "check_descent_lemma: half mode needs a squared-distance V");
    w = 0.5;
  } else {
    if (!v.lipschitz_grad)
      throw std::invalid_argument(
          "check_descent_lemma: lipschitz mode needs L_gradV metadata");
    w = *v.lipschitz_grad;
  }
  DescentCheck out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  const double alpha = traj.alpha;
  for (std::size_t t = 0; t + 1 < traj.iterates.size(); ++t) {
    const Vector &y = traj.iterates[t];
    const Vector &s = traj.steps[t].direction;
    double dv = v.value(traj.iterates[t + 1]) - v.value(y);
    double rhs = -alpha * dot(v.gradient(y), s) + alpha * alpha * w * norm_sq(s);
    double margin = rhs - dv;
    out.margins.push_back(margin);
    if (margin < out.worst_margin) {
      out.worst_margin = margin;
      out.worst_step = static_cast<int>(t);
    }
  }
  return out;
}

SpasConditionsReport check_spas_conditions(
    const LyapunovField &v, const DirectionOracle &oracle,
    const ConvexSet &feasible, const SpasConditionsParams &p,
    const std::function<double(const Vector &)> &w_fn) {
  if (!(p.sigma_o > p.epsilon_o + p.rho_o))
    throw std::invalid_argument(
        "check_spas_conditions: need sigma_o > epsilon_o + rho_o");
  const double inner_r = p.epsilon_o + p.rho_o;

  auto band_pts = sample_annulus(v.attractor, inner_r, p.sigma_o, feasible,
                                 p.samples, p.seed, p.exec);
  auto inner_pts = sample_annulus(v.attractor, 0.0, inner_r, feasible,
                                  std::max(p.samples / 10, 100),
                                  mix_seed(p.seed, 0x5u), p.exec);

  auto one_step_dv_max = [&](const Vector &y, std::uint64_t seed) {
    DirectionOracle local = oracle.clone();
    auto dirs = local.query(y, seed);
    double vy = v.value(y);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto &s : dirs) {
      Vector yn = project(feasible, axpy(y, -p.alpha, s));
      worst = std::max(worst, v.value(yn) - vy);
    }
    return worst;
  };

  std::vector<double> w_vals(band_pts.size()), dv_band(band_pts.size());
  parallel_for(band_pts.size(), p.exec, [&](std::size_t i) {
    w_vals[i] = w_fn(band_pts[i]);
    dv_band[i] = one_step_dv_max(band_pts[i], mix_seed(p.seed, i));
  });
  std::vector<double> dv_inner(inner_pts.size());
  parallel_for(inner_pts.size(), p.exec, [&](std::size_t i) {
    dv_inner[i] = one_step_dv_max(inner_pts[i], mix_seed(p.seed, 0xABCu + i));
  });

  SpasConditionsReport rep;
  rep.samples = p.samples;
  rep.seed = p.seed;
  rep.w_min = std::numeric_limits<double>::infinity();
  rep.p2_margin = std::numeric_limits<double>::infinity();
  rep.p3_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < band_pts.size(); ++i) {
    if (w_vals[i] < rep.w_min) {
      rep.w_min = w_vals[i];
      rep.p1_witness = band_pts[i];
    }
    double m2 = -w_vals[i] - dv_band[i];
    if (m2 < rep.p2_margin) {
      rep.p2_margin = m2;
      rep.p2_witness = band_pts[i];
    }
  }
  for (std::size_t i = 0; i < inner_pts.size(); ++i) {
    double m3 = p.b_o - dv_inner[i];
    if (m3 < rep.p3_margin) {
      rep.p3_margin = m3;
      rep.p3_witness = inner_pts[i];
    }
  }
  rep.p1 = rep.w_min > p.tol;
  rep.p2 = rep.p2_margin >= -p.tol;
  rep.p3 = rep.p3_margin >= -p.tol;
  if (rep.p1) rep.p1_witness.reset();
  if (rep.p2) rep.p2_witness.reset();
  if (rep.p3) rep.p3_witness.reset();
  return rep;
}

namespace {

struct TrialOutcome {
  std::vector<double> dists;  // dist to attractor at every iterate
  Vector start;
};

TrialOutcome run_trial(const Vector &y0, const DirectionOracle &oracle,
                       const ConvexSet &feasible, const ConvexSet &attractor,
                       const LyapunovField &v, double alpha, int horizon,
                       Selection sel, std::uint64_t seed) {
  DirectionOracle local = oracle.clone();
  TrialOutcome out;
  out.start = y0;
  out.dists.reserve(horizon + 1);
  Vector y = project(feasible, y0);
  out.dists.push_back(distance(attractor, y));
  for (int t = 0; t < horizon; ++t) {
    std::uint64_t step_seed = mix_seed(seed, static_cast<std::uint64_t>(t));
    auto dirs = local.query(y, step_seed);
    Vector s = select_direction(dirs, sel, v.gradient(y), step_seed);
    y = project(feasible, axpy(y, -alpha, s));
    out.dists.push_back(distance(attractor, y));
  }
  return out;
}

}  // namespace

SpasReport certify_spas(const DirectionOracle &oracle,
                        const ConvexSet &feasible, const ConvexSet &attractor,
                        const LyapunovField &v, double alpha,
                        const SpasTrialParams &params, std::uint64_t seed,
                        Exec exec) {
  if (!(params.sigma > params.rho_a))
    throw std::invalid_argument("certify_spas: need sigma > rho_a");
  SpasReport rep;
  rep.alpha = alpha;
  rep.trials = params.trials;
  rep.seed = seed;

  // Practical stability: largest delta (binary search, resolution
  // 1e-3 rho_s) such that every trial from B_delta(A) stays in B_rho_s(A).
  auto stays_within = [&](double delta, std::uint64_t s_seed,
                          std::optional<TrajectoryRecord> *witness) {
    auto starts = sample_annulus(attractor, 0.0, delta, feasible,
                                 params.trials, s_seed, exec);
    std::vector<char> ok(starts.size(), 1);
    parallel_for(starts.size(), exec, [&](std::size_t i) {
      auto trial = run_trial(starts[i], oracle, feasible, attractor, v, alpha,
                             params.horizon, params.selection,
                             mix_seed(s_seed, i));
      for (double d : trial.dists)
        if (d > params.rho_s) { ok[i] = 0; break; }
    });
    for (std::size_t i = 0; i < starts.size(); ++i) {
      if (!ok[i]) {
        if (witness)
          *witness = iterate(starts[i], oracle, feasible, alpha,
                             params.horizon, params.selection,
                             mix_seed(s_seed, i), &v);
        return false;
      }
    }
    return true;
  };

  const double resolution = 1e-3 * params.rho_s;
  std::uint64_t stab_seed = mix_seed(seed, 0x57ABu);
  if (stays_within(params.rho_s, stab_seed, nullptr)) {
    rep.stable = true;
    rep.delta_found = params.rho_s;
  } else {
    double lo = 0.0, hi = params.rho_s;
    std::optional<TrajectoryRecord> escape;
    // Establish a feasible lower point first.
    double probe = resolution;
    if (!stays_within(probe, stab_seed, &escape)) {
      rep.stable = false;
      rep.escape_witness = escape;
    } else {
      lo = probe;
      while (hi - lo > resolution) {
        double mid = 0.5 * (lo + hi);
        if (stays_within(mid, stab_seed, nullptr))
          lo = mid;
        else
          hi = mid;
      }
      rep.stable = true;
      rep.delta_found = lo;
    }
  }

  // Semiglobal practical attractivity: uniform entry time into B_rho_a(A)
  // from B_sigma(A), plus the achieved tail radius.
  std::uint64_t attr_seed = mix_seed(seed, 0xA77Au);
  auto starts = sample_annulus(attractor, 0.0, params.sigma, feasible,
                               params.trials, attr_seed, exec);
  std::vector<long> last_violation(starts.size(), -1);
  std::vector<double> tail_max(starts.size(), 0.0);
  parallel_for(starts.size(), exec, [&](std::size_t i) {
    auto trial = run_trial(starts[i], oracle, feasible, attractor, v, alpha,
                           params.horizon, params.selection,
                           mix_seed(attr_seed, i));
    long last = -1;
    for (std::size_t t = 0; t < trial.dists.size(); ++t)
      if (trial.dists[t] > params.rho_a) last = static_cast<long>(t);
    last_violation[i] = last;
    std::size_t tail_from = trial.dists.size() - trial.dists.size() / 10 - 1;
    double tm = 0;
    for (std::size_t t = tail_from; t < trial.dists.size(); ++t)
      tm = std::max(tm, trial.dists[t]);
    tail_max[i] = tm;
  });
  long entry = 0;
  bool contained = true;
  std::size_t straggler = 0;
  double rho_a_achieved = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    rho_a_achieved = std::max(rho_a_achieved, tail_max[i]);
    if (last_violation[i] + 1 >= static_cast<long>(params.horizon)) {
      contained = false;
      straggler = i;
    }
    entry = std::max(entry, last_violation[i] + 1);
  }
  rep.rho_a_achieved = rho_a_achieved;
  if (contained) {
    rep.attractive = true;
    rep.t_found = static_cast<int>(entry);
  } else {
    rep.attractive = false;
    rep.straggler_witness =
        iterate(starts[straggler], oracle, feasible, alpha, params.horizon,
                params.selection, mix_seed(attr_seed, straggler), &v);
  }
  rep.spas = rep.stable && rep.attractive;
  return rep;
}

std::vector<SpasReport> certify_spas_grid(
    const DirectionOracle &oracle, const ConvexSet &feasible,
    const ConvexSet &attractor, const LyapunovField &v,
    const std::vector<double> &alpha_grid, const SpasTrialParams &params,
    std::uint64_t seed, Exec exec) {
  std::vector<SpasReport> out;
  for (double a : alpha_grid)
    out.push_back(
        certify_spas(oracle, feasible, attractor, v, a, params, seed, exec));
  return out;
}

}  // namespace pgl
