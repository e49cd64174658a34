#ifndef PGL_DYNAMICS_HPP
#define PGL_DYNAMICS_HPP

#include "pgl/spsp.hpp"

namespace pgl {

enum class Selection { First, WorstCaseVsV, Random };

struct StepDiag {
  double v = 0;
  double dv = 0;
  double dist = 0;
  double descent_rhs = 0;  // -alpha gradV.s + alpha^2 w ||s||^2 when V given
  Vector direction;
};

struct TrajectoryRecord {
  std::vector<Vector> iterates;  // horizon + 1 entries
  double alpha = 0;
  std::vector<StepDiag> steps;   // one per transition when a V is attached
  std::uint64_t seed = 0;
  std::string problem_id, oracle_id;
  bool aborted = false;
  std::string abort_reason;
};

// Runs y(t+1) = P_Xi[y(t) - alpha s(t)] for `horizon` steps. A starting
// point outside Xi is projected in first. Diagnostics use w = 1/2.
TrajectoryRecord iterate(const Vector &y0, const DirectionOracle &oracle,
                         const ConvexSet &feasible, double alpha, int horizon,
                         Selection selection, std::uint64_t seed,
                         const LyapunovField *v = nullptr);

enum class WMode { Half, Lipschitz };

struct DescentCheck {
  double worst_margin = 0;
  int worst_step = -1;
  std::vector<double> margins;  // RHS - deltaV per step
};

// Recomputes V along the recorded iterates and asserts the per-step bound
// deltaV <= -alpha gradV.s + alpha^2 w ||s||^2, with w = 1/2 (squared
// distance V, generic feasible set) or w = L_gradV (generic V, Xi = R^n).
DescentCheck check_descent_lemma(const TrajectoryRecord &traj,
                                 const LyapunovField &v, WMode mode);

struct SpasConditionsReport {
  bool p1 = false, p2 = false, p3 = false;
  double w_min = 0;        // min of W over band samples (P1)
  double p2_margin = 0;    // min of -W - deltaV over band samples
  double p3_margin = 0;    // min of b_o - deltaV over inner samples
  std::optional<Vector> p1_witness, p2_witness, p3_witness;
  int samples = 0;
  std::uint64_t seed = 0;
};

struct SpasConditionsParams {
  double sigma_o = 0;
  double epsilon_o = 0;
  double rho_o = 0;
  double alpha = 0;
  double b_o = 0;
  int samples = 10000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  Exec exec = Exec::Parallel;
};

// One-step check of the Lyapunov conditions: W > 0 and deltaV <= -W on the
// outer band, deltaV <= b_o on the inner region, worst case over the
// sampled oracle directions at each point.
SpasConditionsReport check_spas_conditions(
    const LyapunovField &v, const DirectionOracle &oracle,
    const ConvexSet &feasible, const SpasConditionsParams &params,
    const std::function<double(const Vector &)> &w_fn);

struct SpasTrialParams {
  double sigma = 0;       // start region radius for attractivity
  double rho_a = 0;       // target residual neighborhood
  double rho_s = 0;       // stability envelope
  int trials = 64;
  int horizon = 10000;
  Selection selection = Selection::WorstCaseVsV;
};

struct SpasReport {
  double alpha = 0;
  bool stable = false;
  bool attractive = false;
  bool spas = false;
  std::optional<double> delta_found;  // largest certified stability radius
  std::optional<int> t_found;         // entry time into the rho_a ball
  double rho_a_achieved = 0;  // sup of tail distances over all trials
  int trials = 0;
  std::uint64_t seed = 0;
  std::optional<TrajectoryRecord> escape_witness;
  std::optional<TrajectoryRecord> straggler_witness;
};

SpasReport certify_spas(const DirectionOracle &oracle,
                        const ConvexSet &feasible, const ConvexSet &attractor,
                        const LyapunovField &v, double alpha,
                        const SpasTrialParams &params, std::uint64_t seed,
                        Exec exec = Exec::Parallel);

std::vector<SpasReport> certify_spas_grid(
    const DirectionOracle &oracle, const ConvexSet &feasible,
    const ConvexSet &attractor, const LyapunovField &v,
    const std::vector<double> &alpha_grid, const SpasTrialParams &params,
    std::uint64_t seed, Exec exec = Exec::Parallel);

}  // namespace pgl

#endif
