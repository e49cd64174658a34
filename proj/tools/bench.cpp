// Serial-vs-parallel benchmark for the data-parallel kernels. Each kernel
// runs under both execution policies on the same seeds; besides the timing
// ratio we assert that the results are identical, since the parallel path
// must reproduce the serial reference exactly.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "pgl/dynamics.hpp"
#include "pgl/lemmas.hpp"

using namespace pgl;

namespace {

double time_ms(const std::function<void()> &fn, int reps) {
  // one warm-up, then best of reps
  fn();
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char *name, double serial_ms, double parallel_ms, bool match) {
  std::printf("%-22s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              match ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char **argv) {
  int samples = 200000;
  int reps = 3;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--samples") == 0 && i + 1 < argc)
      samples = std::atoi(argv[++i]);
    else if (std::strcmp(argv[i], "--reps") == 0 && i + 1 < argc)
      reps = std::atoi(argv[++i]);
  }

  std::printf("threads: %d, samples: %d, reps: %d (best-of)\n\n",
              num_threads(), samples, reps);

  Problem prob = builtin("strongly-convex-quadratic", {{"n", 4}, {"c", 2.0}});
  LyapunovField v = make_lyapunov(LyapunovKind::SquaredDistance, prob.minimizers);
  ConvexSet feasible = ConvexSet::whole_space(4);
  DirectionOracle oracle = gradient_oracle(prob.objective);

  // band sampling
  std::vector<Vector> ser, par;
  double t_s = time_ms([&] {
    ser = sample_annulus(prob.minimizers, 0.5, 5.0, feasible, samples, 42, Exec::Serial);
  }, reps);
  double t_p = time_ms([&] {
    par = sample_annulus(prob.minimizers, 0.5, 5.0, feasible, samples, 42, Exec::Parallel);
  }, reps);
  report("sample_annulus", t_s, t_p, ser == par);

  // certificate verification
  auto cert = std::get<SpspCertificate>(
      certify_strongly_convex(2.0, 0.05, 0.05, prob.minimizers));
  VerifyOptions vo;
  vo.samples = samples;
  vo.truncation_radius = 5.0;
  VerificationReport rep_s, rep_p;
  vo.exec = Exec::Serial;
  t_s = time_ms([&] { rep_s = verify(oracle, v, feasible, cert, vo); }, reps);
  vo.exec = Exec::Parallel;
  t_p = time_ms([&] { rep_p = verify(oracle, v, feasible, cert, vo); }, reps);
  report("verify", t_s, t_p,
         rep_s.min_margin == rep_p.min_margin &&
             rep_s.inner_margin == rep_p.inner_margin &&
             rep_s.pass == rep_p.pass);

  // containment grid sweep (2-d, fine resolution)
  Problem prob2 = builtin("quadratic", {{"n", 2}});
  auto gap = [&prob2](const Vector &y) { return prob2.objective.value(y); };
  ContainmentOptions co;
  co.grid_resolution = 0.002;
  ContainmentResult con_s, con_p;
  co.exec = Exec::Serial;
  t_s = time_ms([&] {
    con_s = containment_level(gap, prob2.minimizers, 0.0, 1.0, 3.0, co);
  }, reps);
  co.exec = Exec::Parallel;
  t_p = time_ms([&] {
    con_p = containment_level(gap, prob2.minimizers, 0.0, 1.0, 3.0, co);
  }, reps);
  report("containment_level", t_s, t_p,
         con_s.level == con_p.level && con_s.l1 == con_p.l1 &&
             con_s.l2 == con_p.l2);

  // one-step Lyapunov condition check
  SpasConditionsParams sp;
  sp.sigma_o = 5.0;
  sp.epsilon_o = 0.1;
  sp.rho_o = 0.4;
  sp.alpha = 0.1;
  sp.b_o = 1e-3;
  sp.samples = samples;
  auto w_fn = [&](const Vector &y) {
    double gs = 4.0 * v.value(y);  // gradV.s = 2||y||^2 for this oracle
    return sp.alpha * gs - sp.alpha * sp.alpha * 0.5 * (2.0 * gs);
  };
  SpasConditionsReport sc_s, sc_p;
  sp.exec = Exec::Serial;
  t_s = time_ms([&] { sc_s = check_spas_conditions(v, oracle, feasible, sp, w_fn); }, reps);
  sp.exec = Exec::Parallel;
  t_p = time_ms([&] { sc_p = check_spas_conditions(v, oracle, feasible, sp, w_fn); }, reps);
  report("spas_conditions", t_s, t_p,
         sc_s.w_min == sc_p.w_min && sc_s.p2_margin == sc_p.p2_margin &&
             sc_s.p3_margin == sc_p.p3_margin);

  return 0;
}
