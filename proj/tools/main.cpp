// Configuration-driven experiment runner. Subcommands expose the library
// modules; every run writes a JSON summary (plus CSV detail where it
// applies) into the output directory and prints a one-line verdict.
//
// Exit codes: 0 success, 1 verification/certification failure,
// 2 config error, 3 internal error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pgl/serialize.hpp"

namespace fs = std::filesystem;
using pgl::ordered_json;
using json = nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail(const std::string &where, const std::string &what) {
  throw ConfigError(where + ": " + what);
}

const json &need(const json &j, const std::string &key, const std::string &ctx) {
  if (!j.contains(key)) fail(ctx, "missing field '" + key + "'");
  return j.at(key);
}

double num(const json &j, const std::string &key, const std::string &ctx) {
  const json &v = need(j, key, ctx);
  if (!v.is_number()) fail(ctx + "." + key, "expected a number");
  return v.get<double>();
}

double num_or(const json &j, const std::string &key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

pgl::Vector vec(const json &j, const std::string &ctx) {
  if (!j.is_array()) fail(ctx, "expected an array of numbers");
  pgl::Vector v;
  for (const auto &x : j) v.push_back(x.get<double>());
  return v;
}

pgl::ConvexSet parse_set(const json &j, const std::string &ctx) {
  std::string kind = need(j, "kind", ctx).get<std::string>();
  if (kind == "whole-space")
    return pgl::ConvexSet::whole_space(static_cast<int>(num(j, "n", ctx)));
  if (kind == "box")
    return pgl::ConvexSet::box(vec(need(j, "lo", ctx), ctx + ".lo"),
                               vec(need(j, "hi", ctx), ctx + ".hi"));
  if (kind == "ball")
    return pgl::ConvexSet::ball(vec(need(j, "center", ctx), ctx + ".center"),
                                num(j, "radius", ctx));
  if (kind == "halfspace")
    return pgl::ConvexSet::halfspace(
        vec(need(j, "normal", ctx), ctx + ".normal"), num(j, "offset", ctx));
  if (kind == "intersection") {
    std::vector<pgl::ConvexSet> parts;
    for (const auto &p : need(j, "parts", ctx))
      parts.push_back(parse_set(p, ctx + ".parts[]"));
    return pgl::ConvexSet::intersection(std::move(parts));
  }
  fail(ctx, "unknown set kind '" + kind + "'");
}

struct Experiment {
  pgl::Problem problem;
  pgl::LyapunovField lyapunov;
  pgl::ConvexSet feasible = pgl::ConvexSet::whole_space(0);
  pgl::DirectionOracle oracle;
  json cfg;
  pgl::Exec exec = pgl::Exec::Parallel;
};

pgl::DirectionOracle build_oracle(const json &oc, const Experiment &ex) {
  std::string kind = need(oc, "kind", "oracle").get<std::string>();
  pgl::DirectionOracle base;
  if (kind == "gradient") {
    base = pgl::gradient_oracle(ex.problem.objective);
  } else if (kind == "subgradient") {
    base = pgl::subgradient_oracle(
        ex.problem.objective,
        static_cast<int>(num_or(oc, "samples_per_query", 4)));
  } else if (kind == "finite-difference") {
    base = pgl::finite_difference_oracle(ex.problem.objective,
                                         num(oc, "mu", "oracle"));
  } else if (kind == "weighted-gradient") {
    std::vector<pgl::Matrix> schedule;
    for (const auto &hj : need(oc, "schedule", "oracle")) {
      pgl::Vector d = vec(hj, "oracle.schedule[]");
      schedule.push_back(pgl::Matrix::diagonal(d));
    }
    base = pgl::weighted_gradient_oracle(ex.problem.objective, schedule);
  } else {
    fail("oracle", "unknown kind '" + kind + "'");
  }
  if (oc.contains("error")) {
    const json &e = oc.at("error");
    pgl::ErrorModel em(num_or(e, "a", 0.0), num_or(e, "r", 0.0));
    std::string law = e.value("law", "worst-case-aligned");
    if (law == "worst-case-aligned") em.law = pgl::ErrorLaw::WorstCaseAligned;
    else if (law == "random-unit") em.law = pgl::ErrorLaw::RandomUnit;
    else if (law == "fixed-vector") {
      em.law = pgl::ErrorLaw::FixedVector;
      em.fixed_direction = vec(need(e, "direction", "oracle.error"), "oracle.error.direction");
    } else fail("oracle.error.law", "unknown law '" + law + "'");
    base = pgl::perturb(base, em, ex.lyapunov.attractor, &ex.lyapunov);
  }
  return base;
}

Experiment build_experiment(const json &cfg) {
  Experiment ex;
  ex.cfg = cfg;
  const json &pj = need(cfg, "problem", "config");
  std::map<std::string, double> params;
  if (pj.contains("params"))
    for (auto it = pj.at("params").begin(); it != pj.at("params").end(); ++it)
      params[it.key()] = it.value().get<double>();
  ex.problem = pgl::builtin(need(pj, "name", "problem").get<std::string>(), params);

  std::string lkind = cfg.contains("lyapunov")
                          ? cfg.at("lyapunov").value("kind", "squared-distance")
                          : "squared-distance";
  if (lkind == "squared-distance")
    ex.lyapunov = pgl::make_lyapunov(pgl::LyapunovKind::SquaredDistance,
                                     ex.problem.minimizers);
  else if (lkind == "objective-gap")
    ex.lyapunov = pgl::make_lyapunov(pgl::LyapunovKind::ObjectiveGap,
                                     ex.problem.minimizers,
                                     &ex.problem.objective);
  else
    fail("lyapunov.kind", "unknown kind '" + lkind + "'");

  ex.feasible = cfg.contains("feasible")
                    ? parse_set(cfg.at("feasible"), "feasible")
                    : pgl::ConvexSet::whole_space(ex.problem.objective.dim);
  ex.oracle = build_oracle(need(cfg, "oracle", "config"), ex);
  return ex;
}

pgl::SpspCertificate build_certificate(const json &cj, const Experiment &ex) {
  std::string kind = need(cj, "kind", "certificate").get<std::string>();
  const pgl::ConvexSet &attr = ex.lyapunov.attractor;
  auto unwrap = [&](pgl::CertResult r) -> pgl::SpspCertificate {
    if (auto *inf = std::get_if<pgl::Infeasible>(&r))
      throw std::runtime_error("certificate infeasible: violated " + inf->violated);
    return std::get<pgl::SpspCertificate>(r);
  };
  if (kind == "linear-objective")
    return unwrap(pgl::certify_linear_objective(
        num(cj, "c", "certificate"), num_or(cj, "a", 0), num_or(cj, "r", 0),
        num(cj, "sigma", "certificate"), attr));
  if (kind == "strongly-convex")
    return unwrap(pgl::certify_strongly_convex(
        num(cj, "c", "certificate"), num_or(cj, "a", 0), num_or(cj, "r", 0), attr));
  if (kind == "convex") {
    pgl::ConvexCertifyOptions opts;
    opts.grid_resolution = num_or(cj, "grid_resolution", 0.01);
    return unwrap(pgl::certify_convex(ex.problem.objective, attr,
                                      num_or(cj, "a", 0), num_or(cj, "r", 0),
                                      num(cj, "sigma", "certificate"), opts));
  }
  // Candidate certificates for the error-free examples.
  pgl::SpspCertificate cert;
  cert.epsilon = num_or(cj, "epsilon", 0.0);
  cert.b = num_or(cj, "b", 0.0);
  cert.sigma = cj.contains("sigma") ? cj.at("sigma").get<double>()
                                    : std::numeric_limits<double>::infinity();
  cert.classification = pgl::classify(cert.sigma, cert.epsilon, cert.b);
  cert.provenance = "analytic:" + kind;
  double scale = num_or(cj, "scale", 1.0);
  if (kind == "grad-norm-squared") {
    cert.phi = [grad = ex.problem.objective.gradient, scale](const pgl::Vector &y) {
      return scale * pgl::norm_sq(grad(y));
    };
  } else if (kind == "objective-gap") {
    if (!ex.problem.objective.minimum_value)
      fail("certificate", "objective-gap needs a known minimum");
    cert.phi = [val = ex.problem.objective.value,
                jstar = *ex.problem.objective.minimum_value,
                scale](const pgl::Vector &y) { return scale * (val(y) - jstar); };
  } else if (kind == "scaled-v") {
    cert.phi = [v = ex.lyapunov.value, scale](const pgl::Vector &y) {
      return scale * v(y);
    };
  } else if (kind == "distance-squared") {
    cert.phi = [attr, scale](const pgl::Vector &y) {
      double d = pgl::distance(attr, y);
      return scale * d * d;
    };
  } else {
    fail("certificate.kind", "unknown kind '" + kind + "'");
  }
  return cert;
}

fs::path output_dir(const json &cfg) {
  std::string dir;
  if (cfg.contains("output") && cfg.at("output").contains("directory"))
    dir = cfg.at("output").at("directory").get<std::string>();
  else if (const char *env = std::getenv("PGL_OUTPUT_DIR"))
    dir = env;
  else
    dir = "out";
  fs::create_directories(dir);
  return dir;
}

void write_summary(const json &cfg, const std::string &name,
                   const ordered_json &summary) {
  fs::path p = output_dir(cfg) / (name + ".json");
  std::ofstream out(p);
  out << summary.dump(2) << "\n";
}

pgl::VerifyOptions verify_options(const json &cfg, pgl::Exec exec) {
  pgl::VerifyOptions opts;
  opts.exec = exec;
  if (cfg.contains("verify")) {
    const json &v = cfg.at("verify");
    opts.samples = static_cast<int>(num_or(v, "samples", 10000));
    opts.seed = static_cast<std::uint64_t>(num_or(v, "seed", 1));
    opts.truncation_radius = num_or(v, "truncation_radius", 0.0);
  }
  return opts;
}

int run_verify(const json &cfg, pgl::Exec exec) {
  Experiment ex = build_experiment(cfg);
  ex.exec = exec;
  pgl::SpspCertificate cert;
  try {
    cert = build_certificate(need(cfg, "certificate", "config"), ex);
  } catch (const ConfigError &) {
    throw;
  } catch (const std::exception &e) {
    std::cout << "verify: FAIL (" << e.what() << ")\n";
    return 1;
  }
  auto rep = pgl::verify(ex.oracle, ex.lyapunov, ex.feasible, cert,
                         verify_options(cfg, exec));
  ordered_json summary = pgl::to_json(rep);
  summary["certificate_class"] = pgl::to_string(cert.classification);
  write_summary(cfg, "verify", summary);
  pgl::write_verification_csv((output_dir(cfg) / "verify_witnesses.csv").string(), rep);
  std::cout << "verify: " << (rep.pass ? "PASS" : "FAIL")
            << " min_margin=" << rep.min_margin
            << " inner_margin=" << rep.inner_margin << "\n";
  if (!rep.pass)
    std::cout << "  witnesses: " << (output_dir(cfg) / "verify_witnesses.csv").string() << "\n";
  return rep.pass ? 0 : 1;
}

int run_certify(const json &cfg, pgl::Exec) {
  const json &cj = need(cfg, "certificate", "config");
  std::string kind = need(cj, "kind", "certificate").get<std::string>();
  pgl::ConvexSet attr = cfg.contains("problem")
                            ? build_experiment(cfg).problem.minimizers
                            : pgl::ConvexSet::point({0.0, 0.0});
  pgl::CertResult r;
  if (kind == "linear-objective")
    r = pgl::certify_linear_objective(num(cj, "c", "certificate"),
                                      num_or(cj, "a", 0), num_or(cj, "r", 0),
                                      num(cj, "sigma", "certificate"), attr);
  else if (kind == "strongly-convex")
    r = pgl::certify_strongly_convex(num(cj, "c", "certificate"),
                                     num_or(cj, "a", 0), num_or(cj, "r", 0), attr);
  else if (kind == "convex") {
    Experiment ex = build_experiment(cfg);
    pgl::ConvexCertifyOptions opts;
    opts.grid_resolution = num_or(cj, "grid_resolution", 0.01);
    r = pgl::certify_convex(ex.problem.objective, ex.problem.minimizers,
                            num_or(cj, "a", 0), num_or(cj, "r", 0),
                            num(cj, "sigma", "certificate"), opts);
  } else
    fail("certificate.kind", "not an analytic certificate builder: '" + kind + "'");

  ordered_json summary;
  if (auto *inf = std::get_if<pgl::Infeasible>(&r)) {
    summary["feasible"] = false;
    summary["violated"] = inf->violated;
    write_summary(cfg, "certify", summary);
    std::cout << "certify: INFEASIBLE violated inequality: " << inf->violated << "\n";
    return 1;
  }
  const auto &cert = std::get<pgl::SpspCertificate>(r);
  summary["feasible"] = true;
  summary["class"] = pgl::to_string(cert.classification);
  summary["sigma"] = std::isfinite(cert.sigma) ? json(cert.sigma) : json("inf");
  summary["epsilon"] = cert.epsilon;
  summary["b"] = cert.b;
  write_summary(cfg, "certify", summary);
  std::cout << "certify: FEASIBLE class=" << pgl::to_string(cert.classification)
            << " epsilon=" << cert.epsilon << " b=" << cert.b << "\n";
  return 0;
}

int run_budget(const json &cfg, pgl::Exec) {
  const json &bj = need(cfg, "budget", "config");
  std::string which = need(bj, "case", "budget").get<std::string>();
  pgl::StepSizeBudget budget;
  if (which == "growth")
    budget = pgl::budget_growth(num(bj, "w", "budget"), num(bj, "beta", "budget"),
                                num_or(bj, "b", 0), num(bj, "b_o", "budget"));
  else if (which == "bounded")
    budget = pgl::budget_bounded(num(bj, "w", "budget"), num(bj, "B", "budget"),
                                 num_or(bj, "b", 0), num(bj, "c", "budget"),
                                 num(bj, "sigma_o", "budget"),
                                 num_or(bj, "epsilon_o", 0),
                                 num(bj, "rho_o", "budget"), num(bj, "b_o", "budget"));
  else if (which == "lipschitz")
    budget = pgl::budget_lipschitz(
        num(bj, "w", "budget"), num(bj, "L", "budget"), num_or(bj, "s_star", 0),
        num_or(bj, "b", 0), num(bj, "c", "budget"), num(bj, "sigma_o", "budget"),
        num_or(bj, "epsilon_o", 0), num(bj, "rho_o", "budget"),
        num(bj, "b_o", "budget"));
  else
    fail("budget.case", "unknown case '" + which + "'");
  write_summary(cfg, "budget", pgl::to_json(budget));
  std::cout << "budget: alpha_max=" << budget.alpha_max << "\n";
  return 0;
}

int run_robust(const json &cfg, pgl::Exec exec) {
  Experiment ex = build_experiment(cfg);
  const json &rj = need(cfg, "robust", "config");
  double c = num(rj, "c", "robust");
  double sigma_hat = num(rj, "sigma_hat", "robust");
  double lgv = num_or(rj, "L_gradV", ex.lyapunov.lipschitz_grad.value_or(1.0));
  double b = num_or(rj, "b", 0.0);
  double eps_hat = num_or(rj, "epsilon_hat", 0.0);
  auto margins = pgl::robustness_margins(c, sigma_hat, lgv, b, eps_hat);
  double a = num_or(rj, "scale_a", 0.5) * margins.a_max;
  double r = num_or(rj, "scale_r", 0.5) * margins.r_max;

  pgl::ErrorModel em(a, r, pgl::ErrorLaw::WorstCaseAligned);
  auto perturbed = pgl::perturb(ex.oracle, em, ex.lyapunov.attractor, &ex.lyapunov);
  pgl::SpspCertificate cert;
  cert.sigma = sigma_hat;
  cert.epsilon = std::max(eps_hat, 1e-12);
  cert.b = margins.b_hat(a, r);
  cert.phi = margins.phi_hat(a, r, ex.lyapunov.attractor);
  cert.classification = pgl::classify(cert.sigma, cert.epsilon, cert.b);
  cert.provenance = "analytic:robustness";

  pgl::VerifyOptions vopts = verify_options(cfg, exec);
  vopts.truncation_radius = sigma_hat;
  auto rep = pgl::verify(perturbed, ex.lyapunov, ex.feasible, cert, vopts);
  ordered_json summary = pgl::to_json(rep);
  summary["a_max"] = margins.a_max;
  summary["r_max"] = margins.r_max;
  summary["a"] = a;
  summary["r"] = r;
  summary["b_hat"] = cert.b;
  write_summary(cfg, "robust", summary);
  std::cout << "robust: " << (rep.pass ? "PASS" : "FAIL")
            << " a=" << a << " r=" << r << " min_margin=" << rep.min_margin << "\n";
  return rep.pass ? 0 : 1;
}

int run_simulate(const json &cfg, pgl::Exec) {
  Experiment ex = build_experiment(cfg);
  const json &dj = need(cfg, "dynamics", "config");
  pgl::Vector y0 = vec(need(dj, "y0", "dynamics"), "dynamics.y0");
  double alpha = num(dj, "alpha", "dynamics");
  int horizon = static_cast<int>(num_or(dj, "horizon", 1000));
  std::uint64_t seed = static_cast<std::uint64_t>(num_or(dj, "seed", 1));
  auto traj = pgl::iterate(y0, ex.oracle, ex.feasible, alpha, horizon,
                           pgl::Selection::First, seed, &ex.lyapunov);
  pgl::write_trajectory_csv((output_dir(cfg) / "trajectory.csv").string(),
                            traj, &ex.lyapunov);
  ordered_json summary;
  summary["steps"] = traj.iterates.size() - 1;
  summary["final_dist"] = pgl::distance(ex.lyapunov.attractor, traj.iterates.back());
  summary["aborted"] = traj.aborted;
  write_summary(cfg, "simulate", summary);
  std::cout << "simulate: final_dist=" << summary["final_dist"].get<double>() << "\n";
  return traj.aborted ? 1 : 0;
}

int run_spas(const json &cfg, pgl::Exec exec) {
  Experiment ex = build_experiment(cfg);
  const json &sj = need(cfg, "spas", "config");
  const json &dj = need(cfg, "dynamics", "config");
  pgl::SpasTrialParams params;
  params.sigma = num(sj, "sigma", "spas");
  params.rho_a = num(sj, "rho_a", "spas");
  params.rho_s = num(sj, "rho_s", "spas");
  params.trials = static_cast<int>(num_or(dj, "trials", 64));
  params.horizon = static_cast<int>(num_or(dj, "horizon", 10000));
  std::uint64_t seed = static_cast<std::uint64_t>(num_or(dj, "seed", 1));
  std::vector<double> grid;
  if (dj.contains("alpha_grid"))
    for (const auto &a : dj.at("alpha_grid")) grid.push_back(a.get<double>());
  else
    grid.push_back(num(dj, "alpha", "dynamics"));
  auto reports = pgl::certify_spas_grid(ex.oracle, ex.feasible,
                                        ex.lyapunov.attractor, ex.lyapunov,
                                        grid, params, seed, exec);
  pgl::write_spas_csv((output_dir(cfg) / "spas.csv").string(), reports);
  ordered_json arr = ordered_json::array();
  bool all = true;
  for (const auto &r : reports) {
    arr.push_back(pgl::to_json(r));
    all = all && r.spas;
  }
  ordered_json summary;
  summary["all_spas"] = all;
  summary["reports"] = arr;
  write_summary(cfg, "spas", summary);
  std::cout << "spas: " << (all ? "CERTIFIED" : "NOT-CERTIFIED") << " at "
            << grid.size() << " alpha value(s)\n";
  return all ? 0 : 1;
}

int run_lemma_b(const json &cfg, pgl::Exec exec) {
  Experiment ex = build_experiment(cfg);
  const json &lj = need(cfg, "lemma_b", "config");
  pgl::ContainmentOptions copts;
  copts.grid_resolution = num_or(lj, "grid_resolution", 0.01);
  copts.exec = exec;
  auto gap = [&ex](const pgl::Vector &y) {
    return ex.problem.objective.value(y) -
           ex.problem.objective.minimum_value.value_or(0.0);
  };
  auto res = pgl::containment_level(gap, ex.lyapunov.attractor,
                                    num_or(lj, "epsilon", 0.0),
                                    num(lj, "rho", "lemma_b"),
                                    num(lj, "sigma", "lemma_b"), copts);
  ordered_json summary = pgl::to_json(res);
  if (lj.contains("K_phi") && lj.contains("sigma_hat")) {
    auto alphas = pgl::underestimation_alphas(
        res.level, num(lj, "K_phi", "lemma_b"), num(lj, "sigma_hat", "lemma_b"));
    summary["alpha_q"] = alphas.alpha_q;
    summary["alpha_l"] = alphas.alpha_l;
  }
  write_summary(cfg, "lemma_b", summary);
  std::cout << "lemma-b: level=" << res.level
            << (res.certified ? " (certified)" : " (uncertified)") << "\n";
  return res.certified ? 0 : 1;
}

// Dotted-path override: problem.params.c=2.5
void apply_override(json &cfg, const std::string &expr) {
  auto eq = expr.find('=');
  if (eq == std::string::npos) fail("--set", "expected path=value: " + expr);
  std::string path = expr.substr(0, eq);
  std::string value = expr.substr(eq + 1);
  json *node = &cfg;
  std::size_t pos = 0;
  while (true) {
    auto dotp = path.find('.', pos);
    std::string key = path.substr(pos, dotp == std::string::npos ? dotp : dotp - pos);
    if (dotp == std::string::npos) {
      (*node)[key] = json::parse(value, nullptr, false).is_discarded()
                         ? json(value)
                         : json::parse(value);
      return;
    }
    node = &(*node)[key];
    pos = dotp + 1;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"pseudogradient stability laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  int threads = 0;
  bool serial = false;

  for (const char *name : {"verify", "certify", "budget", "robust",
                           "simulate", "spas", "lemma-b"}) {
    auto *sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "config file (JSON)")->required();
    sub->add_option("--set", overrides, "override a config leaf: path=value");
    sub->add_option("--threads", threads, "worker count (0 = all cores)");
    sub->add_flag("--serial", serial, "use the serial reference kernels");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    if (!in) fail("config", "cannot open " + config_path);
    json cfg;
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error &e) {
      fail("config", e.what());
    }
    for (const auto &o : overrides) apply_override(cfg, o);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    pgl::Exec exec = serial ? pgl::Exec::Serial : pgl::Exec::Parallel;

    std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "verify") return run_verify(cfg, exec);
    if (sub == "certify") return run_certify(cfg, exec);
    if (sub == "budget") return run_budget(cfg, exec);
    if (sub == "robust") return run_robust(cfg, exec);
    if (sub == "simulate") return run_simulate(cfg, exec);
    if (sub == "spas") return run_spas(cfg, exec);
    if (sub == "lemma-b") return run_lemma_b(cfg, exec);
    return 2;
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
