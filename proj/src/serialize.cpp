#include "pgl/serialize.hpp"

#include <fstream>

namespace pgl {

namespace {

ordered_json vec_json(const Vector &v) {
  ordered_json j = ordered_json::array();
  for (double x : v) j.push_back(x);
  return j;
}

ordered_json witnesses_json(const std::vector<Witness> &ws) {
  ordered_json arr = ordered_json::array();
  for (const auto &w : ws) {
    ordered_json j;
    j["y"] = vec_json(w.point);
    j["s"] = vec_json(w.direction);
    j["margin"] = w.margin;
    arr.push_back(j);
  }
  return arr;
}

void csv_vector_header(std::ofstream &out, const char *prefix, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out << "," << prefix << i;
}

void csv_vector_row(std::ofstream &out, const Vector &v) {
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, ",%.17g", x);
    out << buf;
  }
}

std::ofstream open_or_throw(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace

ordered_json to_json(const VerificationReport &rep) {
  ordered_json j;
  j["pass"] = rep.pass;
  j["samples"] = rep.band_samples;
  j["min_margin"] = rep.min_margin;
  j["inner_margin"] = rep.inner_margin;
  j["min_phi"] = rep.min_phi;
  j["witnesses"] = witnesses_json(rep.witnesses);
  j["seed"] = rep.seed;
  j["truncation_radius"] = rep.truncation_radius;
  return j;
}

ordered_json to_json(const StepSizeBudget &budget) {
  ordered_json j;
  j["alpha_max"] = budget.alpha_max;
  j["components"] = ordered_json(budget.components);
  j["params"] = ordered_json(budget.params);
  return j;
}

ordered_json to_json(const ContainmentResult &res) {
  ordered_json j;
  j["level"] = res.level;
  j["l1"] = res.l1;
  j["l2"] = res.l2;
  j["grid_resolution"] = res.grid_resolution;
  j["certified"] = res.certified;
  if (res.violator) j["violator"] = vec_json(*res.violator);
  return j;
}

ordered_json to_json(const SpasReport &rep) {
  ordered_json j;
  j["alpha"] = rep.alpha;
  j["stable"] = rep.stable;
  j["attractive"] = rep.attractive;
  j["spas"] = rep.spas;
  if (rep.delta_found) j["delta"] = *rep.delta_found;
  if (rep.t_found) j["T"] = *rep.t_found;
  j["rho_a_achieved"] = rep.rho_a_achieved;
  j["trials"] = rep.trials;
  j["seed"] = rep.seed;
  return j;
}

ordered_json to_json(const SpasConditionsReport &rep) {
  ordered_json j;
  j["p1"] = rep.p1;
  j["p2"] = rep.p2;
  j["p3"] = rep.p3;
  j["w_min"] = rep.w_min;
  j["p2_margin"] = rep.p2_margin;
  j["p3_margin"] = rep.p3_margin;
  if (rep.p1_witness) j["p1_witness"] = vec_json(*rep.p1_witness);
  if (rep.p2_witness) j["p2_witness"] = vec_json(*rep.p2_witness);
  if (rep.p3_witness) j["p3_witness"] = vec_json(*rep.p3_witness);
  j["samples"] = rep.samples;
  j["seed"] = rep.seed;
  return j;
}

ordered_json to_json(const PolyakReport &rep) {
  ordered_json j;
  j["class"] = to_string(rep.cls);
  j["tau_hat"] = rep.tau_hat;
  j["min_inner_product"] = rep.min_inner_product;
  j["samples"] = rep.samples;
  j["seed"] = rep.seed;
  return j;
}

void write_trajectory_csv(const std::string &path, const TrajectoryRecord &traj,
                          const LyapunovField *v) {
  auto out = open_or_throw(path);
  std::size_t n = traj.iterates.empty() ? 0 : traj.iterates.front().size();
  out << "t";
  csv_vector_header(out, "y", n);
  out << ",V,dV,dist,margin\n";
  char buf[160];
  for (std::size_t t = 0; t < traj.iterates.size(); ++t) {
    out << t;
    csv_vector_row(out, traj.iterates[t]);
    if (v && t < traj.steps.size()) {
      const auto &d = traj.steps[t];
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g", d.v, d.dv,
                    d.dist, d.descent_rhs - d.dv);
      out << buf;
    } else {
      out << ",,,,";
    }
    out << "\n";
  }
}

void write_verification_csv(const std::string &path,
                            const VerificationReport &rep) {
  auto out = open_or_throw(path);
  std::size_t n =
      rep.witnesses.empty() ? 0 : rep.witnesses.front().point.size();
  out << "sample";
  csv_vector_header(out, "y", n);
  csv_vector_header(out, "s", n);
  out << ",margin\n";
  char buf[32];
  for (std::size_t i = 0; i < rep.witnesses.size(); ++i) {
    out << i;
    csv_vector_row(out, rep.witnesses[i].point);
    csv_vector_row(out, rep.witnesses[i].direction);
    std::snprintf(buf, sizeof buf, ",%.17g", rep.witnesses[i].margin);
    out << buf << "\n";
  }
}

void write_spas_csv(const std::string &path,
                    const std::vector<SpasReport> &reports) {
  auto out = open_or_throw(path);
  out << "alpha,stable,attractive,spas,delta,T,rho_a_achieved,trials,seed\n";
  char buf[64];
  for (const auto &r : reports) {
    std::snprintf(buf, sizeof buf, "%.17g", r.alpha);
    out << buf << "," << r.stable << "," << r.attractive << "," << r.spas << ",";
    if (r.delta_found) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.delta_found);
      out << buf;
    }
    out << ",";
    if (r.t_found) out << *r.t_found;
    std::snprintf(buf, sizeof buf, ",%.17g,", r.rho_a_achieved);
    out << buf << r.trials << "," << r.seed << "\n";
  }
}

void write_text_file(const std::string &path, const std::string &content) {
  auto out = open_or_throw(path);
  out << content;
}

}  // namespace pgl
