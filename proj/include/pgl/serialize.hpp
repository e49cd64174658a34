#ifndef PGL_SERIALIZE_HPP
#define PGL_SERIALIZE_HPP

#include <nlohmann/json.hpp>

#include "pgl/dynamics.hpp"
#include "pgl/lemmas.hpp"

namespace pgl {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const VerificationReport &rep);
ordered_json to_json(const StepSizeBudget &budget);
ordered_json to_json(const ContainmentResult &res);
ordered_json to_json(const SpasReport &rep);
ordered_json to_json(const SpasConditionsReport &rep);
ordered_json to_json(const PolyakReport &rep);

// CSV schemas: trajectory (t, y..., V, dV, dist, margin), verification
// (sample, y..., s..., margin), spas (trial-level summary rows).
void write_trajectory_csv(const std::string &path, const TrajectoryRecord &traj,
                          const LyapunovField *v);
void write_verification_csv(const std::string &path,
                            const VerificationReport &rep);
void write_spas_csv(const std::string &path,
                    const std::vector<SpasReport> &reports);

void write_text_file(const std::string &path, const std::string &content);

}  // namespace pgl

#endif
