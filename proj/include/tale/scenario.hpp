#ifndef TALE_SCENARIO_HPP
#define TALE_SCENARIO_HPP

#include <memory>

#include "tale/asymptotics.hpp"
#include "tale/models.hpp"
#include "tale/report.hpp"
#include "tale/toml.hpp"

namespace tale {

// Decay profile from a TOML table: form = "power" | "power-shifted" |
// "log-squared" | "constant", with `exponent` or `value`.
DecayProfile profile_from_table(const toml::Table& t);

struct RunOptions {
  uint64_t seed = 7;
  bool with_timestamp = true;
  std::string out_dir;  // empty: no files written
  double tol = 1e-9;
};

// Point on the standard outgoing ray of a model at radial coordinate r.
Vec standard_ray_point(const MetricModel& model, double r);

std::shared_ptr<MetricModel> model_from_table(const toml::Table& cfg);

// Task runners; each returns a JSON report with a "pass" field and writes
// side files (CSV traces) under out_dir when set.
Json run_curvature_decay(const toml::Table& cfg, const RunOptions& opt);
Json run_loops(const toml::Table& cfg, const RunOptions& opt);
Json run_slide(const toml::Table& cfg, const RunOptions& opt);
Json run_short_basis(const toml::Table& cfg, const RunOptions& opt);
Json run_tangent_cone(const toml::Table& cfg, const RunOptions& opt);
Json run_hitchin_thorpe(const toml::Table& cfg, const RunOptions& opt);

// verify-all: the built-in verification catalog, or the [[scenario]] list of
// the supplied config (an empty list produces an empty passing report).
Json run_verify_all(const toml::Table* cfg, const RunOptions& opt);

Json run_task(const std::string& kind, const toml::Table& cfg, const RunOptions& opt);

bool report_passed(const Json& j);

}  // namespace tale

#endif
