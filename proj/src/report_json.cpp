#include "graphon_lab/report_json.hpp"

#include <cmath>

#include "graphon_lab/version.hpp"

namespace graphon_lab {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json provenance(const std::string& spec_tag, std::uint64_t seed) {
  return json{{"schema_version", kSchemaVersion},
              {"version", kVersion},
              {"spec", spec_tag},
              {"seed", seed}};
}

json to_json(const CliqueResult& r) {
  json j{{"size", r.size},
         {"vertices", r.vertices},
         {"method", to_string(r.method)},
         {"status", to_string(r.status)},
         {"nodes", r.stats.nodes},
         {"missing_edges_deleted", r.stats.missing_edges_deleted},
         {"elapsed_ms", number(r.stats.elapsed_ms)}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

json to_json(const MomentReport& r) {
  return json{{"n", r.n},
              {"k", r.k},
              {"log_expected", number(r.log_expected)},
              {"family_tag", r.family_tag},
              {"method", to_string(r.method)}};
}

json to_json(const CutoffResult& r) {
  json cert = json::array();
  for (double v : r.certificate) cert.push_back(number(v));
  return json{{"n", r.n},
              {"k_star", r.k_star},
              {"degenerate", r.degenerate},
              {"certificate_first_k", r.certificate_first_k},
              {"certificate", cert}};
}

json to_json(const VarianceReport& r) {
  json terms = json::array();
  for (double v : r.per_i_terms) terms.push_back(number(v));
  return json{{"n", r.n}, {"k", r.k}, {"log_ratio", number(r.log_ratio)}, {"per_i_terms", terms}};
}

json to_json(const ScalingReport& r) {
  json per_n = json::array();
  for (const auto& s : r.per_n) {
    json row{{"n", s.n},
             {"mean", number(s.mean)},
             {"std", number(s.std)},
             {"min", s.min},
             {"max", s.max},
             {"trials", s.trials},
             {"inconclusive", s.inconclusive},
             {"method", s.method}};
    if (s.cutoff) row["first_moment_cutoff"] = *s.cutoff;
    per_n.push_back(row);
  }
  std::size_t trials = r.per_n.empty() ? 0 : r.per_n.front().trials + r.per_n.front().inconclusive;
  json j = provenance(r.spec_tag, r.seed);
  j.update(json{{"n_grid", r.n_grid},
                {"exponent", number(r.fitted_exponent)},
                {"stderr", number(r.exponent_stderr)},
                {"empirical_constant", number(r.empirical_constant)},
                {"predicted_upper", r.predicted ? number(r.predicted->upper_constant) : json(nullptr)},
                {"predicted_lower", r.predicted ? number(r.predicted->lower_constant) : json(nullptr)},
                {"predicted_exponent", r.predicted ? number(r.predicted->exponent) : json(nullptr)},
                {"trials", trials},
                {"method", to_string(r.method)},
                {"fit_valid", r.fit_valid},
                {"markov_checked", r.markov_checked},
                {"markov_violations", r.markov_violations},
                {"per_n", per_n}});
  return j;
}

json to_json(const ConcentrationReport& r) {
  return json{{"n", r.n},
              {"trials", r.trials},
              {"inconclusive", r.inconclusive},
              {"mean", number(r.mean)},
              {"coefficient_of_variation", number(r.coefficient_of_variation)},
              {"max_over_min", number(r.max_over_min)},
              {"min", r.min},
              {"max", r.max}};
}

json to_json(const SuiteResult& r) {
  json stats = json::object();
  for (const auto& [k, v] : r.stats) stats[k] = number(v);
  return json{{"suite", r.name},
              {"passed", r.passed},
              {"trials", r.trials},
              {"violations", r.violations},
              {"inconclusive", r.inconclusive},
              {"stats", stats},
              {"messages", r.messages}};
}

json to_json(const MomentCheck& c) {
  return json{{"n", c.n},
              {"k", c.k},
              {"trials", c.trials},
              {"empirical_mean", number(c.empirical_mean)},
              {"empirical_std", number(c.empirical_std)},
              {"analytic_value", number(c.analytic_value)},
              {"z_score", number(c.z_score)}};
}

}  // namespace graphon_lab
