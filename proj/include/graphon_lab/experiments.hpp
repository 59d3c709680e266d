#pragma once

// Monte Carlo studies: scaling-exponent fits, concentration, coupling and
// partition inequalities, interval statistics and moment cross-checks.
// Every trial draws from mix64(master, n, trial) and results are reduced by
// (n, trial) index, so output does not depend on the worker count.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "graphon_lab/clique.hpp"
#include "graphon_lab/graphon.hpp"
#include "graphon_lab/moments.hpp"
#include "graphon_lab/sampler.hpp"

namespace graphon_lab {

// Runs body(i) for i in [0, count) on up to `jobs` threads. The first
// exception thrown (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& body);

// GRAPHON_LAB_JOBS if set and positive, else hardware concurrency (>= 1).
unsigned default_jobs();

enum class StudyMethod { exact, threshold_greedy, best_of, degree_greedy };

std::string to_string(StudyMethod method);
StudyMethod parse_study_method(const std::string& text);

struct PowerFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double stderr_exponent = 0.0;
};

// Unweighted OLS of ln y on ln x. Needs >= 2 points with x, y > 0.
PowerFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

struct StudyOptions {
  StudyMethod method = StudyMethod::threshold_greedy;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  SolveBudget budget{};
  // Overrides default_threshold when set.
  std::optional<double> threshold;
  double center = 0.0;
  std::size_t max_vertices = kDefaultMaxVertices;
  // Largest n accepted by the exact method.
  std::size_t exact_max_n = 1024;
  // Also run degree-greedy on full samples and compare max(threshold,
  // degree) with the first-moment cutoff (rank-1 specs only).
  bool markov_check = false;
};

struct TrialRecord {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string method;
  std::size_t clique_size = 0;
  double elapsed_ms = 0.0;
  bool conclusive = true;
  // max(threshold-greedy, degree-greedy) when markov_check ran.
  std::optional<std::size_t> best_of_size;
};

struct PerNStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;
  std::size_t min = 0;
  std::size_t max = 0;
  std::size_t trials = 0;      // conclusive trials used in the statistics
  std::size_t inconclusive = 0;
  std::string method;
  std::optional<std::uint64_t> cutoff;  // first-moment cutoff when checked
};

struct ScalingReport {
  std::string spec_tag;
  std::vector<std::size_t> n_grid;
  std::vector<PerNStats> per_n;
  StudyMethod method = StudyMethod::threshold_greedy;
  std::uint64_t seed = 0;
  double fitted_exponent = 0.0;
  double exponent_stderr = 0.0;
  double empirical_constant = 0.0;
  // False when some n has fewer than 80% conclusive trials; the fit then
  // uses only the n values that qualify (NaN with fewer than two).
  bool fit_valid = true;
  std::optional<PredictedConstants> predicted;
  std::size_t markov_violations = 0;
  std::size_t markov_checked = 0;
  std::vector<TrialRecord> records;
};

ScalingReport scaling_study(const GraphonSpec& spec,
                            const std::vector<std::size_t>& n_grid,
                            const StudyOptions& options);

struct ConcentrationReport {
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean = 0.0;
  double coefficient_of_variation = 0.0;
  double max_over_min = 0.0;
  std::size_t min = 0;
  std::size_t max = 0;
  std::size_t inconclusive = 0;
  std::vector<TrialRecord> records;
};

ConcentrationReport concentration_check(const GraphonSpec& spec, std::size_t n,
                                        const StudyOptions& options);

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::size_t inconclusive = 0;
  // Suite-specific figures, in insertion order.
  std::vector<std::pair<std::string, double>> stats;
  std::vector<std::string> messages;
};

struct SuiteOptions {
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  SolveBudget budget{};
};

// Coupled samples; every trial must satisfy lower ⊆ upper edge-wise and
// ω(lower) <= ω(upper). Throws PreconditionError without certified dominance.
SuiteResult dominance_suite(const GraphonSpec& lower, const GraphonSpec& upper,
                            std::size_t n, const SuiteOptions& options);

// max_i ω(part_i) <= ω(G) <= Σ_i ω(part_i) with parts cut at the coordinates
// in `cut_points` (strictly increasing, inside (0,1)).
SuiteResult partition_suite(const GraphonSpec& spec, std::size_t n,
                            const std::vector<double>& cut_points,
                            const SuiteOptions& options);

struct IntervalSuiteOptions {
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t count_n = 100'000;
  double lambda = 0.01;
  double count_tolerance = 0.1;
  std::size_t window_n = 10'000;
  double delta = 0.05;
  double required_rate = 0.99;
};

SuiteResult interval_suite(const IntervalSuiteOptions& options);

struct MomentCheck {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t trials = 0;
  double empirical_mean = 0.0;
  double empirical_std = 0.0;
  double analytic_value = 0.0;
  // 0 when both the sample spread and the deviation vanish.
  double z_score = 0.0;
};

// Exact k-clique counts (n <= 16) averaged over trials, against E[X_k].
MomentCheck moment_mc_check(const GraphonSpec& spec, std::size_t n, std::size_t k,
                            std::size_t trials, std::uint64_t seed, unsigned jobs = 1);

// Number of k-cliques, by exhaustive extension over vertex bitmasks.
std::uint64_t count_k_cliques(const SampledGraph& graph, std::size_t k);

// Clique numbers must stay below 3 δ n with δ = ln n / sqrt(n). Uses the
// exact solver when it finishes and the coloring bound otherwise; both are
// upper bounds on ω when the solver is cut short.
SuiteResult union_bound_upper_check(const GraphonSpec& spec,
                                    const std::vector<std::size_t>& n_grid,
                                    const SuiteOptions& options);

// Writes `<dir>/trials.csv` and `<dir>/summary.json` under
// `<root>/run-<UTC timestamp>-seed<seed>`; returns the run directory.
std::string write_scaling_run(const ScalingReport& report, const std::string& root);

}  // namespace graphon_lab
