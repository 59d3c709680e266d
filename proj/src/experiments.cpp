#include "graphon_lab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "graphon_lab/errors.hpp"
#include "graphon_lab/format.hpp"
#include "graphon_lab/report_json.hpp"
#include "graphon_lab/rng.hpp"

namespace graphon_lab {

void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), count));
  std::vector<std::exception_ptr> errors(count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
          failed.store(true);
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

unsigned default_jobs() {
  if (const char* env = std::getenv("GRAPHON_LAB_JOBS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string to_string(StudyMethod method) {
  switch (method) {
    case StudyMethod::exact: return "exact";
    case StudyMethod::threshold_greedy: return "threshold_greedy";
    case StudyMethod::best_of: return "best_of";
    case StudyMethod::degree_greedy: return "degree_greedy";
  }
  return "exact";
}

StudyMethod parse_study_method(const std::string& text) {
  if (text == "exact") return StudyMethod::exact;
  if (text == "threshold_greedy" || text == "threshold") return StudyMethod::threshold_greedy;
  if (text == "best_of") return StudyMethod::best_of;
  if (text == "degree_greedy" || text == "degree") return StudyMethod::degree_greedy;
  throw ParseError("unknown method '" + text +
                   "' (expected exact, threshold_greedy, best_of, degree_greedy)");
}

PowerFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ParameterError("fit: x and y lengths differ");
  if (xs.size() < 2) throw ParameterError("fit: need at least two points");
  const std::size_t m = xs.size();
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw DomainError("fit: log-log regression needs positive data");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit: x values must not all coincide");
  PowerFit fit;
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  if (m > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double r = ly[i] - fit.log_prefactor - fit.exponent * lx[i];
      rss += r * r;
    }
    fit.stderr_exponent = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
  }
  return fit;
}

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Sample {
  double mean = 0.0, std = 0.0;
  std::size_t min = 0, max = 0, count = 0;
};

Sample summarize(const std::vector<std::size_t>& values) {
  Sample s;
  s.count = values.size();
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (auto v : values) sum += static_cast<double>(v);
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (auto v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::optional<std::uint64_t> cutoff_if_supported(const GraphonSpec& spec, std::size_t n) {
  try {
    moment_method(spec);
  } catch (const UnsupportedSpecError&) {
    return std::nullopt;
  }
  return first_moment_cutoff(spec, n).k_star;
}

void validate_grid(const std::vector<std::size_t>& n_grid) {
  if (n_grid.size() < 3) throw ParameterError("n_grid needs at least 3 entries");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw ParameterError("n_grid entries must be >= 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw ParameterError("n_grid must be strictly increasing");
  }
}

void validate_method(const GraphonSpec& spec, std::size_t n, const StudyOptions& o) {
  switch (o.method) {
    case StudyMethod::exact:
      if (n > o.exact_max_n)
        throw CapacityError("exact method limited to n <= " + std::to_string(o.exact_max_n) +
                            " (got n=" + std::to_string(n) + ")");
      [[fallthrough]];
    case StudyMethod::degree_greedy:
    case StudyMethod::best_of:
      if (n > o.max_vertices)
        throw CapacityError("method " + to_string(o.method) + " needs a full sample; n=" +
                            std::to_string(n) + " exceeds the vertex cap " +
                            std::to_string(o.max_vertices));
      break;
    case StudyMethod::threshold_greedy:
      if (!o.threshold) default_threshold(spec, n);  // throws when unsupported
      break;
  }
}

TrialRecord run_trial(const GraphonSpec& spec, std::size_t n, std::size_t trial,
                      const StudyOptions& o) {
  TrialRecord rec;
  rec.n = n;
  rec.trial = trial;
  rec.seed = mix64(o.seed, n, trial);
  rec.method = to_string(o.method);
  const auto start = Clock::now();

  SampleConfig config{spec, n, rec.seed, FullMode{}, o.max_vertices};
  ThresholdChoice window{o.center, 0.0};
  const bool uses_window =
      o.method == StudyMethod::threshold_greedy || o.method == StudyMethod::best_of;
  if (uses_window)
    window = o.threshold ? ThresholdChoice{o.center, *o.threshold} : default_threshold(spec, n);
  const bool thinned = o.method == StudyMethod::threshold_greedy && n > o.max_vertices;
  if (thinned) config.mode = BelowThreshold{window.threshold, window.center};
  const SampledGraph graph = sample_graph(config);

  switch (o.method) {
    case StudyMethod::exact: {
      CliqueResult r = exact_max_clique(graph, o.budget);
      rec.clique_size = r.size;
      rec.conclusive = r.status == SolveStatus::optimal;
      break;
    }
    case StudyMethod::degree_greedy:
      rec.clique_size = degree_greedy_clique(graph).size;
      break;
    case StudyMethod::threshold_greedy: {
      rec.clique_size = threshold_greedy_clique(graph, window.center, window.threshold).size;
      if (o.markov_check && !thinned)
        rec.best_of_size = std::max(rec.clique_size, degree_greedy_clique(graph).size);
      break;
    }
    case StudyMethod::best_of: {
      std::size_t t = threshold_greedy_clique(graph, window.center, window.threshold).size;
      rec.clique_size = std::max(t, degree_greedy_clique(graph).size);
      rec.best_of_size = rec.clique_size;
      break;
    }
  }
  rec.elapsed_ms = millis_since(start);
  return rec;
}

std::vector<TrialRecord> run_trials(const GraphonSpec& spec, std::size_t n,
                                    const StudyOptions& o) {
  std::vector<TrialRecord> out(o.trials);
  parallel_for(o.trials, o.jobs, [&](std::size_t t) { out[t] = run_trial(spec, n, t, o); });
  return out;
}

}  // namespace

ScalingReport scaling_study(const GraphonSpec& spec, const std::vector<std::size_t>& n_grid,
                            const StudyOptions& options) {
  validate_grid(n_grid);
  if (options.trials < 1) throw ParameterError("trials must be >= 1");
  for (std::size_t n : n_grid) validate_method(spec, n, options);

  ScalingReport report;
  report.spec_tag = spec.to_string();
  report.n_grid = n_grid;
  report.method = options.method;
  report.seed = options.seed;
  try {
    report.predicted = predicted_constants(spec);
  } catch (const UnsupportedSpecError&) {
  }

  const bool check_cutoff = options.markov_check || options.method == StudyMethod::best_of;
  std::vector<double> fit_x, fit_y;
  for (std::size_t n : n_grid) {
    std::vector<TrialRecord> records = run_trials(spec, n, options);
    PerNStats stats;
    stats.n = n;
    stats.method = to_string(options.method);
    if (check_cutoff) stats.cutoff = cutoff_if_supported(spec, n);

    std::vector<std::size_t> sizes;
    for (const auto& r : records) {
      if (r.conclusive)
        sizes.push_back(r.clique_size);
      else
        ++stats.inconclusive;
      if (stats.cutoff && r.best_of_size) {
        ++report.markov_checked;
        if (*r.best_of_size > *stats.cutoff) ++report.markov_violations;
      }
    }
    Sample s = summarize(sizes);
    stats.mean = s.mean;
    stats.std = s.std;
    stats.min = s.min;
    stats.max = s.max;
    stats.trials = s.count;
    report.per_n.push_back(stats);

    const bool enough = 5 * s.count >= 4 * options.trials;
    if (!enough) report.fit_valid = false;
    if (enough && s.mean > 0.0) {
      fit_x.push_back(static_cast<double>(n));
      fit_y.push_back(s.mean);
    }
    report.records.insert(report.records.end(), records.begin(), records.end());
  }

  if (fit_x.size() >= 2) {
    PowerFit fit = fit_power_law(fit_x, fit_y);
    report.fitted_exponent = fit.exponent;
    report.exponent_stderr = fit.stderr_exponent;
    report.empirical_constant = fit_y.back() / std::pow(fit_x.back(), fit.exponent);
  } else {
    report.fit_valid = false;
    report.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    report.exponent_stderr = std::numeric_limits<double>::quiet_NaN();
    report.empirical_constant = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

ConcentrationReport concentration_check(const GraphonSpec& spec, std::size_t n,
                                        const StudyOptions& options) {
  if (options.trials < 10) throw ParameterError("concentration check needs trials >= 10");
  validate_method(spec, n, options);
  ConcentrationReport report;
  report.n = n;
  report.records = run_trials(spec, n, options);
  std::vector<std::size_t> sizes;
  for (const auto& r : report.records) {
    if (r.conclusive)
      sizes.push_back(r.clique_size);
    else
      ++report.inconclusive;
  }
  if (sizes.size() < 2)
    throw PreconditionError("concentration check: fewer than 2 conclusive trials");
  Sample s = summarize(sizes);
  report.trials = s.count;
  report.mean = s.mean;
  report.min = s.min;
  report.max = s.max;
  report.coefficient_of_variation = s.mean > 0.0 ? s.std / s.mean : 0.0;
  report.max_over_min = s.min > 0 ? static_cast<double>(s.max) / static_cast<double>(s.min)
                                  : std::numeric_limits<double>::infinity();
  return report;
}

namespace {

bool enough_conclusive(std::size_t trials, std::size_t inconclusive) {
  return 5 * (trials - inconclusive) >= 4 * trials;
}

}  // namespace

SuiteResult dominance_suite(const GraphonSpec& lower, const GraphonSpec& upper,
                            std::size_t n, const SuiteOptions& options) {
  if (!dominated_on_grid(lower, upper))
    throw PreconditionError("dominance not certified: '" + lower.to_string() +
                            "' exceeds '" + upper.to_string() + "' somewhere on the grid");
  struct Outcome {
    bool subgraph = true, conclusive = true, ordered = true;
    std::size_t lower_omega = 0, upper_omega = 0;
  };
  std::vector<Outcome> outcomes(options.trials);
  parallel_for(options.trials, options.jobs, [&](std::size_t t) {
    CoupledPair pair = sample_coupled(lower, upper, n, mix64(options.seed, n, t));
    Outcome& o = outcomes[t];
    o.subgraph = is_subgraph(pair.lower, pair.upper);
    CliqueResult a = exact_max_clique(pair.lower, options.budget);
    CliqueResult b = exact_max_clique(pair.upper, options.budget);
    o.lower_omega = a.size;
    o.upper_omega = b.size;
    o.conclusive = a.status == SolveStatus::optimal && b.status == SolveStatus::optimal;
    // A budget-limited upper result is only a lower bound, so an inversion
    // there proves nothing.
    o.ordered = !o.conclusive || a.size <= b.size;
  });

  SuiteResult result;
  result.name = "dominance";
  result.trials = options.trials;
  double sum_lower = 0.0, sum_upper = 0.0;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const Outcome& o = outcomes[t];
    if (!o.subgraph) {
      ++result.violations;
      result.messages.push_back("trial " + std::to_string(t) + ": lower graph is not a subgraph");
    }
    if (!o.ordered) {
      ++result.violations;
      result.messages.push_back("trial " + std::to_string(t) + ": omega(lower)=" +
                                std::to_string(o.lower_omega) + " > omega(upper)=" +
                                std::to_string(o.upper_omega));
    }
    if (!o.conclusive) ++result.inconclusive;
    sum_lower += o.lower_omega;
    sum_upper += o.upper_omega;
  }
  const double trials = std::max<std::size_t>(1, options.trials);
  result.stats = {{"mean_omega_lower", sum_lower / trials},
                  {"mean_omega_upper", sum_upper / trials}};
  result.passed = result.violations == 0 && options.trials > 0 &&
                  enough_conclusive(options.trials, result.inconclusive);
  return result;
}

SuiteResult partition_suite(const GraphonSpec& spec, std::size_t n,
                            const std::vector<double>& cut_points,
                            const SuiteOptions& options) {
  for (std::size_t i = 0; i < cut_points.size(); ++i) {
    if (!(cut_points[i] > 0.0 && cut_points[i] < 1.0))
      throw DomainError("cut points must lie strictly inside (0,1)");
    if (i > 0 && cut_points[i] <= cut_points[i - 1])
      throw ParameterError("cut points must be strictly increasing");
  }
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), cut_points.begin(), cut_points.end());
  edges.push_back(1.0);
  const std::size_t parts = edges.size() - 1;

  struct Outcome {
    bool conclusive = true, lower_ok = true, upper_ok = true;
    std::size_t whole = 0, max_part = 0, sum_parts = 0;
  };
  std::vector<Outcome> outcomes(options.trials);
  parallel_for(options.trials, options.jobs, [&](std::size_t t) {
    SampledGraph g = sample(SampleConfig{spec, n, mix64(options.seed, n, t)});
    Outcome& o = outcomes[t];
    CliqueResult whole = exact_max_clique(g, options.budget);
    o.whole = whole.size;
    o.conclusive = whole.status == SolveStatus::optimal;
    for (std::size_t p = 0; p < parts; ++p) {
      Interval window(edges[p], edges[p + 1]);
      std::vector<std::size_t> members;
      for (std::size_t v = 0; v < g.n(); ++v) {
        double x = g.coords()[v];
        bool last = p + 1 == parts;
        if (x >= window.lo() && (x < window.hi() || (last && x <= window.hi())))
          members.push_back(v);
      }
      CliqueResult r = exact_max_clique(g.induced(members), options.budget);
      if (r.status != SolveStatus::optimal) o.conclusive = false;
      o.max_part = std::max(o.max_part, r.size);
      o.sum_parts += r.size;
    }
    if (o.conclusive) {
      o.lower_ok = o.max_part <= o.whole;
      o.upper_ok = o.whole <= o.sum_parts;
    }
  });

  SuiteResult result;
  result.name = "partition";
  result.trials = options.trials;
  std::size_t tight_lower = 0, tight_upper = 0;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const Outcome& o = outcomes[t];
    if (!o.conclusive) {
      ++result.inconclusive;
      continue;
    }
    if (!o.lower_ok || !o.upper_ok) {
      ++result.violations;
      result.messages.push_back("trial " + std::to_string(t) + ": max part " +
                                std::to_string(o.max_part) + ", whole " +
                                std::to_string(o.whole) + ", sum " +
                                std::to_string(o.sum_parts));
    }
    if (o.max_part == o.whole) ++tight_lower;
    if (o.sum_parts == o.whole) ++tight_upper;
  }
  result.stats = {{"parts", static_cast<double>(parts)},
                  {"lower_tight_trials", static_cast<double>(tight_lower)},
                  {"upper_tight_trials", static_cast<double>(tight_upper)}};
  result.passed = result.violations == 0 && options.trials > 0 &&
                  enough_conclusive(options.trials, result.inconclusive);
  return result;
}

SuiteResult interval_suite(const IntervalSuiteOptions& options) {
  if (options.trials < 100) throw ParameterError("interval suite needs trials >= 100");
  if (!(options.lambda > 0.0 && options.lambda <= 1.0))
    throw DomainError("lambda must lie in (0,1]");
  if (!(options.delta > 0.0 && options.delta <= 1.0))
    throw DomainError("delta must lie in (0,1]");

  auto draw_sorted = [](Engine& eng, std::size_t n) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = uniform01(eng);
    std::sort(xs.begin(), xs.end());
    return xs;
  };
  const std::size_t window_m = static_cast<std::size_t>(
      std::ceil(options.delta * static_cast<double>(options.window_n) - 1e-9));

  std::vector<char> count_ok(options.trials), window_ok(options.trials);
  std::vector<double> window_len(options.trials);
  parallel_for(options.trials, options.jobs, [&](std::size_t t) {
    Engine eng(mix64(options.seed, 1, t));
    std::vector<double> xs = draw_sorted(eng, options.count_n);
    double lo = uniform01(eng) * (1.0 - options.lambda);
    Interval window(lo, std::min(1.0, lo + options.lambda));
    if (options.lambda == 1.0) window = Interval(0.0, 1.0);
    double expected = static_cast<double>(options.count_n) * options.lambda;
    double count = static_cast<double>(count_in_interval(xs, window));
    count_ok[t] = std::abs(count - expected) <= options.count_tolerance * expected;

    Engine eng2(mix64(options.seed, 2, t));
    std::vector<double> ys = draw_sorted(eng2, options.window_n);
    window_len[t] = min_window_length(ys, window_m);
    window_ok[t] = window_len[t] >= 0.9 * options.delta / 2.0;
  });

  const double trials = static_cast<double>(options.trials);
  double count_rate = std::count(count_ok.begin(), count_ok.end(), 1) / trials;
  double window_rate = std::count(window_ok.begin(), window_ok.end(), 1) / trials;
  SuiteResult result;
  result.name = "interval";
  result.trials = options.trials;
  result.violations = static_cast<std::size_t>(
      std::count(count_ok.begin(), count_ok.end(), 0) +
      std::count(window_ok.begin(), window_ok.end(), 0));
  result.stats = {{"count_pass_rate", count_rate},
                  {"window_pass_rate", window_rate},
                  {"min_window_length_min",
                   *std::min_element(window_len.begin(), window_len.end())}};
  result.passed = count_rate >= options.required_rate && window_rate >= options.required_rate;
  return result;
}

std::uint64_t count_k_cliques(const SampledGraph& graph, std::size_t k) {
  const std::size_t n = graph.n();
  if (n > 64) throw CapacityError("k-clique enumeration limited to n <= 64");
  if (k == 0) return 1;
  std::vector<std::uint64_t> rows(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && graph.adjacent(i, j)) rows[i] |= std::uint64_t{1} << j;
  // Extend cliques in increasing vertex order so each is counted once.
  std::function<std::uint64_t(std::uint64_t, std::size_t)> extend =
      [&](std::uint64_t candidates, std::size_t remaining) -> std::uint64_t {
    if (remaining == 0) return 1;
    std::uint64_t total = 0;
    while (candidates) {
      int v = std::countr_zero(candidates);
      candidates &= candidates - 1;
      total += extend(candidates & rows[v], remaining - 1);
    }
    return total;
  };
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return extend(all, k);
}

MomentCheck moment_mc_check(const GraphonSpec& spec, std::size_t n, std::size_t k,
                            std::size_t trials, std::uint64_t seed, unsigned jobs) {
  if (n > 16) throw CapacityError("moment check enumerates cliques; needs n <= 16");
  if (trials < 2) throw ParameterError("moment check needs trials >= 2");
  MomentCheck check;
  check.n = n;
  check.k = k;
  check.trials = trials;
  check.analytic_value = std::exp(log_expected_cliques(spec, n, k).log_expected);

  std::vector<std::uint64_t> counts(trials);
  // Chunk the trials so thread start-up does not dominate tiny samples.
  const std::size_t chunk = 1024;
  const std::size_t chunks = (trials + chunk - 1) / chunk;
  parallel_for(chunks, jobs, [&](std::size_t c) {
    for (std::size_t t = c * chunk; t < std::min(trials, (c + 1) * chunk); ++t)
      counts[t] = count_k_cliques(sample(SampleConfig{spec, n, mix64(seed, n, t)}), k);
  });
  double sum = 0.0;
  for (auto v : counts) sum += static_cast<double>(v);
  check.empirical_mean = sum / static_cast<double>(trials);
  double ss = 0.0;
  for (auto v : counts) ss += (v - check.empirical_mean) * (v - check.empirical_mean);
  check.empirical_std = std::sqrt(ss / static_cast<double>(trials - 1));
  const double diff = check.empirical_mean - check.analytic_value;
  const double se = check.empirical_std / std::sqrt(static_cast<double>(trials));
  if (se > 0.0)
    check.z_score = diff / se;
  else
    check.z_score = std::abs(diff) <= 1e-9 * std::max(1.0, check.analytic_value)
                        ? 0.0
                        : std::copysign(std::numeric_limits<double>::infinity(), diff);
  return check;
}

SuiteResult union_bound_upper_check(const GraphonSpec& spec,
                                    const std::vector<std::size_t>& n_grid,
                                    const SuiteOptions& options) {
  if (n_grid.empty()) throw ParameterError("union bound check needs a non-empty n grid");
  SuiteResult result;
  result.name = "union_bound";
  for (std::size_t n : n_grid) {
    if (n < 2) throw ParameterError("union bound check needs n >= 2");
    const double nn = static_cast<double>(n);
    const double limit = 3.0 * std::log(nn) * std::sqrt(nn);

    struct Outcome {
      std::size_t bound = 0;
      bool exact = false, conclusive = true, ok = true;
    };
    std::vector<Outcome> outcomes(options.trials);
    parallel_for(options.trials, options.jobs, [&](std::size_t t) {
      SampledGraph g = sample(SampleConfig{spec, n, mix64(options.seed, n, t)});
      Outcome& o = outcomes[t];
      o.bound = coloring_upper_bound(g);
      if (static_cast<double>(o.bound) < limit) return;
      CliqueResult r = exact_max_clique(g, options.budget);
      if (r.status == SolveStatus::optimal) {
        o.exact = true;
        o.bound = r.size;
        o.ok = static_cast<double>(r.size) < limit;
      } else if (static_cast<double>(r.size) >= limit) {
        o.ok = false;  // a found clique already reaches the limit
      } else {
        o.conclusive = false;
      }
    });

    std::size_t worst = 0;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
      const Outcome& o = outcomes[t];
      ++result.trials;
      worst = std::max(worst, o.bound);
      if (!o.conclusive) ++result.inconclusive;
      if (!o.ok) {
        ++result.violations;
        result.messages.push_back("n=" + std::to_string(n) + " trial " + std::to_string(t) +
                                  ": clique of size " + std::to_string(o.bound) +
                                  " >= " + std::to_string(limit));
      }
    }
    result.stats.emplace_back("limit_n" + std::to_string(n), limit);
    result.stats.emplace_back("max_upper_bound_n" + std::to_string(n),
                              static_cast<double>(worst));
  }
  result.passed = result.violations == 0 && result.inconclusive == 0 && result.trials > 0;
  return result;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string utc_stamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

}  // namespace

std::string write_scaling_run(const ScalingReport& report, const std::string& root) {
  namespace fs = std::filesystem;
  fs::path dir = fs::path(root) / ("run-" + utc_stamp() + "-seed" + std::to_string(report.seed));
  fs::create_directories(dir);

  std::ofstream csv(dir / "trials.csv");
  if (!csv) throw Error("cannot write " + (dir / "trials.csv").string());
  csv << "spec,n,trial,seed,method,clique_size,elapsed_ms\n";
  for (const auto& r : report.records)
    csv << csv_field(report.spec_tag) << ',' << r.n << ',' << r.trial << ',' << r.seed << ','
        << r.method << ',' << r.clique_size << ',' << format_double(r.elapsed_ms) << '\n';

  std::ofstream json(dir / "summary.json");
  if (!json) throw Error("cannot write " + (dir / "summary.json").string());
  json << to_json(report).dump(2) << '\n';
  return dir.string();
}

}  // namespace graphon_lab
