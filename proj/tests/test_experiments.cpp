#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "graphon_lab/experiments.hpp"
#include "graphon_lab/report_json.hpp"
#include "graphon_lab/rng.hpp"
#include "oracles.hpp"

using namespace graphon_lab;

TEST_CASE("power-law fit recovers exact exponents") {
  std::vector<double> xs{256, 512, 1024, 2048, 4096}, ys;
  for (double x : xs) ys.push_back(3.0 * std::pow(x, 0.5));
  auto fit = fit_power_law(xs, ys);
  CHECK(std::abs(fit.exponent - 0.5) <= 1e-12);
  CHECK(std::exp(fit.log_prefactor) == doctest::Approx(3.0));
  CHECK(fit.stderr_exponent < 1e-12);
  // Logarithmic growth over this grid reads as a small power (reference from
  // numpy.polyfit on the same points).
  std::vector<double> logs;
  for (double x : xs) logs.push_back(2.0 * std::log2(x));
  auto er = fit_power_law(xs, logs);
  CHECK(er.exponent == doctest::Approx(0.14594316186372983).epsilon(1e-12));
  CHECK(er.exponent <= 0.15);
  CHECK(er.stderr_exponent > 0.0);
  CHECK_THROWS_AS(fit_power_law({1.0}, {1.0}), ParameterError);
  CHECK_THROWS_AS(fit_power_law({1.0, 2.0}, {1.0, 0.0}), DomainError);
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw DomainError("boom");
                  }),
                  DomainError);
  CHECK(default_jobs() >= 1);
}

TEST_CASE("scaling study is deterministic and independent of the worker count") {
  StudyOptions o;
  o.method = StudyMethod::threshold_greedy;
  o.trials = 4;
  o.seed = 99;
  o.jobs = 1;
  auto spec = GraphonSpec::sqrt_family(1.0);
  auto a = scaling_study(spec, {256, 512, 1024}, o);
  o.jobs = 3;
  auto b = scaling_study(spec, {256, 512, 1024}, o);
  REQUIRE(a.records.size() == 12);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].seed == b.records[i].seed);
    CHECK(a.records[i].clique_size == b.records[i].clique_size);
  }
  CHECK(a.fitted_exponent == b.fitted_exponent);
  CHECK(a.records[5].seed == mix64(99, 512, 1));
  CHECK(a.predicted.has_value());
  CHECK(std::isfinite(a.fitted_exponent));
}

TEST_CASE("scaling study input validation") {
  StudyOptions o;
  o.trials = 2;
  auto spec = GraphonSpec::sqrt_family(1.0);
  CHECK_THROWS_AS(scaling_study(spec, {100, 200}, o), ParameterError);
  CHECK_THROWS_AS(scaling_study(spec, {100, 300, 200}, o), ParameterError);
  CHECK_THROWS_AS(scaling_study(GraphonSpec::constant(0.5), {100, 200, 300}, o),
                  UnsupportedSpecError);
  o.method = StudyMethod::exact;
  CHECK_THROWS_AS(scaling_study(spec, {100, 200, 2048}, o), CapacityError);
}

TEST_CASE("best-of estimates respect the first-moment cutoff") {
  StudyOptions o;
  o.method = StudyMethod::best_of;
  o.trials = 3;
  o.seed = 5;
  auto r = scaling_study(GraphonSpec::poly_family(2.0), {200, 400, 800}, o);
  CHECK(r.markov_checked == 9);
  CHECK(r.markov_violations == 0);
  for (const auto& s : r.per_n) {
    REQUIRE(s.cutoff.has_value());
    CHECK(s.max <= *s.cutoff);
  }
}

TEST_CASE("exact scaling marks budget-limited trials as inconclusive") {
  StudyOptions o;
  o.method = StudyMethod::exact;
  o.trials = 3;
  o.budget = SolveBudget{20, 60'000.0};
  auto r = scaling_study(GraphonSpec::constant(0.5), {100, 200, 300}, o);
  CHECK_FALSE(r.fit_valid);
  CHECK(std::isnan(r.fitted_exponent));
  for (const auto& s : r.per_n) CHECK(s.inconclusive + s.trials == 3);
}

TEST_CASE("concentration") {
  StudyOptions o;
  o.method = StudyMethod::exact;
  o.trials = 10;
  auto full = concentration_check(GraphonSpec::constant(1.0), 100, o);
  CHECK(full.coefficient_of_variation == 0.0);
  CHECK(full.max_over_min == 1.0);
  CHECK(full.mean == 100.0);
  o.trials = 5;
  CHECK_THROWS_AS(concentration_check(GraphonSpec::constant(1.0), 100, o), ParameterError);
}

TEST_CASE("dominance suite") {
  SuiteOptions o;
  o.trials = 10;
  auto pass = dominance_suite(GraphonSpec::constant(0.3), GraphonSpec::constant(0.7), 100, o);
  CHECK(pass.passed);
  CHECK(pass.violations == 0);
  auto same = dominance_suite(GraphonSpec::line(), GraphonSpec::line(), 80, o);
  CHECK(same.passed);
  CHECK(same.stats[0].second == same.stats[1].second);
  CHECK_THROWS_AS(
      dominance_suite(GraphonSpec::poly_family(2.0), GraphonSpec::poly_family(1.0), 50, o),
      PreconditionError);
}

TEST_CASE("partition suite") {
  SuiteOptions o;
  o.trials = 5;
  auto whole = partition_suite(GraphonSpec::sqrt_family(1.0), 120, {}, o);
  CHECK(whole.passed);
  CHECK(whole.stats[1].second == 5.0);  // lower bound tight
  CHECK(whole.stats[2].second == 5.0);  // upper bound tight
  auto complete = partition_suite(GraphonSpec::constant(1.0), 40, {0.3, 0.6}, o);
  CHECK(complete.passed);
  CHECK(complete.stats[2].second == 5.0);
  CHECK(complete.stats[1].second == 0.0);
  CHECK_THROWS_AS(partition_suite(GraphonSpec::line(), 40, {0.6, 0.3}, o), ParameterError);
  CHECK_THROWS_AS(partition_suite(GraphonSpec::line(), 40, {1.0}, o), DomainError);
}

TEST_CASE("interval suite") {
  IntervalSuiteOptions o;
  auto r = interval_suite(o);
  CHECK(r.passed);
  CHECK(r.stats[0].second >= 0.99);
  CHECK(r.stats[1].second >= 0.99);
  o.count_n = 5'000;
  o.window_n = 1'000;
  o.lambda = 1.0;
  o.count_tolerance = 0.0;
  auto full = interval_suite(o);
  CHECK(full.stats[0].second == 1.0);
  o.trials = 10;
  CHECK_THROWS_AS(interval_suite(o), ParameterError);
}

TEST_CASE("k-clique counting matches subset enumeration") {
  for (const char* text : {"const:p=0.5", "sqrt:r=1", "line"}) {
    auto spec = GraphonSpec::parse(text);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto g = sample(SampleConfig{spec, 14, seed});
      for (std::size_t k = 1; k <= 6; ++k)
        CHECK(count_k_cliques(g, k) == oracle::brute_force_k_cliques(g, k));
    }
  }
}

TEST_CASE("moment Monte Carlo check") {
  auto all = moment_mc_check(GraphonSpec::constant(1.0), 5, 3, 50, 1);
  CHECK(all.empirical_mean == 10.0);
  CHECK(all.z_score == 0.0);
  auto none = moment_mc_check(GraphonSpec::constant(0.0), 5, 2, 50, 1);
  CHECK(none.empirical_mean == 0.0);
  CHECK(none.analytic_value == 0.0);
  auto sq = moment_mc_check(GraphonSpec::sqrt_family(1.0), 12, 3, 20'000, 3);
  CHECK(sq.analytic_value == doctest::Approx(220.0 / 27.0));
  CHECK(std::abs(sq.z_score) < 4.0);
  CHECK_THROWS_AS(moment_mc_check(GraphonSpec::sqrt_family(1.0), 17, 3, 10, 1), CapacityError);
}

TEST_CASE("union bound check") {
  SuiteOptions o;
  o.trials = 3;
  auto empty = union_bound_upper_check(GraphonSpec::constant(0.0), {1024}, o);
  CHECK(empty.passed);
  CHECK(empty.stats[1].second == 1.0);
  auto line = union_bound_upper_check(GraphonSpec::line(), {256, 512}, o);
  CHECK(line.passed);
  CHECK(line.stats[0].second == doctest::Approx(3.0 * std::log(256.0) * 16.0));
}

TEST_CASE("run directory holds the CSV log and JSON summary") {
  namespace fs = std::filesystem;
  StudyOptions o;
  o.trials = 2;
  o.seed = 4;
  auto r = scaling_study(GraphonSpec::holder_family(0.5, 2.0), {256, 512, 1024}, o);
  auto root = fs::temp_directory_path() / "graphon_lab_runs";
  fs::remove_all(root);
  std::string dir = write_scaling_run(r, root.string());
  CHECK(fs::path(dir).filename().string().find("-seed4") != std::string::npos);
  std::ifstream csv(fs::path(dir) / "trials.csv");
  std::string header, first;
  std::getline(csv, header);
  std::getline(csv, first);
  CHECK(header == "spec,n,trial,seed,method,clique_size,elapsed_ms");
  CHECK(first.rfind("\"holder:alpha=0.5,C=2\",256,0,", 0) == 0);
  std::ifstream js(fs::path(dir) / "summary.json");
  auto summary = nlohmann::json::parse(js);
  for (const char* key : {"spec", "n_grid", "exponent", "stderr", "empirical_constant",
                          "predicted_upper", "predicted_lower", "trials", "method",
                          "schema_version"})
    CHECK(summary.contains(key));
  CHECK(summary["trials"] == 2);
  CHECK(summary["method"] == "threshold_greedy");
  fs::remove_all(root);
}
