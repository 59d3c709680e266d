#include <doctest.h>

#include <cmath>
#include <numbers>

#include "graphon_lab/moments.hpp"

using namespace graphon_lab;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// ∫_0^1 (1 - x^a)^m dx via the Beta function.
double log_beta_moment(double a, double m) {
  return std::lgamma(m + 1.0) + std::lgamma(1.0 + 1.0 / a) - std::lgamma(m + 1.0 + 1.0 / a);
}

}  // namespace

TEST_CASE("log helpers") {
  CHECK(std::exp(log_binomial(10, 3)) == doctest::Approx(120.0));
  CHECK(log_binomial(5, 0) == doctest::Approx(0.0));
  CHECK(log_binomial(5, 6) == -INFINITY);
  CHECK(log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
  CHECK(log_add(-INFINITY, 1.5) == 1.5);
  CHECK(log_add(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)));
}

TEST_CASE("expected clique count of the square-root family, small case") {
  auto r = log_expected_cliques(GraphonSpec::sqrt_family(1.0), 12, 3);
  CHECK(r.log_expected == doctest::Approx(std::log(220.0 / 27.0)).epsilon(1e-12));
  CHECK(r.method == MomentMethod::closed_form_sqrt);
  CHECK(r.family_tag == "sqrt:r=1");
  CHECK(std::exp(r.log_expected) == doctest::Approx(8.148148).epsilon(1e-6));
}

TEST_CASE("constant kernel is the Erdos-Renyi count") {
  auto r = log_expected_cliques(GraphonSpec::constant(0.5), 20, 4);
  CHECK(r.method == MomentMethod::closed_form_constant);
  CHECK(std::exp(r.log_expected) == doctest::Approx(4845.0 / 64.0));
  CHECK(log_expected_cliques(GraphonSpec::constant(0.0), 5, 2).log_expected == -INFINITY);
  CHECK(std::exp(log_expected_cliques(GraphonSpec::constant(0.0), 5, 1).log_expected) ==
        doctest::Approx(5.0));
  CHECK(std::exp(log_expected_cliques(GraphonSpec::constant(1.0), 5, 3).log_expected) ==
        doctest::Approx(10.0));
}

TEST_CASE("r = 1 square-root and polynomial closed forms coincide") {
  auto s = GraphonSpec::sqrt_family(1.0), p = GraphonSpec::poly_family(1.0);
  for (std::uint64_t n : {2, 3, 10, 77, 1000, 10000})
    for (std::uint64_t k = 1; k <= n; k += (n > 100 ? 37 : 1))
      CHECK(std::abs(log_expected_cliques(s, n, k).log_expected -
                     log_expected_cliques(p, n, k).log_expected) <= 1e-9);
}

TEST_CASE("quadrature agrees with closed forms") {
  for (double r : {0.5, 1.0, 2.0, 3.0}) {
    auto s = GraphonSpec::sqrt_family(r), p = GraphonSpec::poly_family(r);
    for (double m : {0.0, 1.0, 2.0, 7.0, 50.0, 1000.0, 1e5}) {
      CAPTURE(r);
      CAPTURE(m);
      CHECK(rel_diff(log_profile_moment_quadrature(s, m), -std::log(r * m + 1.0)) < 1e-9);
      CHECK(rel_diff(log_profile_moment_quadrature(p, m), log_beta_moment(r, m)) < 1e-9);
    }
  }
}

TEST_CASE("tabulated linear profile reproduces the r = 1 square-root family") {
  auto tab = GraphonSpec::rank1(Profile({0.0, 1.0}, {1.0, 0.0}));
  auto s = GraphonSpec::sqrt_family(1.0);
  CHECK(moment_method(tab) == MomentMethod::quadrature);
  for (std::uint64_t k : {2, 5, 20, 200})
    CHECK(rel_diff(log_expected_cliques(tab, 1000, k).log_expected,
                   log_expected_cliques(s, 1000, k).log_expected) < 1e-9);
  // Kinked profile: 1 - 2x on [0, 1/2], then 0.
  auto kink = GraphonSpec::rank1(Profile({0.0, 0.5, 1.0}, {1.0, 0.0, 0.0}));
  for (double m : {1.0, 10.0, 1000.0})
    CHECK(rel_diff(log_profile_moment(kink, m), -std::log(2.0 * (m + 1.0))) < 1e-9);
  // Interior maximum: tent peaking at 0.3.
  auto tent = GraphonSpec::rank1(Profile({0.0, 0.3, 1.0}, {0.0, 1.0, 0.0}));
  for (double m : {1.0, 40.0, 5000.0})
    CHECK(rel_diff(log_profile_moment(tent, m), -std::log(m + 1.0)) < 1e-9);
}

TEST_CASE("Holder family moment has a Gamma closed form") {
  for (auto [alpha, c] : {std::pair{0.5, 2.0}, std::pair{2.0, 3.0}, std::pair{1.0, 1.5}}) {
    auto h = GraphonSpec::holder_family(alpha, c);
    for (double m : {1.0, 9.0, 300.0}) {
      // substitute y = C^{1/alpha} x
      double expected = -std::log(c) / alpha + log_beta_moment(alpha, m);
      CHECK(rel_diff(log_profile_moment(h, m), expected) < 1e-9);
    }
  }
}

TEST_CASE("restricted square-root profile") {
  const double a = 0.2, b = 0.7;
  auto spec = GraphonSpec::sqrt_family(2.0).restricted(Interval(a, b));
  CHECK(moment_method(spec) == MomentMethod::quadrature);
  for (double m : {1.0, 5.0, 100.0}) {
    double e = 2.0 * m + 1.0;
    double exact = std::log((std::pow(1 - a, e) - std::pow(1 - b, e)) / (e * (b - a)));
    CHECK(rel_diff(log_profile_moment(spec, m), exact) < 1e-9);
  }
}

TEST_CASE("unsupported specs and bad sizes") {
  CHECK_THROWS_AS(log_expected_cliques(GraphonSpec::line(), 100, 5), UnsupportedSpecError);
  CHECK_THROWS_AS(log_expected_cliques(GraphonSpec::flat_exp(), 100, 5), UnsupportedSpecError);
  CHECK_THROWS_AS(log_expected_cliques(GraphonSpec::oscillating(), 100, 5), UnsupportedSpecError);
  CHECK_THROWS_AS(log_expected_cliques(GraphonSpec::sqrt_family(1.0), 5, 6), DomainError);
  CHECK_THROWS_AS(variance_ratio(GraphonSpec::sqrt_family(1.0), 10, 6), DomainError);
}

TEST_CASE("first-moment cutoffs") {
  // Reference values from exact big-number arithmetic on C(n,k) p^{k(k-1)/2}
  // and C(n,k) k^{-k}.
  auto er = first_moment_cutoff(GraphonSpec::constant(0.5), 1024);
  CHECK(er.k_star == 16);
  CHECK(er.certificate_first_k == 15);
  CHECK(er.certificate.front() == doctest::Approx(3.1893252372216296).epsilon(1e-9));
  CHECK(er.certificate[1] == doctest::Approx(-3.063756173063722).epsilon(1e-9));
  CHECK(er.certificate.size() == 12);
  for (std::size_t i = 1; i < er.certificate.size(); ++i) CHECK(er.certificate[i] < 0.0);

  auto sq = first_moment_cutoff(GraphonSpec::sqrt_family(1.0), 1'000'000);
  CHECK(sq.k_star == 1646);
  CHECK(sq.certificate[1] == doctest::Approx(-0.5385716647234516).epsilon(1e-6));

  auto full = first_moment_cutoff(GraphonSpec::constant(1.0), 30);
  CHECK(full.degenerate);
  CHECK(full.k_star == 31);

  auto tiny = first_moment_cutoff(GraphonSpec::constant(0.0), 30);
  CHECK(tiny.k_star == 2);
}

TEST_CASE("variance ratio: Erdos-Renyi overlap formula") {
  // E[X^2]/E[X]^2 = sum_i C(k,i) C(n-k,k-i) / C(n,k) * p^{-i(i-1)/2}
  const double p = 0.5;
  for (auto [n, k] : {std::pair<std::uint64_t, std::uint64_t>{40, 6}, {200, 12}, {1000, 20}}) {
    long double total = 0.0L;
    for (std::uint64_t i = 0; i <= k; ++i) {
      long double term = std::exp(static_cast<long double>(
          log_binomial(k, i) + log_binomial(n - k, k - i) - log_binomial(n, k)));
      term *= std::pow(static_cast<long double>(p), -0.5L * i * (i - 1.0L));
      total += term;
    }
    auto v = variance_ratio(GraphonSpec::constant(p), n, k);
    CHECK(v.per_i_terms.size() == k + 1);
    CHECK(v.log_ratio == doctest::Approx(static_cast<double>(std::log(total))).epsilon(1e-10));
  }
}

TEST_CASE("variance ratio properties") {
  for (const char* text : {"sqrt:r=1", "poly:r=2", "holder:alpha=0.5,C=2", "const:p=0.3"}) {
    auto spec = GraphonSpec::parse(text);
    CHECK(variance_ratio(spec, 50, 1).log_ratio == doctest::Approx(0.0).epsilon(1e-12));
    // E[X^2] >= E[X]^2
    CHECK(variance_ratio(spec, 200, 8).log_ratio >= -1e-12);
  }
  // Square-root family: closed-form route agrees with the quadrature route.
  auto sq = GraphonSpec::sqrt_family(1.0);
  auto tab = GraphonSpec::rank1(Profile({0.0, 1.0}, {1.0, 0.0}));
  CHECK(variance_ratio(tab, 400, 20).log_ratio ==
        doctest::Approx(variance_ratio(sq, 400, 20).log_ratio).epsilon(1e-8));
}

TEST_CASE("predicted constants") {
  const double e = std::numbers::e;
  auto s = predicted_constants(GraphonSpec::sqrt_family(1.0));
  CHECK(s.exponent == 0.5);
  CHECK(s.upper_constant == doctest::Approx(std::sqrt(e)));
  CHECK(s.lower_constant == doctest::Approx(1.0 / std::sqrt(12.0 * e)));
  auto p = predicted_constants(GraphonSpec::poly_family(2.0));
  CHECK(p.exponent == doctest::Approx(2.0 / 3.0));
  CHECK(p.upper_constant == doctest::Approx(std::pow(std::tgamma(1.5) * e, 2.0 / 3.0)));
  CHECK(p.lower_constant == doctest::Approx(0.5 * std::exp(-2.0 / 3.0)));
  CHECK_THROWS_AS(predicted_constants(GraphonSpec::line()), UnsupportedSpecError);
}

TEST_CASE("Gamma ratio is accurate across the Stirling switch") {
  for (double x : {1.0, 5.5, 29.0, 30.0, 31.0, 1e3, 1e6})
    for (double a : {0.5, 1.0, 2.0, 1.0 / 3.0})
      CHECK(log_gamma_ratio(x, a) ==
            doctest::Approx(static_cast<double>(std::lgammal(static_cast<long double>(x) + a) -
                                                std::lgammal(x)))
                .epsilon(1e-11));
  CHECK(log_gamma_ratio(1e4, 1.0) == doctest::Approx(std::log(1e4)).epsilon(1e-15));
}
