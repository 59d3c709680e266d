#pragma once

// Log-domain clique-count moments for rank-1 graphons W(x,y) = f(x) f(y):
//   E[X_k]            = C(n,k) * I(k-1)^k,          I(m) = ∫_0^1 f^m
//   E[X_k^2]/E[X_k]^2 = sum_i C(k,i) C(n-k,k-i) / C(n,k)
//                             * I(k-1)^{-2i} * I(2k-i-1)^i

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "graphon_lab/graphon.hpp"

namespace graphon_lab {

enum class MomentMethod {
  closed_form_constant,
  closed_form_sqrt,
  closed_form_poly,
  quadrature
};

std::string to_string(MomentMethod method);

// ln C(n, k) via log-gamma.
double log_binomial(double n, double k);

// ln Γ(x + a) - ln Γ(x) without the cancellation of two large lgamma values.
double log_gamma_ratio(double x, double a);

// ln(e^a + e^b) without overflow; handles -inf.
double log_add(double a, double b);

struct MomentReport {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  // ln E[X_k]; -inf when E[X_k] = 0.
  double log_expected = 0.0;
  std::string family_tag;
  MomentMethod method = MomentMethod::quadrature;
};

// Which route log_expected_cliques takes for this spec; throws
// UnsupportedSpecError when the spec has no rank-1 moment formula here.
MomentMethod moment_method(const GraphonSpec& spec);

MomentReport log_expected_cliques(const GraphonSpec& spec, std::uint64_t n,
                                  std::uint64_t k);

// ln ∫_0^1 f(u)^m du for the spec's rank-1 profile, by the closed form when
// one exists and by adaptive Simpson quadrature otherwise.
double log_profile_moment(const GraphonSpec& spec, double m);

// Adaptive Simpson over a mesh graded towards the profile maximizer; exposed
// so tests can compare it with the closed forms.
double log_profile_moment_quadrature(const GraphonSpec& spec, double m,
                                     double rel_tol = 1e-10);

struct CutoffResult {
  std::uint64_t n = 0;
  std::uint64_t k_star = 0;
  // No sign change up to k = n: k_star = n + 1.
  bool degenerate = false;
  // ln E[X_k] for k = k_star - 1, k_star, ..., k_star + 10 (clipped to n).
  std::vector<double> certificate;
  std::uint64_t certificate_first_k = 0;
};

// Smallest k >= 2 with E[X_k] < 1 whose next 10 values are also below 1.
CutoffResult first_moment_cutoff(const GraphonSpec& spec, std::uint64_t n);

struct VarianceReport {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  // ln(E[X_k^2] / E[X_k]^2)
  double log_ratio = 0.0;
  // ln of the i-th summand, i = 0..k.
  std::vector<double> per_i_terms;
};

VarianceReport variance_ratio(const GraphonSpec& spec, std::uint64_t n,
                              std::uint64_t k);

struct PredictedConstants {
  double upper_constant;
  double lower_constant;
  double exponent;
};

// Leading constants of the first-moment upper bound and of the constructive
// lower bound, for the square-root and polynomial families.
PredictedConstants predicted_constants(const GraphonSpec& spec);

}  // namespace graphon_lab
