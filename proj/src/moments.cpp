#include "graphon_lab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "graphon_lab/format.hpp"

namespace graphon_lab {

std::string to_string(MomentMethod method) {
  switch (method) {
    case MomentMethod::closed_form_constant: return "closed_form_constant";
    case MomentMethod::closed_form_sqrt: return "closed_form_sqrt";
    case MomentMethod::closed_form_poly: return "closed_form_poly";
    case MomentMethod::quadrature: return "quadrature";
  }
  return "quadrature";
}

double log_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_gamma_ratio(double x, double a) {
  if (x < 30.0) return std::lgamma(x + a) - std::lgamma(x);
  // Stirling: ln Γ(y) = (y - 1/2) ln y - y + ln(2π)/2 + s(y), with the
  // leading terms regrouped so nothing large cancels.
  auto series = [](double y) {
    const double y2 = y * y;
    return (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / (1260.0 * y2)) / y2) / y;
  };
  return (x - 0.5) * std::log1p(a / x) + a * std::log(x + a) - a + series(x + a) - series(x);
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

MomentMethod moment_method(const GraphonSpec& spec) {
  const Family& f = spec.family();
  const bool windowed = spec.restriction().has_value();
  if (std::holds_alternative<family::Constant>(f))
    return MomentMethod::closed_form_constant;
  if (std::holds_alternative<family::SqrtFamily>(f))
    return windowed ? MomentMethod::quadrature : MomentMethod::closed_form_sqrt;
  if (std::holds_alternative<family::PolyFamily>(f))
    return windowed ? MomentMethod::quadrature : MomentMethod::closed_form_poly;
  if (std::holds_alternative<family::HolderFamily>(f) ||
      std::holds_alternative<family::Rank1>(f))
    return MomentMethod::quadrature;
  throw UnsupportedSpecError(
      "moments need a rank-1 graphon (const, sqrt, poly, holder, rank1); '" +
      spec.to_string() + "' is not supported");
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& g, double a, double b,
                        double fa, double fm, double fb, double whole, double eps,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = g(lm), frm = g(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson(g, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(g, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

// Mesh points for the quadrature: unit endpoints, profile kinks (tabulated
// knots, the Hölder support edge) and a geometric refinement towards every
// maximizer of f.
std::vector<double> quadrature_mesh(const GraphonSpec& spec, double& fmax) {
  std::vector<double> kinks{0.0, 1.0};
  const Interval window = spec.restriction().value_or(Interval(0.0, 1.0));
  auto to_unit = [&window](double x) { return (x - window.lo()) / window.length(); };
  if (const auto* r = std::get_if<family::Rank1>(&spec.family())) {
    for (double x : r->profile->knots())
      if (x > window.lo() && x < window.hi()) kinks.push_back(to_unit(x));
  }
  if (const auto* h = std::get_if<family::HolderFamily>(&spec.family())) {
    double edge = std::pow(h->c, -1.0 / h->alpha);
    if (edge > window.lo() && edge < window.hi()) kinks.push_back(to_unit(edge));
  }

  std::vector<double> probes = kinks;
  constexpr int kGrid = 4096;
  for (int i = 0; i <= kGrid; ++i) probes.push_back(static_cast<double>(i) / kGrid);
  fmax = 0.0;
  for (double u : probes) fmax = std::max(fmax, spec.profile(u));

  std::vector<double> peaks;
  for (double u : kinks)
    if (spec.profile(u) >= fmax) peaks.push_back(u);
  if (peaks.empty()) {
    for (double u : probes)
      if (spec.profile(u) >= fmax) {
        peaks.push_back(u);
        break;
      }
  }

  std::vector<double> mesh = kinks;
  for (double p : peaks) {
    mesh.push_back(p);
    for (int j = 1; j <= 60; ++j) {
      double d = std::ldexp(1.0, -j);
      if (p - d > 0.0) mesh.push_back(p - d);
      if (p + d < 1.0) mesh.push_back(p + d);
    }
  }
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
  return mesh;
}

double closed_form_log_moment(const GraphonSpec& spec, double m) {
  return std::visit(
      [&](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::Constant>) {
          if (m == 0.0) return 0.0;
          return f.p == 0.0 ? kNegInf : 0.5 * m * std::log(f.p);
        } else if constexpr (std::is_same_v<F, family::SqrtFamily>) {
          return -std::log(f.r * m + 1.0);
        } else if constexpr (std::is_same_v<F, family::PolyFamily>) {
          // ∫ (1-x^r)^m dx = Γ(m+1) Γ(1+1/r) / Γ(m+1+1/r)
          const double inv = 1.0 / f.r;
          return std::lgamma(1.0 + inv) - log_gamma_ratio(m + 1.0, inv);
        } else {
          throw UnsupportedSpecError("no closed form for '" + spec.to_string() + "'");
        }
      },
      spec.family());
}

}  // namespace

double log_profile_moment_quadrature(const GraphonSpec& spec, double m,
                                     double rel_tol) {
  if (!spec.is_rank1())
    throw UnsupportedSpecError("'" + spec.to_string() + "' is not rank-1");
  if (m == 0.0) return 0.0;
  double fmax = 0.0;
  std::vector<double> mesh = quadrature_mesh(spec, fmax);
  if (fmax <= 0.0) return kNegInf;
  const double log_fmax = std::log(fmax);
  std::function<double(double)> g = [&](double u) {
    double v = spec.profile(u);
    if (v <= 0.0) return 0.0;
    return std::exp(m * (std::log(v) - log_fmax));
  };

  struct Piece {
    double a, b, fa, fm, fb, whole;
  };
  std::vector<Piece> pieces;
  double estimate = 0.0;
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    double a = mesh[i], b = mesh[i + 1];
    double fa = g(a), fm = g(0.5 * (a + b)), fb = g(b);
    double whole = simpson(a, b, fa, fm, fb);
    pieces.push_back({a, b, fa, fm, fb, whole});
    estimate += whole;
  }
  // A peak narrower than every mesh cell would make the coarse estimate
  // vanish; fall back to an absolute tolerance tied to the peak height.
  const double scale = estimate > 0.0 ? estimate : 1e-300;
  const double eps = rel_tol * scale / static_cast<double>(pieces.size());
  double total = 0.0;
  for (const Piece& p : pieces)
    total += adaptive_simpson(g, p.a, p.b, p.fa, p.fm, p.fb, p.whole, eps, 50);
  if (!(total > 0.0)) return kNegInf;
  return m * log_fmax + std::log(total);
}

double log_profile_moment(const GraphonSpec& spec, double m) {
  MomentMethod method = moment_method(spec);
  if (method == MomentMethod::quadrature)
    return log_profile_moment_quadrature(spec, m);
  return closed_form_log_moment(spec, m);
}

MomentReport log_expected_cliques(const GraphonSpec& spec, std::uint64_t n,
                                  std::uint64_t k) {
  if (k < 1) throw DomainError("clique size k must be at least 1");
  if (k > n)
    throw DomainError("clique size k=" + std::to_string(k) + " exceeds n=" +
                      std::to_string(n));
  MomentReport report;
  report.n = n;
  report.k = k;
  report.family_tag = spec.to_string();
  report.method = moment_method(spec);
  const double nn = static_cast<double>(n), kk = static_cast<double>(k);
  const double log_choose = log_binomial(nn, kk);
  switch (report.method) {
    case MomentMethod::closed_form_constant: {
      const double p = std::get<family::Constant>(spec.family()).p;
      const double pairs = kk * (kk - 1.0) / 2.0;
      report.log_expected =
          pairs == 0.0 ? log_choose : (p == 0.0 ? kNegInf : log_choose + pairs * std::log(p));
      break;
    }
    case MomentMethod::closed_form_sqrt: {
      const double r = std::get<family::SqrtFamily>(spec.family()).r;
      report.log_expected = log_choose - kk * std::log(r * (kk - 1.0) + 1.0);
      break;
    }
    case MomentMethod::closed_form_poly: {
      const double r = std::get<family::PolyFamily>(spec.family()).r;
      report.log_expected =
          log_choose + kk * (std::lgamma(1.0 + 1.0 / r) - log_gamma_ratio(kk, 1.0 / r));
      break;
    }
    case MomentMethod::quadrature: {
      const double log_i = log_profile_moment_quadrature(spec, kk - 1.0);
      report.log_expected = log_i == kNegInf ? kNegInf : log_choose + kk * log_i;
      break;
    }
  }
  return report;
}

CutoffResult first_moment_cutoff(const GraphonSpec& spec, std::uint64_t n) {
  if (n < 2) throw DomainError("cutoff needs n >= 2");
  moment_method(spec);
  constexpr std::uint64_t kConfirm = 10;
  CutoffResult result;
  result.n = n;
  auto value = [&](std::uint64_t k) { return log_expected_cliques(spec, n, k).log_expected; };

  std::uint64_t k = 2;
  while (k <= n) {
    if (value(k) >= 0.0) {
      ++k;
      continue;
    }
    // Candidate root; the next values must stay negative too.
    std::uint64_t wobble = 0;
    for (std::uint64_t j = k + 1; j <= std::min(n, k + kConfirm); ++j)
      if (value(j) >= 0.0) {
        wobble = j;
        break;
      }
    if (wobble == 0) break;
    k = wobble + 1;
  }

  if (k > n) {
    result.k_star = n + 1;
    result.degenerate = true;
    result.certificate_first_k = n;
    result.certificate.push_back(value(n));
    return result;
  }
  result.k_star = k;
  result.certificate_first_k = k - 1;
  for (std::uint64_t j = k - 1; j <= std::min(n, k + kConfirm); ++j)
    result.certificate.push_back(value(j));
  return result;
}

VarianceReport variance_ratio(const GraphonSpec& spec, std::uint64_t n,
                              std::uint64_t k) {
  if (k < 1) throw DomainError("clique size k must be at least 1");
  if (2 * k > n)
    throw DomainError("variance ratio needs 2k <= n (k=" + std::to_string(k) +
                      ", n=" + std::to_string(n) + ")");
  const MomentMethod method = moment_method(spec);
  const double nn = static_cast<double>(n), kk = static_cast<double>(k);

  // ln I(m) with the per-family closed forms where available.
  auto log_moment = [&](double m) {
    if (method == MomentMethod::quadrature) return log_profile_moment_quadrature(spec, m);
    return closed_form_log_moment(spec, m);
  };
  const double log_single = log_moment(kk - 1.0);
  if (log_single == kNegInf)
    throw DomainError("E[X_k] = 0 for '" + spec.to_string() +
                      "'; the variance ratio is undefined");

  VarianceReport report;
  report.n = n;
  report.k = k;
  report.log_ratio = kNegInf;
  const double log_total = log_binomial(nn, kk);
  for (std::uint64_t i = 0; i <= k; ++i) {
    const double ii = static_cast<double>(i);
    double term = log_binomial(kk, ii) + log_binomial(nn - kk, kk - ii) - log_total;
    if (i > 0) {
      double log_overlap;
      if (method == MomentMethod::closed_form_sqrt) {
        const double r = std::get<family::SqrtFamily>(spec.family()).r;
        log_overlap = 2.0 * ii * std::log(r * (kk - 1.0) + 1.0) -
                      ii * std::log(r * (2.0 * kk - ii - 1.0) + 1.0);
      } else {
        log_overlap = -2.0 * ii * log_single + ii * log_moment(2.0 * kk - ii - 1.0);
      }
      term += log_overlap;
    }
    report.per_i_terms.push_back(term);
    report.log_ratio = log_add(report.log_ratio, term);
  }
  return report;
}

PredictedConstants predicted_constants(const GraphonSpec& spec) {
  if (spec.restriction())
    throw UnsupportedSpecError("predicted constants need an unrestricted spec");
  const double e = std::numbers::e;
  if (const auto* s = std::get_if<family::SqrtFamily>(&spec.family()))
    return {std::sqrt(e / s->r), std::pow(12.0 * e * s->r, -0.5), 0.5};
  if (const auto* p = std::get_if<family::PolyFamily>(&spec.family())) {
    const double r = p->r;
    const double exponent = r / (r + 1.0);
    return {std::pow(std::tgamma(1.0 + 1.0 / r) * e, exponent),
            0.5 * std::exp(-2.0 / (1.0 + r)), exponent};
  }
  throw UnsupportedSpecError("predicted constants are only known for sqrt and poly, not '" +
                             spec.to_string() + "'");
}

}  // namespace graphon_lab
