#include "graphon_lab/dini.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "graphon_lab/format.hpp"

namespace graphon_lab {

std::vector<double> default_h_grid() {
  std::vector<double> grid;
  for (int e = 2; e <= 8; ++e) grid.push_back(std::pow(10.0, -e));
  return grid;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::theta_sqrt: return "theta_sqrt";
    case Regime::omega_sqrt: return "omega_sqrt";
    case Regime::o_sqrt: return "o_sqrt";
    case Regime::unknown: return "unknown";
  }
  return "unknown";
}

DiniEstimate estimate_dini(const GraphonSpec& spec, double a,
                           const Direction& direction,
                           const std::vector<double>& h_grid,
                           const DiniOptions& options) {
  if (h_grid.empty()) throw ParameterError("dini: empty step grid");
  for (std::size_t i = 0; i < h_grid.size(); ++i) {
    if (!(h_grid[i] > 0.0))
      throw ParameterError("dini: steps must be positive");
    if (i > 0 && !(h_grid[i] < h_grid[i - 1]))
      throw ParameterError("dini: steps must be strictly decreasing");
  }
  double norm = std::hypot(direction[0], direction[1]);
  if (std::abs(norm - 1.0) > 1e-9)
    throw ParameterError("dini: direction must have unit norm");
  if (!(a >= 0.0 && a <= 1.0))
    throw DomainError("dini: base point (" + format_double(a) +
                      ") outside [0,1]");

  DiniEstimate est;
  est.a = a;
  est.direction = direction;
  est.h_grid = h_grid;
  const double base = spec.evaluate(a, a);
  for (double h : h_grid) {
    double x = a + h * direction[0];
    double y = a + h * direction[1];
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
      throw DomainError("dini: step h=" + format_double(h) +
                        " leaves the unit square");
    est.quotients.push_back((spec.evaluate(x, y) - base) / h);
  }

  const std::size_t n = est.quotients.size();
  const std::size_t tail = std::clamp<std::size_t>(options.tail, 1, n);
  auto first = est.quotients.end() - static_cast<std::ptrdiff_t>(tail);
  est.sup_estimate = *std::max_element(first, est.quotients.end());
  est.inf_estimate = *std::min_element(first, est.quotients.end());

  const double last = std::abs(est.quotients.back());
  bool growing = n >= 3;
  for (std::size_t i = n >= 3 ? n - 2 : n; i < n; ++i)
    growing = growing &&
              std::abs(est.quotients[i]) > std::abs(est.quotients[i - 1]);
  est.divergent = last > options.divergence_ceiling && growing;
  return est;
}

std::vector<Direction> direction_fan(double a, std::size_t count) {
  if (count < 2) throw ParameterError("direction fan needs at least 2 rays");
  std::vector<Direction> fan;
  auto push = [&fan](double theta) {
    Direction d{std::cos(theta), std::sin(theta)};
    for (double& c : d)
      if (std::abs(c) < 1e-12) c = 0.0;
    double norm = std::hypot(d[0], d[1]);
    fan.push_back({d[0] / norm, d[1] / norm});
  };
  const double pi = std::numbers::pi;
  if (a <= 0.0 || a >= 1.0) {
    const double start = a <= 0.0 ? 0.0 : pi;
    for (std::size_t j = 0; j < count; ++j)
      push(start + 0.5 * pi * static_cast<double>(j) /
                       static_cast<double>(count - 1));
  } else {
    for (std::size_t j = 0; j < count; ++j)
      push(2.0 * pi * static_cast<double>(j) / static_cast<double>(count));
  }
  return fan;
}

RegimeReport classify_regime(const GraphonSpec& spec, double a,
                             const DiniOptions& options) {
  if (!(a >= 0.0 && a <= 1.0))
    throw DomainError("classify: point " + format_double(a) +
                      " outside [0,1]");
  double peak = spec.evaluate(a, a);
  if (std::abs(peak - 1.0) > 1e-9)
    throw PreconditionError("classify: W(a,a) = " + format_double(peak) +
                            " is not 1 at a = " + format_double(a));

  std::vector<double> grid =
      options.h_grid.empty() ? default_h_grid() : options.h_grid;
  // Interior points close to the boundary: shrink the grid so that every
  // ray of the full-circle fan stays inside the square.
  if (a > 0.0 && a < 1.0) {
    double room = std::min(a, 1.0 - a);
    if (grid.front() >= room) {
      double scale = 0.5 * room / grid.front();
      for (double& h : grid) h *= scale;
    }
  }

  RegimeReport report;
  report.options = options;
  report.options.h_grid = grid;
  for (const Direction& d : direction_fan(a, options.fan_size))
    report.fan.push_back(estimate_dini(spec, a, d, grid, options));

  auto all = [&report](auto pred) {
    return std::all_of(report.fan.begin(), report.fan.end(), pred);
  };
  const bool bounded = all([&](const DiniEstimate& e) {
    return !e.divergent && e.sup_estimate <= -options.min_slope &&
           e.inf_estimate >= -options.max_slope;
  });
  const bool flat = all([&](const DiniEstimate& e) {
    const auto& q = e.quotients;
    std::size_t n = q.size();
    bool last_two = std::abs(q[n - 1]) < options.zero_tolerance;
    if (n >= 2) last_two = last_two && std::abs(q[n - 2]) < options.zero_tolerance;
    return last_two;
  });
  const bool steep = all([](const DiniEstimate& e) { return e.divergent; });

  if (bounded)
    report.regime = Regime::theta_sqrt;
  else if (flat)
    report.regime = Regime::omega_sqrt;
  else if (steep)
    report.regime = Regime::o_sqrt;
  else
    report.regime = Regime::unknown;
  return report;
}

}  // namespace graphon_lab
