#pragma once

// Finite-step estimates of directional Dini derivatives at diagonal points
// (a,a), and a heuristic regime classifier built on top of them. The
// classifier mirrors the asymptotic statements in terms of thresholds on
// difference quotients at small steps; it is a measurement, not a proof.

#include <array>
#include <string>
#include <vector>

#include "graphon_lab/graphon.hpp"

namespace graphon_lab {

using Direction = std::array<double, 2>;

struct DiniOptions {
  // Number of smallest steps used for the sup/inf estimates.
  std::size_t tail = 4;
  // |quotient| above this at the smallest step (and still growing) counts as
  // divergent to -infinity.
  double divergence_ceiling = 50.0;
  // |quotient| below this at the two smallest steps counts as zero.
  double zero_tolerance = 0.05;
  // Bounded regime: every estimate lies in [-max_slope, -min_slope].
  double min_slope = 0.05;
  double max_slope = 50.0;
  // Directions scanned by classify_regime.
  std::size_t fan_size = 16;
  // Descending steps; empty means default_h_grid().
  std::vector<double> h_grid;
};

// 1e-2, 1e-3, ..., 1e-8.
std::vector<double> default_h_grid();

struct DiniEstimate {
  double a = 0.0;
  Direction direction{};
  std::vector<double> h_grid;
  std::vector<double> quotients;
  double sup_estimate = 0.0;
  double inf_estimate = 0.0;
  bool divergent = false;
};

DiniEstimate estimate_dini(const GraphonSpec& spec, double a,
                           const Direction& direction,
                           const std::vector<double>& h_grid,
                           const DiniOptions& options = {});

enum class Regime { theta_sqrt, omega_sqrt, o_sqrt, unknown };

std::string to_string(Regime regime);

struct RegimeReport {
  Regime regime = Regime::unknown;
  std::vector<DiniEstimate> fan;
  DiniOptions options;
};

// Inward unit directions from (a,a): the feasible quadrant at the corners,
// the full circle otherwise.
std::vector<Direction> direction_fan(double a, std::size_t count);

RegimeReport classify_regime(const GraphonSpec& spec, double a,
                             const DiniOptions& options = {});

}  // namespace graphon_lab
