#pragma once

// Clique numbers of sampled graphs: an exact coloring-bounded branch and
// bound, the constructive threshold-greedy lower bound, and a degree-greedy
// baseline.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graphon_lab/graphon.hpp"
#include "graphon_lab/sampler.hpp"

namespace graphon_lab {

enum class CliqueMethod { exact, threshold_greedy, degree_greedy };
enum class SolveStatus { optimal, lower_bound, budget_exceeded };

std::string to_string(CliqueMethod method);
std::string to_string(SolveStatus status);
CliqueMethod parse_clique_method(const std::string& text);

struct CliqueStats {
  std::uint64_t nodes = 0;
  std::uint64_t missing_edges_deleted = 0;
  double elapsed_ms = 0.0;
};

struct CliqueResult {
  std::vector<std::size_t> vertices;  // ascending vertex ids
  std::size_t size = 0;
  CliqueMethod method = CliqueMethod::exact;
  SolveStatus status = SolveStatus::optimal;
  CliqueStats stats;
  // Non-fatal condition, e.g. an empty threshold window.
  std::string warning;
};

struct SolveBudget {
  std::uint64_t max_nodes = 10'000'000;
  double max_millis = 60'000.0;
};

CliqueResult exact_max_clique(const SampledGraph& graph,
                              const SolveBudget& budget = {});

// True iff the vertices are pairwise adjacent. Throws DomainError on ids >= n.
bool verify_clique(const SampledGraph& graph,
                   const std::vector<std::size_t>& vertices);

// Vertices with |x_i - center| <= threshold, then repeatedly drop the vertex
// covering the most missing edges (ties: lowest id) until none remain.
CliqueResult threshold_greedy_clique(const SampledGraph& graph, double center,
                                     double threshold);

struct ThresholdChoice {
  double center;
  double threshold;
};

// Window used by the constructive lower bound for the built-in families.
ThresholdChoice default_threshold(const GraphonSpec& spec, std::size_t n);

CliqueResult degree_greedy_clique(const SampledGraph& graph);

// Number of colors of a greedy sequential coloring in degeneracy order; an
// upper bound on the clique number.
std::size_t coloring_upper_bound(const SampledGraph& graph);

}  // namespace graphon_lab
