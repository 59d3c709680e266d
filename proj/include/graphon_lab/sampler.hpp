#pragma once

// W-random graph generation: n iid uniform latent coordinates, then each pair
// (i,j) joined independently with probability W(x_i, x_j).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "graphon_lab/bit_matrix.hpp"
#include "graphon_lab/graphon.hpp"

namespace graphon_lab {

inline constexpr std::size_t kDefaultMaxVertices = 32768;

struct FullMode {};

// Only the vertices whose coordinate falls in
// [center - threshold, center + threshold] ∩ [0,1] are simulated.
struct BelowThreshold {
  double threshold;
  double center = 0.0;
};

using SampleMode = std::variant<FullMode, BelowThreshold>;

struct SampleConfig {
  GraphonSpec spec;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  SampleMode mode = FullMode{};
  std::size_t max_vertices = kDefaultMaxVertices;
};

// Record of binomial thinning: `population` vertices were conceptually drawn,
// of which the simulated ones are those falling inside `window`.
struct Thinning {
  std::size_t population;
  Interval window;
};

class SampledGraph {
 public:
  SampledGraph() = default;
  SampledGraph(std::vector<double> coords, std::vector<std::uint32_t> perm,
               BitMatrix adjacency, std::uint64_t seed, std::string spec_tag,
               std::optional<Thinning> thinning = std::nullopt);

  // Graph with the given edges and no latent coordinates (tests, import).
  static SampledGraph from_edges(
      std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
      std::vector<double> coords = {});

  std::size_t n() const { return adjacency_.size(); }
  bool has_coords() const { return coords_.size() == n() && n() > 0; }
  // Latent coordinates in vertex order, ascending.
  const std::vector<double>& coords() const { return coords_; }
  // permutation()[v] is the draw index of vertex v before sorting.
  const std::vector<std::uint32_t>& permutation() const { return perm_; }
  const BitMatrix& adjacency() const { return adjacency_; }
  bool adjacent(std::size_t i, std::size_t j) const { return adjacency_.test(i, j); }
  std::size_t degree(std::size_t v) const { return adjacency_.row_count(v); }
  std::size_t edge_count() const;
  std::uint64_t seed() const { return seed_; }
  const std::string& spec_tag() const { return spec_tag_; }
  const std::optional<Thinning>& thinning() const { return thinning_; }

  // Subgraph induced on `vertices` (ascending); coordinates carried along.
  SampledGraph induced(const std::vector<std::size_t>& vertices) const;

 private:
  std::vector<double> coords_;
  std::vector<std::uint32_t> perm_;
  BitMatrix adjacency_;
  std::uint64_t seed_ = 0;
  std::string spec_tag_;
  std::optional<Thinning> thinning_;
};

// Full two-stage sample. Throws CapacityError above config.max_vertices.
SampledGraph sample(const SampleConfig& config);

// Binomially thinned sample: m ~ Bin(n, L) vertices uniform on the window,
// edges from the unrestricted kernel at the true coordinates.
SampledGraph sample_below_threshold(const SampleConfig& config);

// Dispatches on config.mode.
SampledGraph sample_graph(const SampleConfig& config);

struct CoupledPair {
  SampledGraph lower;
  SampledGraph upper;
  bool shared_coords = true;
  bool dominance_certified = false;
};

// Shared coordinates and one shared uniform u_ij per pair; an edge is present
// in each graph iff u_ij is below that graph's kernel value.
CoupledPair sample_coupled(const GraphonSpec& lower_spec,
                           const GraphonSpec& upper_spec, std::size_t n,
                           std::uint64_t seed,
                           std::size_t max_vertices = kDefaultMaxVertices);

// True iff every edge of `sub` is an edge of `super` (same vertex count).
bool is_subgraph(const SampledGraph& sub, const SampledGraph& super);

// Number of coordinates in [lo, hi); the right end is closed at hi = 1.
std::size_t count_in_interval(const SampledGraph& graph, const Interval& window);
std::size_t count_in_interval(const std::vector<double>& sorted_coords,
                              const Interval& window);

// Length of the shortest interval containing m sample points.
double min_window_length(const SampledGraph& graph, std::size_t m);
double min_window_length(const std::vector<double>& sorted_coords,
                         std::size_t m);

// Text edge list (`n m` header, then `i j` with i < j) plus `<path>.coords`.
void write_edge_list(const SampledGraph& graph, const std::string& path);
// Reads the edge list and, when present, the companion coordinate file.
SampledGraph read_edge_list(const std::string& path);

}  // namespace graphon_lab
