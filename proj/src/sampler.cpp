#include "graphon_lab/sampler.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "graphon_lab/format.hpp"
#include "graphon_lab/rng.hpp"

namespace graphon_lab {

SampledGraph::SampledGraph(std::vector<double> coords,
                           std::vector<std::uint32_t> perm, BitMatrix adjacency,
                           std::uint64_t seed, std::string spec_tag,
                           std::optional<Thinning> thinning)
    : coords_(std::move(coords)),
      perm_(std::move(perm)),
      adjacency_(std::move(adjacency)),
      seed_(seed),
      spec_tag_(std::move(spec_tag)),
      thinning_(std::move(thinning)) {}

SampledGraph SampledGraph::from_edges(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
    std::vector<double> coords) {
  if (!coords.empty() && coords.size() != n)
    throw ParameterError("coordinate count does not match vertex count");
  if (!std::is_sorted(coords.begin(), coords.end()))
    throw ParameterError("coordinates must be sorted ascending");
  BitMatrix adj(n);
  for (auto [i, j] : edges) {
    if (i >= n || j >= n)
      throw DomainError("edge (" + std::to_string(i) + "," +
                        std::to_string(j) + ") out of range for n=" +
                        std::to_string(n));
    if (i == j) throw ParameterError("self-loop at vertex " + std::to_string(i));
    adj.set_symmetric(i, j);
  }
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  return SampledGraph(std::move(coords), std::move(perm), std::move(adj), 0,
                      "edges");
}

std::size_t SampledGraph::edge_count() const {
  std::size_t twice = 0;
  for (std::size_t v = 0; v < n(); ++v) twice += degree(v);
  return twice / 2;
}

SampledGraph SampledGraph::induced(const std::vector<std::size_t>& vertices) const {
  const std::size_t m = vertices.size();
  BitMatrix adj(m);
  std::vector<double> coords;
  std::vector<std::uint32_t> perm;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b)
      if (adjacent(vertices[a], vertices[b])) adj.set_symmetric(a, b);
    if (has_coords()) coords.push_back(coords_[vertices[a]]);
    perm.push_back(perm_.empty() ? static_cast<std::uint32_t>(vertices[a])
                                 : perm_[vertices[a]]);
  }
  return SampledGraph(std::move(coords), std::move(perm), std::move(adj), seed_,
                      spec_tag_, thinning_);
}

namespace {

void check_capacity(std::size_t n, std::size_t cap) {
  if (n > cap)
    throw CapacityError("n=" + std::to_string(n) +
                        " exceeds the vertex cap of " + std::to_string(cap) +
                        "; use below-threshold sampling or raise the cap");
}

// Draws `m` uniform coordinates on [lo, hi), sorts them, and records where
// each sorted vertex came from.
void draw_coords(Engine& engine, std::size_t m, double lo, double hi,
                 std::vector<double>& coords, std::vector<std::uint32_t>& perm) {
  std::vector<std::pair<double, std::uint32_t>> drawn(m);
  for (std::size_t i = 0; i < m; ++i)
    drawn[i] = {lo + (hi - lo) * uniform01(engine), static_cast<std::uint32_t>(i)};
  std::sort(drawn.begin(), drawn.end());
  coords.resize(m);
  perm.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    coords[i] = drawn[i].first;
    perm[i] = drawn[i].second;
  }
}

// Edge probability for the pair (i, j), i < j. Non-constant rank-1 kernels
// are evaluated through per-vertex weights, which is bit-identical to
// GraphonSpec::evaluate for those families.
class PairKernel {
 public:
  PairKernel(const GraphonSpec& spec, const std::vector<double>& coords,
             bool unit_coords)
      : spec_(spec), coords_(coords) {
    const bool constant = std::holds_alternative<family::Constant>(spec.family());
    if (constant) {
      constant_ = std::get<family::Constant>(spec.family()).p;
    } else if (spec.is_rank1() && unit_coords) {
      weights_.reserve(coords.size());
      for (double x : coords) weights_.push_back(spec.profile(x));
    }
  }

  double operator()(std::size_t i, std::size_t j) const {
    if (constant_) return *constant_;
    if (!weights_.empty()) return weights_[i] * weights_[j];
    return spec_.evaluate(coords_[i], coords_[j]);
  }

 private:
  const GraphonSpec& spec_;
  const std::vector<double>& coords_;
  std::optional<double> constant_;
  std::vector<double> weights_;
};

// Row i gets bits j < i from fresh uniforms, then the lower triangle is
// mirrored. Pair order is fixed: (1,0), (2,0), (2,1), (3,0), ...
BitMatrix draw_edges(Engine& engine, const PairKernel& kernel, std::size_t m) {
  BitMatrix adj(m);
  for (std::size_t i = 1; i < m; ++i) {
    auto row = adj.row(i);
    for (std::size_t j = 0; j < i; ++j)
      if (uniform01(engine) < kernel(j, i))
        row[j / kWordBits] |= Word{1} << (j % kWordBits);
  }
  for (std::size_t i = 1; i < m; ++i) {
    auto row = adj.row(i);
    for (std::size_t w = 0; w <= (i - 1) / kWordBits; ++w) {
      Word bits = row[w];
      while (bits) {
        std::size_t j = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (j < i) adj.set(j, i);
      }
    }
  }
  return adj;
}

}  // namespace

SampledGraph sample(const SampleConfig& config) {
  if (!std::holds_alternative<FullMode>(config.mode))
    throw PreconditionError("sample: config is not in full mode");
  check_capacity(config.n, config.max_vertices);
  Engine engine(config.seed);
  std::vector<double> coords;
  std::vector<std::uint32_t> perm;
  draw_coords(engine, config.n, 0.0, 1.0, coords, perm);
  PairKernel kernel(config.spec, coords, true);
  BitMatrix adj = draw_edges(engine, kernel, config.n);
  return SampledGraph(std::move(coords), std::move(perm), std::move(adj),
                      config.seed, config.spec.to_string());
}

SampledGraph sample_below_threshold(const SampleConfig& config) {
  const auto* mode = std::get_if<BelowThreshold>(&config.mode);
  if (!mode) throw PreconditionError("sample_below_threshold: config is in full mode");
  if (!(mode->threshold > 0.0 && mode->threshold <= 1.0))
    throw DomainError("threshold must lie in (0,1], got " +
                      format_double(mode->threshold));
  const double lo = std::max(0.0, mode->center - mode->threshold);
  const double hi = std::min(1.0, mode->center + mode->threshold);
  if (!(lo < hi))
    throw DomainError("threshold window around " + format_double(mode->center) +
                      " has empty intersection with [0,1]");
  const Interval window(lo, hi);

  Engine engine(config.seed);
  std::size_t m = config.n;
  if (window.length() < 1.0) {
    std::binomial_distribution<std::size_t> count(config.n, window.length());
    m = count(engine);
  }
  check_capacity(m, config.max_vertices);
  std::vector<double> coords;
  std::vector<std::uint32_t> perm;
  draw_coords(engine, m, lo, hi, coords, perm);
  PairKernel kernel(config.spec, coords, true);
  BitMatrix adj = draw_edges(engine, kernel, m);
  return SampledGraph(std::move(coords), std::move(perm), std::move(adj),
                      config.seed, config.spec.to_string(),
                      Thinning{config.n, window});
}

SampledGraph sample_graph(const SampleConfig& config) {
  if (std::holds_alternative<FullMode>(config.mode)) return sample(config);
  return sample_below_threshold(config);
}

CoupledPair sample_coupled(const GraphonSpec& lower_spec,
                           const GraphonSpec& upper_spec, std::size_t n,
                           std::uint64_t seed, std::size_t max_vertices) {
  check_capacity(n, max_vertices);
  Engine engine(seed);
  std::vector<double> coords;
  std::vector<std::uint32_t> perm;
  draw_coords(engine, n, 0.0, 1.0, coords, perm);
  PairKernel low(lower_spec, coords, true);
  PairKernel up(upper_spec, coords, true);
  BitMatrix a(n), b(n);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      double u = uniform01(engine);
      if (u < low(j, i)) a.set_symmetric(i, j);
      if (u < up(j, i)) b.set_symmetric(i, j);
    }
  CoupledPair pair{
      SampledGraph(coords, perm, std::move(a), seed, lower_spec.to_string()),
      SampledGraph(coords, perm, std::move(b), seed, upper_spec.to_string()),
      true, dominated_on_grid(lower_spec, upper_spec)};
  return pair;
}

bool is_subgraph(const SampledGraph& sub, const SampledGraph& super) {
  if (sub.n() != super.n()) return false;
  for (std::size_t v = 0; v < sub.n(); ++v) {
    auto a = sub.adjacency().row(v);
    auto b = super.adjacency().row(v);
    for (std::size_t w = 0; w < a.size(); ++w)
      if (a[w] & ~b[w]) return false;
  }
  return true;
}

std::size_t count_in_interval(const std::vector<double>& coords,
                              const Interval& window) {
  auto first = std::lower_bound(coords.begin(), coords.end(), window.lo());
  auto last = window.hi() >= 1.0
                  ? coords.end()
                  : std::lower_bound(coords.begin(), coords.end(), window.hi());
  return last > first ? static_cast<std::size_t>(last - first) : 0;
}

std::size_t count_in_interval(const SampledGraph& graph, const Interval& window) {
  if (!graph.has_coords() && graph.n() > 0)
    throw PreconditionError("graph has no latent coordinates");
  return count_in_interval(graph.coords(), window);
}

double min_window_length(const std::vector<double>& coords, std::size_t m) {
  if (m < 2 || m > coords.size())
    throw DomainError("min_window_length: m=" + std::to_string(m) +
                      " must lie in [2, " + std::to_string(coords.size()) + "]");
  double best = coords[m - 1] - coords[0];
  for (std::size_t i = 1; i + m - 1 < coords.size(); ++i)
    best = std::min(best, coords[i + m - 1] - coords[i]);
  return best;
}

double min_window_length(const SampledGraph& graph, std::size_t m) {
  if (!graph.has_coords())
    throw PreconditionError("graph has no latent coordinates");
  return min_window_length(graph.coords(), m);
}

void write_edge_list(const SampledGraph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << graph.n() << ' ' << graph.edge_count() << '\n';
  for (std::size_t i = 0; i < graph.n(); ++i)
    for (std::size_t j = i + 1; j < graph.n(); ++j)
      if (graph.adjacent(i, j)) out << i << ' ' << j << '\n';
  if (graph.has_coords()) {
    std::ofstream coords(path + ".coords");
    if (!coords) throw ParseError("cannot write '" + path + ".coords'");
    for (double x : graph.coords()) coords << format_double(x) << '\n';
  }
}

SampledGraph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  std::size_t n = 0, m = 0;
  if (!(in >> n >> m)) throw ParseError(path + ": expected header `n m`");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(m);
  for (std::size_t e = 0; e < m; ++e) {
    std::size_t i, j;
    if (!(in >> i >> j))
      throw ParseError(path + ": expected " + std::to_string(m) +
                       " edges, found " + std::to_string(e));
    edges.emplace_back(i, j);
  }
  std::vector<double> coords;
  if (std::filesystem::exists(path + ".coords")) {
    std::ifstream cin(path + ".coords");
    double x;
    while (cin >> x) coords.push_back(x);
    if (coords.size() != n)
      throw ParseError(path + ".coords: expected " + std::to_string(n) +
                       " coordinates, found " + std::to_string(coords.size()));
  }
  return SampledGraph::from_edges(n, edges, std::move(coords));
}

}  // namespace graphon_lab
