#include "graphon_lab/clique.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <cmath>
#include <numbers>
#include <numeric>

#include "graphon_lab/format.hpp"

namespace graphon_lab {

std::string to_string(CliqueMethod method) {
  switch (method) {
    case CliqueMethod::exact: return "exact";
    case CliqueMethod::threshold_greedy: return "threshold_greedy";
    case CliqueMethod::degree_greedy: return "degree_greedy";
  }
  return "exact";
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::lower_bound: return "lower_bound";
    case SolveStatus::budget_exceeded: return "budget_exceeded";
  }
  return "optimal";
}

CliqueMethod parse_clique_method(const std::string& text) {
  if (text == "exact") return CliqueMethod::exact;
  if (text == "threshold_greedy") return CliqueMethod::threshold_greedy;
  if (text == "degree_greedy") return CliqueMethod::degree_greedy;
  throw ParseError("unknown clique method '" + text + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

inline bool any(std::span<const Word> bits) {
  for (Word w : bits)
    if (w) return true;
  return false;
}

// Smallest-last (degeneracy) order: result[0] is removed last, i.e. sits in
// the densest core.
std::vector<std::size_t> degeneracy_order(const SampledGraph& g) {
  const std::size_t n = g.n();
  std::vector<std::size_t> degree(n);
  for (std::size_t v = 0; v < n; ++v) degree[v] = g.degree(v);
  std::vector<bool> removed(n, false);
  std::vector<std::size_t> order(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!removed[v] && (best == n || degree[v] < degree[best])) best = v;
    removed[best] = true;
    order[n - 1 - step] = best;
    auto row = g.adjacency().row(best);
    for (std::size_t w = 0; w < row.size(); ++w) {
      Word bits = row[w];
      while (bits) {
        std::size_t u = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (!removed[u]) --degree[u];
      }
    }
  }
  return order;
}

// Branch and bound over renumbered bit rows. Vertex i of the local numbering
// is order[i] of the input graph; color classes are built greedily from the
// lowest local index, and branching runs from the highest color down.
class CliqueSearch {
 public:
  CliqueSearch(const SampledGraph& g, const SolveBudget& budget)
      : budget_(budget), n_(g.n()), words_(words_for(g.n())) {
    order_ = degeneracy_order(g);
    adj_.assign(n_ * words_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i != j && g.adjacent(order_[i], order_[j]))
          adj_[i * words_ + j / kWordBits] |= Word{1} << (j % kWordBits);
  }

  void seed_incumbent(const std::vector<std::size_t>& clique) {
    if (clique.size() <= best_.size()) return;
    std::vector<std::size_t> local;
    for (std::size_t v : clique)
      local.push_back(static_cast<std::size_t>(
          std::find(order_.begin(), order_.end(), v) - order_.begin()));
    best_ = std::move(local);
  }

  CliqueResult run() {
    start_ = Clock::now();
    CliqueResult result;
    result.method = CliqueMethod::exact;
    if (n_ > 0) {
      std::vector<Word> all(words_, 0);
      for (std::size_t i = 0; i < n_; ++i) all[i / kWordBits] |= Word{1} << (i % kWordBits);
      if (best_.empty()) best_ = {0};
      current_.reserve(n_);
      expand(all, 0);
    }
    for (std::size_t v : best_) result.vertices.push_back(order_[v]);
    std::sort(result.vertices.begin(), result.vertices.end());
    result.size = result.vertices.size();
    result.status = aborted_ ? SolveStatus::budget_exceeded : SolveStatus::optimal;
    result.stats.nodes = nodes_;
    result.stats.elapsed_ms = millis_since(start_);
    return result;
  }

 private:
  std::span<const Word> row(std::size_t v) const {
    return {adj_.data() + v * words_, words_};
  }

  bool out_of_budget() {
    if (nodes_ >= budget_.max_nodes) return true;
    if ((nodes_ & 1023u) == 0 && millis_since(start_) > budget_.max_millis)
      return true;
    return false;
  }

  struct Frame {
    std::vector<Word> uncolored;
    std::vector<Word> classes;  // (kmin - 1) bitsets, back to back
    std::vector<Word> remaining;
    std::vector<Word> next;
    std::vector<std::size_t> verts;
    std::vector<std::size_t> colors;
  };

  Frame& frame(std::size_t depth) {
    while (frames_.size() <= depth) frames_.emplace_back();
    Frame& f = frames_[depth];
    f.uncolored.resize(words_);
    f.remaining.resize(words_);
    f.next.resize(words_);
    return f;
  }

  // Vertex u is the only member of `cls` adjacent to v; returns n_ otherwise.
  std::size_t sole_neighbor(std::size_t v, const Word* cls) const {
    auto nbr = row(v);
    std::size_t found = n_;
    for (std::size_t w = 0; w < words_; ++w) {
      Word hit = cls[w] & nbr[w];
      if (!hit) continue;
      if (found != n_ || (hit & (hit - 1))) return n_;
      found = w * kWordBits + static_cast<std::size_t>(std::countr_zero(hit));
    }
    return found;
  }

  bool independent_of(std::size_t u, const Word* cls) const {
    auto nbr = row(u);
    for (std::size_t w = 0; w < words_; ++w)
      if (cls[w] & nbr[w]) return false;
    return true;
  }

  // Greedy class-by-class coloring. Classes below kmin cannot lift the
  // current clique past the incumbent, so only their complement is recorded
  // (with colors kmin, kmin+1, ...). Before a vertex is pushed past kmin, one
  // recoloring step tries to swap it into a lower class.
  void color_candidates(const std::vector<Word>& candidates, std::size_t kmin,
                        Frame& f) {
    f.verts.clear();
    f.colors.clear();
    std::copy(candidates.begin(), candidates.end(), f.uncolored.begin());
    const std::size_t low = kmin - 1;
    f.classes.assign(low * words_, 0);
    std::size_t built = 0;
    std::vector<Word>& q = f.next;
    for (; built < low; ++built) {
      if (!any(f.uncolored)) return;
      Word* cls = f.classes.data() + built * words_;
      std::copy(f.uncolored.begin(), f.uncolored.end(), q.begin());
      for (std::size_t w = 0; w < words_; ++w) {
        while (q[w]) {
          std::size_t v = w * kWordBits + static_cast<std::size_t>(std::countr_zero(q[w]));
          Word bit = Word{1} << (v % kWordBits);
          cls[w] |= bit;
          f.uncolored[w] &= ~bit;
          q[w] &= ~bit;
          auto nbr = row(v);
          for (std::size_t k = w; k < words_; ++k) q[k] &= ~nbr[k];
        }
      }
    }
    if (!any(f.uncolored)) return;

    if (low > 0) {
      for (std::size_t w = 0; w < words_; ++w) {
        Word bits = f.uncolored[w];
        while (bits) {
          std::size_t v = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
          bits &= bits - 1;
          for (std::size_t c1 = 0; c1 < low; ++c1) {
            Word* from = f.classes.data() + c1 * words_;
            std::size_t u = sole_neighbor(v, from);
            if (u == n_) continue;
            bool moved = false;
            for (std::size_t c2 = 0; c2 < low && !moved; ++c2) {
              if (c2 == c1) continue;
              Word* to = f.classes.data() + c2 * words_;
              if (!independent_of(u, to)) continue;
              from[u / kWordBits] &= ~(Word{1} << (u % kWordBits));
              to[u / kWordBits] |= Word{1} << (u % kWordBits);
              from[w] |= Word{1} << (v % kWordBits);
              f.uncolored[w] &= ~(Word{1} << (v % kWordBits));
              moved = true;
            }
            if (moved) break;
          }
        }
      }
    }

    std::size_t color = low;
    std::size_t lo_word = 0;
    while (true) {
      while (lo_word < words_ && f.uncolored[lo_word] == 0) ++lo_word;
      if (lo_word == words_) break;
      ++color;
      std::copy(f.uncolored.begin(), f.uncolored.end(), q.begin());
      for (std::size_t w = lo_word; w < words_; ++w) {
        while (q[w]) {
          std::size_t v = w * kWordBits + static_cast<std::size_t>(std::countr_zero(q[w]));
          Word bit = Word{1} << (v % kWordBits);
          f.uncolored[w] &= ~bit;
          q[w] &= ~bit;
          auto nbr = row(v);
          for (std::size_t k = w; k < words_; ++k) q[k] &= ~nbr[k];
          f.verts.push_back(v);
          f.colors.push_back(color);
        }
      }
    }
  }

  void expand(const std::vector<Word>& candidates, std::size_t depth) {
    if (aborted_) return;
    ++nodes_;
    if (out_of_budget()) {
      aborted_ = true;
      return;
    }
    Frame& f = frame(depth);
    const std::size_t have = current_.size();
    const std::size_t kmin = best_.size() + 1 > have ? best_.size() + 1 - have : 1;
    color_candidates(candidates, kmin, f);

    std::copy(candidates.begin(), candidates.end(), f.remaining.begin());
    for (std::size_t idx = f.verts.size(); idx-- > 0;) {
      if (current_.size() + f.colors[idx] <= best_.size()) return;
      const std::size_t v = f.verts[idx];
      current_.push_back(v);
      auto nbr = row(v);
      for (std::size_t w = 0; w < words_; ++w) f.next[w] = f.remaining[w] & nbr[w];
      if (!any(f.next)) {
        if (current_.size() > best_.size()) best_ = current_;
      } else {
        expand(f.next, depth + 1);
        if (aborted_) {
          current_.pop_back();
          return;
        }
      }
      current_.pop_back();
      f.remaining[v / kWordBits] &= ~(Word{1} << (v % kWordBits));
    }
  }

  SolveBudget budget_;
  std::size_t n_;
  std::size_t words_;
  std::vector<std::size_t> order_;
  std::vector<Word> adj_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
  std::deque<Frame> frames_;  // stable references across growth
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  Clock::time_point start_;
};

}  // namespace

CliqueResult exact_max_clique(const SampledGraph& graph, const SolveBudget& budget) {
  if (budget.max_nodes == 0 || !(budget.max_millis > 0.0))
    throw ParameterError("solve budget must be positive");
  CliqueSearch search(graph, budget);
  search.seed_incumbent(degree_greedy_clique(graph).vertices);
  return search.run();
}

bool verify_clique(const SampledGraph& graph,
                   const std::vector<std::size_t>& vertices) {
  for (std::size_t v : vertices)
    if (v >= graph.n())
      throw DomainError("vertex id " + std::to_string(v) +
                        " out of range for n=" + std::to_string(graph.n()));
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      if (vertices[a] == vertices[b] || !graph.adjacent(vertices[a], vertices[b]))
        return false;
  return true;
}

CliqueResult threshold_greedy_clique(const SampledGraph& graph, double center,
                                     double threshold) {
  if (!(threshold > 0.0))
    throw ParameterError("threshold must be positive, got " + format_double(threshold));
  if (!graph.has_coords() && graph.n() > 0)
    throw PreconditionError("threshold greedy needs latent coordinates");
  const auto start = Clock::now();
  CliqueResult result;
  result.method = CliqueMethod::threshold_greedy;
  result.status = SolveStatus::lower_bound;

  const auto& coords = graph.coords();
  auto first = std::lower_bound(coords.begin(), coords.end(), center - threshold);
  auto last = std::upper_bound(coords.begin(), coords.end(), center + threshold);
  std::vector<std::size_t> window;
  for (auto it = first; it < last; ++it)
    window.push_back(static_cast<std::size_t>(it - coords.begin()));
  if (window.empty()) {
    result.warning = "empty threshold window";
    result.stats.elapsed_ms = millis_since(start);
    return result;
  }

  // Missing-edge graph on the window, in local indices.
  const std::size_t s = window.size();
  const std::size_t words = words_for(s);
  std::vector<Word> missing(s * words, 0);
  std::vector<std::size_t> missing_degree(s, 0);
  std::uint64_t missing_total = 0;
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = a + 1; b < s; ++b)
      if (!graph.adjacent(window[a], window[b])) {
        missing[a * words + b / kWordBits] |= Word{1} << (b % kWordBits);
        missing[b * words + a / kWordBits] |= Word{1} << (a % kWordBits);
        ++missing_degree[a];
        ++missing_degree[b];
        ++missing_total;
      }

  std::vector<bool> alive(s, true);
  while (missing_total > 0) {
    std::size_t pick = 0;
    for (std::size_t a = 1; a < s; ++a)
      if (missing_degree[a] > missing_degree[pick]) pick = a;
    alive[pick] = false;
    missing_total -= missing_degree[pick];
    result.stats.missing_edges_deleted += missing_degree[pick];
    missing_degree[pick] = 0;
    for (std::size_t w = 0; w < words; ++w) {
      Word bits = missing[pick * words + w];
      while (bits) {
        std::size_t b = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (alive[b]) {
          --missing_degree[b];
          missing[b * words + pick / kWordBits] &= ~(Word{1} << (pick % kWordBits));
        }
      }
    }
  }
  for (std::size_t a = 0; a < s; ++a)
    if (alive[a]) result.vertices.push_back(window[a]);
  result.size = result.vertices.size();
  result.stats.elapsed_ms = millis_since(start);
  return result;
}

ThresholdChoice default_threshold(const GraphonSpec& spec, std::size_t n) {
  if (n < 2) throw ParameterError("default threshold needs n >= 2");
  if (spec.restriction())
    throw UnsupportedSpecError("no default threshold for restricted spec '" +
                               spec.to_string() + "'; pass --threshold/--center");
  const double nn = static_cast<double>(n);
  const double e = std::numbers::e;
  auto sqrt_rule = [&](double r) {
    return ThresholdChoice{0.0, std::pow(3.0 * e * r, -0.5) / std::sqrt(nn)};
  };
  auto poly_rule = [&](double r, double population) {
    return std::exp(-2.0 / (1.0 + r)) * std::pow(population, -1.0 / (r + 1.0));
  };
  ThresholdChoice choice = std::visit(
      [&](const auto& f) -> ThresholdChoice {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::SqrtFamily>) {
          return sqrt_rule(f.r);
        } else if constexpr (std::is_same_v<F, family::PolyFamily>) {
          return {0.0, poly_rule(f.r, nn)};
        } else if constexpr (std::is_same_v<F, family::HolderFamily>) {
          // U_{alpha,C} on n vertices behaves like U_alpha on n C^{-1/alpha}
          // vertices in coordinates stretched by C^{1/alpha}.
          const double shrink = std::pow(f.c, -1.0 / f.alpha);
          return {0.0, shrink * poly_rule(f.alpha, nn * shrink)};
        } else if constexpr (std::is_same_v<F, family::Line>) {
          return {0.5, std::log(nn) / std::sqrt(nn)};
        } else if constexpr (std::is_same_v<F, family::FlatExp>) {
          return {0.0, 1.0 / std::sqrt(std::log(nn))};
        } else if constexpr (std::is_same_v<F, family::Oscillating>) {
          return sqrt_rule(1.0);
        } else {
          throw UnsupportedSpecError("no known maximizer for '" + spec.to_string() +
                                     "'; pass an explicit threshold and center");
        }
      },
      spec.family());
  choice.threshold = std::min(choice.threshold, 1.0);
  return choice;
}

CliqueResult degree_greedy_clique(const SampledGraph& graph) {
  const auto start = Clock::now();
  CliqueResult result;
  result.method = CliqueMethod::degree_greedy;
  result.status = SolveStatus::lower_bound;
  const std::size_t n = graph.n();
  std::vector<std::size_t> degree(n);
  for (std::size_t v = 0; v < n; ++v) degree[v] = graph.degree(v);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
  std::vector<Word> candidates(words_for(n), 0);
  for (std::size_t v = 0; v < n; ++v) candidates[v / kWordBits] |= Word{1} << (v % kWordBits);
  for (std::size_t v : order) {
    if (!((candidates[v / kWordBits] >> (v % kWordBits)) & 1u)) continue;
    result.vertices.push_back(v);
    auto nbr = graph.adjacency().row(v);
    for (std::size_t w = 0; w < candidates.size(); ++w) candidates[w] &= nbr[w];
  }
  std::sort(result.vertices.begin(), result.vertices.end());
  result.size = result.vertices.size();
  result.stats.elapsed_ms = millis_since(start);
  return result;
}

std::size_t coloring_upper_bound(const SampledGraph& graph) {
  const std::size_t n = graph.n();
  if (n == 0) return 0;
  std::vector<std::size_t> order = degeneracy_order(graph);
  // Each color class is a bitset of its members.
  std::vector<std::vector<Word>> classes;
  const std::size_t words = words_for(n);
  for (std::size_t v : order) {
    auto nbr = graph.adjacency().row(v);
    bool placed = false;
    for (auto& cls : classes) {
      bool clash = false;
      for (std::size_t w = 0; w < words && !clash; ++w) clash = (cls[w] & nbr[w]) != 0;
      if (!clash) {
        cls[v / kWordBits] |= Word{1} << (v % kWordBits);
        placed = true;
        break;
      }
    }
    if (!placed) {
      classes.emplace_back(words, 0);
      classes.back()[v / kWordBits] |= Word{1} << (v % kWordBits);
    }
  }
  return classes.size();
}

}  // namespace graphon_lab
