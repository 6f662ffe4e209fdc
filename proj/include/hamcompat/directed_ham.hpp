#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "hamcompat/graph.hpp"
#include "hamcompat/matching.hpp"
#include "hamcompat/rng.hpp"

namespace hamcompat {

struct DirectedLimits {
  Vertex exact_cap = 25;                   // exact search up to this many vertices (at most 32)
  std::int64_t node_budget = 50'000'000;   // exact search nodes
  std::size_t memo_cap = 4'000'000;        // remembered dead (visited set, end) states
  int restarts = 30;                       // heuristic cycle-cover draws
  std::uint64_t seed = 0;
};

enum class DirectedStatus { found, none_certified, not_found };

struct DirectedResult {
  DirectedStatus status = DirectedStatus::not_found;
  std::vector<Vertex> cycle;  // vertex order; the closing arc is implicit
  bool exact = false;         // exact search was used
  std::int64_t nodes = 0;
};

inline bool is_directed_hamilton_cycle(const Digraph& d, const std::vector<Vertex>& order) {
  const Vertex m = d.order();
  if (m < 2 || order.size() != static_cast<std::size_t>(m)) return false;
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  for (Vertex v : order) {
    if (v < 0 || v >= m || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  for (std::size_t i = 0; i < order.size(); ++i)
    if (!d.has_arc(order[i], order[(i + 1) % order.size()])) return false;
  return true;
}

namespace detail {

inline bool strongly_connected(const Digraph& d) {
  const Vertex m = d.order();
  auto reach_all = [&](bool forward) {
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    Vertex count = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : forward ? d.out_neighbors(v) : d.in_neighbors(v))
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    return count == m;
  };
  return reach_all(true) && reach_all(false);
}

class ExactDirectedSearch {
 public:
  ExactDirectedSearch(const Digraph& d, const DirectedLimits& limits) : d_(d), limits_(limits) {
    const auto m = static_cast<std::size_t>(d.order());
    in_.assign(m, 0);
    out_.assign(m, 0);
    for (auto [i, j] : d.arcs()) {
      out_[static_cast<std::size_t>(i)] |= bit(j);
      in_[static_cast<std::size_t>(j)] |= bit(i);
    }
  }

  DirectedResult run() {
    DirectedResult res;
    res.exact = true;
    order_ = {0};
    const bool found = extend(bit(0), 0);
    res.nodes = nodes_;
    if (found) {
      res.status = DirectedStatus::found;
      res.cycle = order_;
    } else {
      res.status = exhausted_ ? DirectedStatus::not_found : DirectedStatus::none_certified;
    }
    return res;
  }

 private:
  static std::uint64_t bit(Vertex v) { return std::uint64_t{1} << v; }

  bool extend(std::uint64_t visited, Vertex end) {
    const Vertex m = d_.order();
    const std::uint64_t all = bit(m) - 1;
    if (visited == all) return (out_[static_cast<std::size_t>(end)] & bit(0)) != 0;
    if (++nodes_ > limits_.node_budget) {
      exhausted_ = true;
      return false;
    }
    const std::uint64_t key = visited * 64 + static_cast<std::uint64_t>(end);
    if (dead_.count(key)) return false;
    const std::uint64_t open = all & ~visited;
    // Every unvisited vertex still needs a way in (from the open set or the
    // current end) and a way out (into the open set or back to vertex 0).
    for (std::uint64_t rest = open; rest; rest &= rest - 1) {
      const auto w = static_cast<std::size_t>(__builtin_ctzll(rest));
      if (!(in_[w] & (open | bit(end))) || !(out_[w] & (open | bit(0)))) return remember(key);
    }
    for (std::uint64_t next = out_[static_cast<std::size_t>(end)] & open; next; next &= next - 1) {
      const auto w = static_cast<Vertex>(__builtin_ctzll(next));
      order_.push_back(w);
      if (extend(visited | bit(w), w)) return true;
      order_.pop_back();
      if (exhausted_) return false;
    }
    return remember(key);
  }

  bool remember(std::uint64_t key) {
    if (dead_.size() < limits_.memo_cap) dead_.insert(key);
    return false;
  }

  const Digraph& d_;
  const DirectedLimits& limits_;
  std::vector<std::uint64_t> in_, out_;
  std::vector<Vertex> order_;
  std::unordered_set<std::uint64_t> dead_;
  std::int64_t nodes_ = 0;
  bool exhausted_ = false;
};

/// Cycle cover from a perfect matching of out-copies to in-copies, then
/// greedy two-arc exchanges that merge cycles.
inline std::optional<std::vector<Vertex>> patch_cycle_cover(const Digraph& d, Rng& rng, bool shuffle_arcs,
                                                            bool& no_cover) {
  const Vertex m = d.order();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(m));
  for (Vertex v = 0; v < m; ++v) {
    adj[static_cast<std::size_t>(v)].assign(d.out_neighbors(v).begin(), d.out_neighbors(v).end());
    if (shuffle_arcs) shuffle(adj[static_cast<std::size_t>(v)], rng);
  }
  const auto cover = max_bipartite_matching(m, m, adj);
  if (cover.size < m) {
    no_cover = true;
    return std::nullopt;
  }
  std::vector<Vertex> succ(cover.left_to_right.begin(), cover.left_to_right.end());
  std::vector<Vertex> pred(static_cast<std::size_t>(m));
  std::vector<int> cycle_of(static_cast<std::size_t>(m));

  while (true) {
    for (Vertex v = 0; v < m; ++v) pred[static_cast<std::size_t>(succ[static_cast<std::size_t>(v)])] = v;
    std::fill(cycle_of.begin(), cycle_of.end(), -1);
    std::vector<std::vector<Vertex>> cycles;
    for (Vertex s = 0; s < m; ++s) {
      if (cycle_of[static_cast<std::size_t>(s)] >= 0) continue;
      cycles.emplace_back();
      for (Vertex v = s; cycle_of[static_cast<std::size_t>(v)] < 0; v = succ[static_cast<std::size_t>(v)]) {
        cycle_of[static_cast<std::size_t>(v)] = static_cast<int>(cycles.size() - 1);
        cycles.back().push_back(v);
      }
    }
    if (cycles.size() == 1) return cycles.front();

    std::vector<std::size_t> by_size(cycles.size());
    for (std::size_t i = 0; i < by_size.size(); ++i) by_size[i] = i;
    std::stable_sort(by_size.begin(), by_size.end(),
                     [&](std::size_t x, std::size_t y) { return cycles[x].size() < cycles[y].size(); });
    bool merged = false;
    for (std::size_t ci : by_size) {
      for (Vertex u : cycles[ci]) {
        const Vertex u_next = succ[static_cast<std::size_t>(u)];
        for (Vertex x : d.out_neighbors(u)) {
          if (cycle_of[static_cast<std::size_t>(x)] == static_cast<int>(ci)) continue;
          const Vertex v = pred[static_cast<std::size_t>(x)];
          if (!d.has_arc(v, u_next)) continue;
          succ[static_cast<std::size_t>(u)] = x;
          succ[static_cast<std::size_t>(v)] = u_next;
          merged = true;
          break;
        }
        if (merged) break;
      }
      if (merged) break;
    }
    if (!merged) return std::nullopt;
  }
}

}  // namespace detail

/// Directed Hamilton cycle search. Up to exact_cap vertices: exhaustive
/// backtracking with reachability pruning and dead-state memo, so a negative
/// answer is a certificate unless the node budget ran out. Above it: seeded
/// cycle-cover patching; a negative answer is only a certificate when no
/// cycle cover exists at all.
inline DirectedResult directed_hamilton(const Digraph& d, const DirectedLimits& limits = {}) {
  const Vertex m = d.order();
  if (m < 2) throw std::invalid_argument("directed Hamilton search needs at least 2 vertices");
  DirectedResult res;
  for (Vertex v = 0; v < m; ++v)
    if (d.out_degree(v) == 0 || d.in_degree(v) == 0) {
      res.status = DirectedStatus::none_certified;
      res.exact = m <= limits.exact_cap;
      return res;
    }
  if (!detail::strongly_connected(d)) {
    res.status = DirectedStatus::none_certified;
    res.exact = m <= limits.exact_cap;
    return res;
  }
  if (m <= std::min<Vertex>(limits.exact_cap, 32)) return detail::ExactDirectedSearch(d, limits).run();

  for (int attempt = 0; attempt <= std::max(0, limits.restarts); ++attempt) {
    Rng rng = make_rng(mix_seed(limits.seed, static_cast<std::uint64_t>(attempt)));
    bool no_cover = false;
    auto cycle = detail::patch_cycle_cover(d, rng, attempt > 0, no_cover);
    ++res.nodes;
    if (no_cover) {
      res.status = DirectedStatus::none_certified;
      return res;
    }
    if (cycle) {
      res.status = DirectedStatus::found;
      res.cycle = std::move(*cycle);
      return res;
    }
  }
  res.status = DirectedStatus::not_found;
  return res;
}

}  // namespace hamcompat
