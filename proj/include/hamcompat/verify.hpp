#pragma once

// Brute-force oracles. Nothing here depends on the solvers; every solver
// success is re-checked through verify_cycle.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamcompat/conflict.hpp"
#include "hamcompat/graph.hpp"

namespace hamcompat {

enum class CycleMode { hamiltonian_only, compatible, rainbow };

inline const char* to_string(CycleMode m) {
  switch (m) {
    case CycleMode::hamiltonian_only: return "hamiltonian_only";
    case CycleMode::compatible: return "compatible";
    case CycleMode::rainbow: return "rainbow";
  }
  return "?";
}

inline CycleMode parse_cycle_mode(const std::string& s) {
  if (s == "hamiltonian_only" || s == "hamiltonian") return CycleMode::hamiltonian_only;
  if (s == "compatible") return CycleMode::compatible;
  if (s == "rainbow") return CycleMode::rainbow;
  throw std::invalid_argument("unknown cycle mode: " + s);
}

enum class ViolationKind {
  too_short,
  wrong_length,
  invalid_vertex,
  repeated_vertex,
  missing_vertex,
  non_edge_step,
  conflicting_pair,
  repeated_color,
  no_coloring,
};

struct Violation {
  ViolationKind kind;
  Vertex vertex = -1;  // missing/repeated/invalid vertex, or shared vertex of a conflicting pair
  Vertex other = -1;   // second endpoint of a non-edge step
  EdgeId edge_a = -1;
  EdgeId edge_b = -1;
  int color = -1;
};

struct Verdict {
  std::vector<Violation> violations;

  bool pass() const { return violations.empty(); }
  bool has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; });
  }
};

/// Checks C against G (and S outside hamiltonian_only mode). compatible:
/// consecutive cycle edges compatible at their shared vertex. rainbow: all
/// cycle edges carry distinct colours (S must be a global colouring).
inline Verdict verify_cycle(const Graph& g, const ConflictSystem& s, const Cycle& c, CycleMode mode) {
  Verdict verdict;
  auto& out = verdict.violations;
  const auto n = g.order();
  const auto len = c.vertices.size();
  if (n < 3 || len < 3) out.push_back({ViolationKind::too_short});
  if (len != static_cast<std::size_t>(n)) out.push_back({ViolationKind::wrong_length});

  std::vector<int> seen(static_cast<std::size_t>(std::max<Vertex>(n, 0)), 0);
  for (Vertex v : c.vertices) {
    if (!g.valid(v)) {
      out.push_back({ViolationKind::invalid_vertex, v});
      continue;
    }
    if (seen[static_cast<std::size_t>(v)]++ == 1) out.push_back({ViolationKind::repeated_vertex, v});
  }
  for (Vertex v = 0; v < n; ++v)
    if (seen[static_cast<std::size_t>(v)] == 0) out.push_back({ViolationKind::missing_vertex, v});
  if (len < 2) return verdict;

  // Edge ids of the steps; -1 where the step is not an edge.
  std::vector<EdgeId> steps(len, -1);
  for (std::size_t i = 0; i < len; ++i) {
    Vertex a = c.vertices[i];
    Vertex b = c.vertices[(i + 1) % len];
    if (auto id = g.edge_id(a, b)) steps[i] = *id;
    else out.push_back({ViolationKind::non_edge_step, a, b});
  }
  if (mode == CycleMode::hamiltonian_only) return verdict;

  if (mode == CycleMode::compatible) {
    if (s.edge_count() != g.size()) throw std::invalid_argument("conflict system does not match the graph");
    for (std::size_t i = 0; i < len; ++i) {
      EdgeId in = steps[(i + len - 1) % len];
      EdgeId outgoing = steps[i];
      if (in < 0 || outgoing < 0 || in == outgoing) continue;
      if (!s.compatible(in, outgoing)) {
        out.push_back({ViolationKind::conflicting_pair, c.vertices[i], -1, std::min(in, outgoing), std::max(in, outgoing)});
      }
    }
    return verdict;
  }

  if (s.mode() != ConflictMode::global || s.edge_count() != g.size()) {
    out.push_back({ViolationKind::no_coloring});
    return verdict;
  }
  std::set<int> reported;
  std::vector<int> colors;
  for (EdgeId e : steps)
    if (e >= 0) colors.push_back(s.color(e));
  std::sort(colors.begin(), colors.end());
  for (std::size_t i = 1; i < colors.size(); ++i)
    if (colors[i] == colors[i - 1] && reported.insert(colors[i]).second)
      out.push_back({ViolationKind::repeated_color, -1, -1, -1, -1, colors[i]});
  return verdict;
}

namespace detail {

inline bool spanning_path_dfs(const std::vector<std::vector<char>>& adj, int cur, int target, int visited_count,
                              int total, std::vector<char>& visited) {
  if (visited_count == total) return cur == target;
  for (int next = 0; next < total; ++next) {
    if (!adj[static_cast<std::size_t>(cur)][static_cast<std::size_t>(next)] || visited[static_cast<std::size_t>(next)])
      continue;
    if (next == target && visited_count + 1 != total) continue;
    visited[static_cast<std::size_t>(next)] = 1;
    if (spanning_path_dfs(adj, next, target, visited_count + 1, total, visited)) return true;
    visited[static_cast<std::size_t>(next)] = 0;
  }
  return false;
}

}  // namespace detail

/// Ground truth for boosters: every host edge {v, w} inside V(P) for which
/// P u R contains a path through exactly V(P) from v to w, by exhaustive DFS.
inline std::vector<VertexPair> brute_force_boosters(const Path& p, const Graph& r, const Graph& host) {
  const auto k = p.size();
  if (k > 10) throw std::invalid_argument("brute_force_boosters is limited to paths on at most 10 vertices");
  if (k < 2) return {};
  std::vector<std::vector<char>> adj(k, std::vector<char>(k, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const bool path_edge = (i + 1 == j) || (j + 1 == i);
      adj[i][j] = path_edge || r.has_edge(p.vertices[i], p.vertices[j]);
    }
  std::vector<VertexPair> out;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!host.has_edge(p.vertices[i], p.vertices[j])) continue;
      std::vector<char> visited(k, 0);
      visited[i] = 1;
      if (detail::spanning_path_dfs(adj, static_cast<int>(i), static_cast<int>(j), 1, static_cast<int>(k), visited))
        out.push_back(VertexPair::of(p.vertices[i], p.vertices[j]));
    }
  std::sort(out.begin(), out.end());
  return out;
}

struct HamiltonOracleResult {
  std::optional<Cycle> cycle;  // empty: certified that none exists
};

/// Exhaustive search for a Hamilton cycle valid under `mode`; n <= 12.
inline HamiltonOracleResult brute_force_hamilton(const Graph& g, const ConflictSystem& s, CycleMode mode) {
  const Vertex n = g.order();
  if (n > 12) throw std::invalid_argument("brute_force_hamilton is limited to 12 vertices");
  if (n < 3) return {};
  if (mode == CycleMode::rainbow && s.mode() != ConflictMode::global) {
    throw std::invalid_argument("rainbow search needs a global colouring");
  }
  std::vector<Vertex> order{0};
  std::vector<EdgeId> used;  // edge ids along `order`
  std::vector<char> on(static_cast<std::size_t>(n), 0);
  on[0] = 1;
  std::multiset<int> colors;

  auto edge_ok = [&](EdgeId prev, EdgeId next) {
    if (mode == CycleMode::hamiltonian_only || prev < 0) return true;
    if (mode == CycleMode::compatible) return s.compatible(prev, next);
    return colors.count(s.color(next)) == 0;
  };

  std::optional<Cycle> found;
  auto dfs = [&](auto&& self) -> bool {
    const Vertex cur = order.back();
    if (static_cast<Vertex>(order.size()) == n) {
      auto closing = g.edge_id(cur, 0);
      if (!closing) return false;
      if (!edge_ok(used.back(), *closing)) return false;
      if (mode == CycleMode::compatible && !s.compatible(*closing, used.front())) return false;
      found = Cycle{order};
      return true;
    }
    for (std::size_t i = 0; i < g.neighbors(cur).size(); ++i) {
      const Vertex next = g.neighbors(cur)[i];
      if (on[static_cast<std::size_t>(next)]) continue;
      const EdgeId e = g.incident_edges(cur)[i];
      if (!edge_ok(used.empty() ? -1 : used.back(), e)) continue;
      on[static_cast<std::size_t>(next)] = 1;
      order.push_back(next);
      used.push_back(e);
      if (mode == CycleMode::rainbow) colors.insert(s.color(e));
      if (self(self)) return true;
      if (mode == CycleMode::rainbow) colors.erase(colors.find(s.color(e)));
      used.pop_back();
      order.pop_back();
      on[static_cast<std::size_t>(next)] = 0;
    }
    return false;
  };
  dfs(dfs);
  return {found};
}

}  // namespace hamcompat
