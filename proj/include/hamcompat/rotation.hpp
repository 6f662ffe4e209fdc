#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "hamcompat/graph.hpp"

namespace hamcompat {

/// Elementary rotation with path.front() fixed: for an edge {back, p[pivot]}
/// the path becomes p[0..pivot] followed by p[pivot+1..] reversed, so the new
/// endpoint is p[pivot+1].
inline Path rotate(const Path& p, std::size_t pivot) {
  if (p.size() < 3 || pivot + 2 >= p.size()) throw std::invalid_argument("rotation pivot out of range");
  Path out = p;
  std::reverse(out.vertices.begin() + static_cast<std::ptrdiff_t>(pivot) + 1, out.vertices.end());
  return out;
}

namespace detail {

inline Path oriented(const Path& p, Vertex fixed) {
  if (p.vertices.empty()) throw std::invalid_argument("empty path");
  if (p.front() == fixed) return p;
  if (p.back() == fixed) return Path{{p.vertices.rbegin(), p.vertices.rend()}};
  throw std::invalid_argument("fixed vertex is not an endpoint of the path");
}

/// Pivots available at the back of `p` within graph `u`, in ascending order of
/// the neighbour's vertex id.
template <class F>
void for_each_pivot(const Path& p, const Graph& u, std::vector<int>& pos, F&& f) {
  for (std::size_t i = 0; i < p.size(); ++i) pos[static_cast<std::size_t>(p.vertices[i])] = static_cast<int>(i);
  const Vertex end = p.back();
  for (Vertex y : u.neighbors(end)) {
    const int i = pos[static_cast<std::size_t>(y)];
    if (i < 0 || static_cast<std::size_t>(i) + 2 >= p.size()) continue;
    f(static_cast<std::size_t>(i));
  }
  for (Vertex v : p.vertices) pos[static_cast<std::size_t>(v)] = -1;
}

}  // namespace detail

struct RotationEnds {
  std::vector<Vertex> ends;  // ascending
  bool complete = true;      // false when max_states stopped the closure
  std::size_t states = 0;
};

/// Every endpoint reachable from P by sequences of rotations that keep
/// `fixed` in place, using edges of P u R. Explores distinct paths
/// breadth-first, lowest pivot id first; max_states bounds the number of
/// distinct paths kept.
inline RotationEnds rotate_reachable_ends(const Path& p, const Graph& r, Vertex fixed,
                                          std::size_t max_states = 1'000'000) {
  const Path start = detail::oriented(p, fixed);
  const Graph u = with_path_edges(r, start);
  std::vector<int> pos(static_cast<std::size_t>(u.order()), -1);
  std::set<std::vector<Vertex>> seen{start.vertices};
  std::deque<Path> queue{start};
  std::set<Vertex> ends{start.back()};
  RotationEnds out;
  while (!queue.empty()) {
    Path cur = std::move(queue.front());
    queue.pop_front();
    detail::for_each_pivot(cur, u, pos, [&](std::size_t pivot) {
      if (!out.complete) return;
      Path next = rotate(cur, pivot);
      if (seen.insert(next.vertices).second) {
        if (seen.size() > max_states) {
          out.complete = false;
          return;
        }
        ends.insert(next.back());
        queue.push_back(std::move(next));
      }
    });
    if (!out.complete) break;
  }
  out.ends.assign(ends.begin(), ends.end());
  out.states = seen.size();
  return out;
}

/// Endpoint-level breadth-first rotation closure with start.front() fixed.
/// Each newly reached endpoint is reported once, with the first path found
/// for it; `visit` returns true to stop. This is the set Posa's lemma bounds;
/// it can be smaller than the full path-state closure. Returns the number of
/// rotations performed.
template <class F>
std::int64_t visit_rotations(const Path& start, const Graph& u, std::vector<int>& pos_scratch, F&& visit) {
  std::vector<char> found(static_cast<std::size_t>(u.order()), 0);
  std::vector<Path> queue{start};
  found[static_cast<std::size_t>(start.back())] = 1;
  if (visit(start)) return 0;
  std::int64_t rotations = 0;
  bool stop = false;
  for (std::size_t head = 0; head < queue.size() && !stop; ++head) {
    const Path cur = queue[head];
    detail::for_each_pivot(cur, u, pos_scratch, [&](std::size_t pivot) {
      if (stop) return;
      const Vertex new_end = cur.vertices[pivot + 1];
      if (found[static_cast<std::size_t>(new_end)]) return;
      found[static_cast<std::size_t>(new_end)] = 1;
      ++rotations;
      queue.push_back(rotate(cur, pivot));
      stop = visit(queue.back());
    });
  }
  return rotations;
}

struct RotationFrontier {
  std::vector<Vertex> ends;  // discovery order; ends[0] is the starting back
  std::vector<Path> paths;   // paths[i] runs from the fixed vertex to ends[i]
  std::int64_t rotations = 0;
};

inline RotationFrontier rotation_frontier(const Path& start, const Graph& u) {
  std::vector<int> pos(static_cast<std::size_t>(u.order()), -1);
  RotationFrontier fr;
  fr.rotations = visit_rotations(start, u, pos, [&](const Path& q) {
    fr.ends.push_back(q.back());
    fr.paths.push_back(q);
    return false;
  });
  return fr;
}

/// Enumerates endpoint pairs {y, z} of paths on V(P) in the union graph `u`
/// (which must contain P's edges) by two levels of rotation: fix P.front()
/// and collect ends y, then fix each y and collect ends z. The callback sees
/// each witness path (running y -> z) and returns true to stop. Returns the
/// number of rotations performed.
template <class F>
std::int64_t for_each_rotation_pair(const Path& p, const Graph& u, F&& on_pair) {
  std::vector<int> pos(static_cast<std::size_t>(u.order()), -1);
  std::vector<Path> firsts;
  std::int64_t rotations = visit_rotations(p, u, pos, [&](const Path& q) {
    firsts.push_back(q);
    return false;
  });
  for (const auto& q : firsts) {
    Path from_y{{q.vertices.rbegin(), q.vertices.rend()}};
    bool stop = false;
    rotations += visit_rotations(from_y, u, pos, [&](const Path& w) { return stop = on_pair(w); });
    if (stop) break;
  }
  return rotations;
}

namespace detail {

constexpr std::size_t kExactBoosterLimit = 12;

/// Subset DP over V(P): ends[mask] holds every vertex at which a path from
/// `start` covering exactly `mask` can end.
inline std::vector<std::uint32_t> spanning_path_table(const std::vector<std::uint32_t>& adj, std::size_t start) {
  const std::size_t k = adj.size();
  std::vector<std::uint32_t> ends(std::size_t{1} << k, 0);
  ends[std::size_t{1} << start] = 1U << start;
  for (std::uint32_t mask = 1; mask < (1U << k); ++mask) {
    std::uint32_t here = ends[mask];
    while (here) {
      const int e = __builtin_ctz(here);
      here &= here - 1;
      std::uint32_t ext = adj[static_cast<std::size_t>(e)] & ~mask;
      while (ext) {
        const int nb = __builtin_ctz(ext);
        ext &= ext - 1;
        ends[mask | (1U << nb)] |= 1U << nb;
      }
    }
  }
  return ends;
}

inline std::vector<std::uint32_t> local_adjacency(const Path& p, const Graph& u) {
  const std::size_t k = p.size();
  std::vector<std::uint32_t> adj(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && u.has_edge(p.vertices[i], p.vertices[j])) adj[i] |= 1U << j;
  return adj;
}

}  // namespace detail

/// Host edges {v, w} such that P u R has a path through exactly V(P) with
/// endpoints v and w. Paths on at most 12 vertices are resolved exactly by a
/// subset DP; longer paths use two-level rotation closure, which only reports
/// genuine boosters but may miss pairs reachable by no rotation sequence.
inline std::vector<VertexPair> find_boosters(const Path& p, const Graph& r, const Graph& host) {
  if (p.size() < 3) throw std::invalid_argument("boosters need a path on at least 3 vertices");
  const Graph u = with_path_edges(r, p);
  std::vector<VertexPair> out;
  if (p.size() <= detail::kExactBoosterLimit) {
    const auto adj = detail::local_adjacency(p, u);
    const std::uint32_t full = (1U << p.size()) - 1;
    for (std::size_t s = 0; s < p.size(); ++s) {
      const auto table = detail::spanning_path_table(adj, s);
      std::uint32_t ends = table[full];
      while (ends) {
        const auto t = static_cast<std::size_t>(__builtin_ctz(ends));
        ends &= ends - 1;
        if (t > s && host.has_edge(p.vertices[s], p.vertices[t]))
          out.push_back(VertexPair::of(p.vertices[s], p.vertices[t]));
      }
    }
  } else {
    std::set<VertexPair> pairs;
    for_each_rotation_pair(p, u, [&](const Path& w) {
      if (host.has_edge(w.front(), w.back())) pairs.insert(VertexPair::of(w.front(), w.back()));
      return false;
    });
    out.assign(pairs.begin(), pairs.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// A path in P u R through exactly V(P) joining the two vertices of `pair`,
/// found by the same method as find_boosters.
inline std::optional<Path> booster_witness(const Path& p, const Graph& r, VertexPair pair) {
  if (p.size() < 3) throw std::invalid_argument("boosters need a path on at least 3 vertices");
  const Graph u = with_path_edges(r, p);
  if (p.size() <= detail::kExactBoosterLimit) {
    const auto adj = detail::local_adjacency(p, u);
    auto index_of = [&](Vertex v) -> std::optional<std::size_t> {
      auto it = std::find(p.vertices.begin(), p.vertices.end(), v);
      if (it == p.vertices.end()) return std::nullopt;
      return static_cast<std::size_t>(it - p.vertices.begin());
    };
    auto si = index_of(pair.u);
    auto ti = index_of(pair.v);
    if (!si || !ti) return std::nullopt;
    const auto table = detail::spanning_path_table(adj, *si);
    std::uint32_t mask = (1U << p.size()) - 1;
    if (!(table[mask] & (1U << *ti))) return std::nullopt;
    std::vector<Vertex> rev;
    std::size_t cur = *ti;
    while (true) {
      rev.push_back(p.vertices[cur]);
      if (cur == *si) break;
      mask &= ~(1U << cur);
      const std::uint32_t prev = table[mask] & adj[cur];
      cur = static_cast<std::size_t>(__builtin_ctz(prev));
    }
    std::reverse(rev.begin(), rev.end());
    return Path{std::move(rev)};
  }
  std::optional<Path> found;
  for_each_rotation_pair(p, u, [&](const Path& w) {
    if (VertexPair::of(w.front(), w.back()) == pair) {
      found = w;
      return true;
    }
    return false;
  });
  return found;
}

}  // namespace hamcompat
