#pragma once

// Instance builders and oracles shared by the unit and acceptance suites.

#include <algorithm>
#include <numeric>
#include <vector>

#include "hamcompat/hamcompat.hpp"

namespace hamcompat::testing {

inline Graph random_graph(Vertex n, double p, Rng& rng, const std::vector<VertexPair>& forced = {}) {
  std::vector<VertexPair> e = forced;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (bernoulli(rng, p)) e.push_back({u, v});
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return Graph::from_edges(n, e);
}

/// Random matching structure on n vertices: shuffled vertices paired up, the
/// last three forming the triple when n is odd.
inline PerfectMatching random_matching(Vertex n, Rng& rng) {
  std::vector<Vertex> vs(static_cast<std::size_t>(n));
  std::iota(vs.begin(), vs.end(), 0);
  shuffle(vs, rng);
  PerfectMatching m;
  std::size_t i = 0;
  const std::size_t pairs = static_cast<std::size_t>(n / 2) - (n % 2 ? 1 : 0);
  for (std::size_t k = 0; k < pairs; ++k, i += 2) m.elements.push_back({vs[i], vs[i + 1], -1});
  if (n % 2) m.elements.push_back({vs[i], vs[i + 2], vs[i + 1]});
  for (const auto& e : m.elements) {
    m.part_a.push_back(e.a);
    m.part_b.push_back(e.b);
  }
  std::sort(m.part_a.begin(), m.part_a.end());
  std::sort(m.part_b.begin(), m.part_b.end());
  return m;
}

inline std::vector<VertexPair> matching_edges(const PerfectMatching& m) {
  std::vector<VertexPair> out;
  for (const auto& e : m.elements) {
    out.push_back(e.edge_at_a());
    if (e.is_triple()) out.push_back(e.edge_at_b());
  }
  return out;
}

inline Digraph random_digraph(Vertex m, double p, Rng& rng) {
  Digraph d(m);
  for (Vertex i = 0; i < m; ++i)
    for (Vertex j = 0; j < m; ++j)
      if (i != j && bernoulli(rng, p)) d.add_arc(i, j);
  d.finalize();
  return d;
}

/// Calls f on every directed Hamilton cycle of d that starts at vertex 0.
template <class F>
void for_each_directed_cycle(const Digraph& d, F&& f) {
  const Vertex m = d.order();
  std::vector<Vertex> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  do {
    if (is_directed_hamilton_cycle(d, order)) f(order);
  } while (std::next_permutation(order.begin() + 1, order.end()));
}

inline bool has_directed_cycle_by_permutation(const Digraph& d) {
  bool any = false;
  for_each_directed_cycle(d, [&](const std::vector<Vertex>&) { any = true; });
  return any;
}

}  // namespace hamcompat::testing
