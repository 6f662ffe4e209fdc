#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamcompat/conflict.hpp"
#include "hamcompat/directed_ham.hpp"
#include "hamcompat/graph.hpp"
#include "hamcompat/nibble.hpp"
#include "hamcompat/report.hpp"
#include "hamcompat/verify.hpp"

namespace hamcompat {

/// Digraph on matching elements: arc i -> j (i != j) iff {b_i, a_j} is an edge.
inline Digraph build_digraph(const Graph& g, const PerfectMatching& m) {
  const auto k = static_cast<Vertex>(m.elements.size());
  Digraph d(k);
  for (Vertex i = 0; i < k; ++i)
    for (Vertex j = 0; j < k; ++j)
      if (i != j && g.has_edge(m.elements[static_cast<std::size_t>(i)].b, m.elements[static_cast<std::size_t>(j)].a))
        d.add_arc(i, j);
  d.finalize();
  return d;
}

/// Drops arc i -> j when {b_i, a_j} conflicts with the matching edge at b_i or
/// with the one at a_j. A triple whose two edges conflict is isolated.
inline Digraph prune_digraph(const Digraph& d, const Graph& g, const PerfectMatching& m, const ConflictSystem& s) {
  const auto k = static_cast<Vertex>(m.elements.size());
  if (d.order() != k) throw std::invalid_argument("digraph does not match the matching");
  auto id = [&](VertexPair e) { return g.require_edge(e.u, e.v); };
  std::vector<char> isolated(static_cast<std::size_t>(k), 0);
  for (Vertex i = 0; i < k; ++i) {
    const auto& e = m.elements[static_cast<std::size_t>(i)];
    if (e.is_triple() && !s.compatible(id(e.edge_at_a()), id(e.edge_at_b()))) isolated[static_cast<std::size_t>(i)] = 1;
  }
  Digraph out(k);
  for (auto [i, j] : d.arcs()) {
    if (isolated[static_cast<std::size_t>(i)] || isolated[static_cast<std::size_t>(j)]) continue;
    const auto& ei = m.elements[static_cast<std::size_t>(i)];
    const auto& ej = m.elements[static_cast<std::size_t>(j)];
    const EdgeId link = g.require_edge(ei.b, ej.a);
    if (!s.compatible(link, id(ei.edge_at_b())) || !s.compatible(link, id(ej.edge_at_a()))) continue;
    out.add_arc(i, j);
  }
  out.finalize();
  return out;
}

struct TypicalityReport {
  double epsilon = 0.0;
  double threshold = 0.0;       // (1/2 + eps) * minimum host degree / 2
  Vertex host_min_degree = 0;
  Vertex min_in = 0;
  Vertex min_out = 0;
  Vertex argmin_in = -1;
  Vertex argmin_out = -1;
  bool typical = false;
};

inline TypicalityReport typicality_report(const Digraph& d, const Graph& g, double epsilon) {
  TypicalityReport r;
  r.epsilon = epsilon;
  r.host_min_degree = g.order() > 0 ? g.min_degree() : 0;
  r.threshold = (0.5 + epsilon) * r.host_min_degree / 2.0;
  if (d.order() == 0) return r;
  r.min_in = d.in_degree(0);
  r.min_out = d.out_degree(0);
  r.argmin_in = r.argmin_out = 0;
  for (Vertex v = 1; v < d.order(); ++v) {
    if (d.in_degree(v) < r.min_in) {
      r.min_in = d.in_degree(v);
      r.argmin_in = v;
    }
    if (d.out_degree(v) < r.min_out) {
      r.min_out = d.out_degree(v);
      r.argmin_out = v;
    }
  }
  r.typical = r.min_in > 0 && r.min_out > 0 && r.min_in >= r.threshold && r.min_out >= r.threshold;
  return r;
}

/// Expands a directed Hamilton cycle over matching elements into the host
/// cycle a_1, b_1, a_2, b_2, ... (with v* between a and b of the triple).
inline Cycle lift_cycle(const std::vector<Vertex>& dcycle, const PerfectMatching& m) {
  const auto k = m.elements.size();
  if (dcycle.size() != k) throw std::invalid_argument("directed cycle does not visit every matching element");
  std::vector<char> seen(k, 0);
  Cycle c;
  for (Vertex i : dcycle) {
    if (i < 0 || static_cast<std::size_t>(i) >= k || seen[static_cast<std::size_t>(i)])
      throw std::invalid_argument("directed cycle is not a permutation of the matching elements");
    seen[static_cast<std::size_t>(i)] = 1;
    const auto& e = m.elements[static_cast<std::size_t>(i)];
    c.vertices.push_back(e.a);
    if (e.is_triple()) c.vertices.push_back(e.middle);
    c.vertices.push_back(e.b);
  }
  return c;
}

struct DenseLimits {
  DirectedLimits directed;
  double typicality_epsilon = 0.1;
};

struct DenseReport : SolveReport {
  std::optional<PerfectMatching> matching;
  NibbleTrace trace;
  std::optional<TypicalityReport> typicality;
  std::int64_t arcs = 0;
  std::int64_t pruned_arcs = 0;
  DirectedStatus directed_status = DirectedStatus::not_found;
};

/// Matching reduction: nibble matching, digraph, pruning, directed search,
/// lifting. Only a verified cycle is reported as a success.
inline DenseReport solve_dense(const Graph& g, const ConflictSystem& s, const NibbleParams& params,
                               const DenseLimits& limits = {}) {
  if (g.order() < 4) throw std::invalid_argument("the matching reduction needs at least 4 vertices");
  const auto started = std::chrono::steady_clock::now();
  DenseReport rep;
  auto finish = [&](std::string stage, std::string message) {
    rep.stage = std::move(stage);
    rep.message = std::move(message);
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return rep;
  };

  auto nib = nibble_matching(g, s, params);
  rep.trace = std::move(nib.trace);
  rep.restarts = rep.trace.attempts > 0 ? rep.trace.attempts - 1 : 0;
  if (!nib.matching) return finish("matching", nib.failure);
  rep.matching = std::move(nib.matching);

  const Digraph full = build_digraph(g, *rep.matching);
  const Digraph pruned = prune_digraph(full, g, *rep.matching, s);
  rep.arcs = full.arc_count();
  rep.pruned_arcs = pruned.arc_count();
  rep.typicality = typicality_report(pruned, g, limits.typicality_epsilon);

  DirectedLimits dl = limits.directed;
  dl.seed = mix_seed(params.seed, 0x646972ULL);
  const auto dir = directed_hamilton(pruned, dl);
  rep.directed_status = dir.status;
  if (dir.status != DirectedStatus::found) return finish("directed", "no directed Hamilton cycle found");

  Cycle c = lift_cycle(dir.cycle, *rep.matching);
  rep.verdict = verify_cycle(g, s, c, s.mode() == ConflictMode::global ? CycleMode::rainbow : CycleMode::compatible);
  if (!rep.verdict.pass()) return finish("verify", "lifted cycle rejected by verification");
  rep.success = true;
  rep.cycle = std::move(c);
  return finish("ok", "");
}

}  // namespace hamcompat
