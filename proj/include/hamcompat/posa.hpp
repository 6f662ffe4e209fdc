#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hamcompat/conflict.hpp"
#include "hamcompat/expander.hpp"
#include "hamcompat/graph.hpp"
#include "hamcompat/report.hpp"
#include "hamcompat/rng.hpp"
#include "hamcompat/rotation.hpp"
#include "hamcompat/verify.hpp"

namespace hamcompat {

/// d-out sampling: every vertex draws d incident edges (with repetition).
struct DOutParams {
  int d = 8;
  int max_retries = 10;
  std::uint64_t seed = 0;
  int resample_rounds = 200;  // conflict-resampling rounds per attempt
};

struct ExpanderBuild {
  bool ok = false;             // compatible and not certified_false
  std::optional<Graph> graph;  // last compatible R, even when certification failed
  ExpanderStatus status = ExpanderStatus::budget_exceeded;
  int attempts = 0;
  std::string failure;
};

/// True when every pair of edges of `r` that must be compatible under `s` is:
/// incident pairs for a local system, all pairs for a global colouring.
/// `r` must be a subgraph of `g`.
inline bool subgraph_compatible(const Graph& g, const ConflictSystem& s, const Graph& r) {
  if (s.mode() == ConflictMode::global) {
    std::unordered_set<int> used;
    for (const auto& e : r.edges())
      if (!used.insert(s.color(g.require_edge(e.u, e.v))).second) return false;
    return true;
  }
  for (Vertex v = 0; v < r.order(); ++v) {
    const auto nb = r.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!s.compatible(g.require_edge(v, nb[i]), g.require_edge(v, nb[j]))) return false;
  }
  return true;
}

namespace detail {

/// One d-out sample followed by conflict resampling. Each pass walks the
/// trials in order; a trial whose edge clashes with the current picks is
/// redrawn (a bounded number of times) until it does not. Passes repeat until
/// one finds no clash.
inline std::optional<Graph> sample_compatible_dout(const Graph& g, const ConflictSystem& s, int d, int rounds,
                                                   Rng& rng) {
  const Vertex n = g.order();
  const auto trials = static_cast<std::size_t>(n) * static_cast<std::size_t>(d);
  const bool global = s.mode() == ConflictMode::global;
  std::vector<EdgeId> pick(trials);
  std::vector<int> count(static_cast<std::size_t>(g.size()), 0);
  std::unordered_map<int, int> color_use;  // distinct picked edges per colour
  auto add = [&](EdgeId e) {
    if (count[static_cast<std::size_t>(e)]++ == 0 && global) ++color_use[s.color(e)];
  };
  auto remove = [&](EdgeId e) {
    if (--count[static_cast<std::size_t>(e)] == 0 && global) --color_use[s.color(e)];
  };
  auto clashes = [&](EdgeId e) {
    if (global) return color_use[s.color(e)] > (count[static_cast<std::size_t>(e)] > 0 ? 1 : 0);
    const auto ends = g.endpoints(e);
    for (Vertex v : {ends.u, ends.v})
      for (EdgeId f : s.partners(v, e))
        if (count[static_cast<std::size_t>(f)]) return true;
    return false;
  };
  auto draw = [&](std::size_t t) {
    const auto inc = g.incident_edges(static_cast<Vertex>(t / static_cast<std::size_t>(d)));
    return inc[static_cast<std::size_t>(uniform_below(rng, inc.size()))];
  };
  for (std::size_t t = 0; t < trials; ++t) add(pick[t] = draw(t));

  constexpr int redraws = 32;
  for (int round = 0;; ++round) {
    bool any = false;
    for (std::size_t t = 0; t < trials; ++t) {
      if (!clashes(pick[t])) continue;
      any = true;
      remove(pick[t]);
      for (int k = 0; k < redraws; ++k) {
        pick[t] = draw(t);
        if (!clashes(pick[t])) break;
      }
      add(pick[t]);
    }
    if (!any) break;
    if (round >= rounds) return std::nullopt;
  }
  std::vector<VertexPair> edges;
  for (EdgeId e = 0; e < g.size(); ++e)
    if (count[static_cast<std::size_t>(e)]) edges.push_back(g.endpoints(e));
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace detail

/// Samples a sparse spanning subgraph R of G whose edges are pairwise
/// compatible under S and tries to certify it as an expander. Attempts that
/// cannot be made compatible, or are certified non-expanding, are redrawn with
/// a fresh sub-seed up to max_retries times.
inline ExpanderBuild build_compatible_expander(const Graph& g, const ConflictSystem& s, const DOutParams& dp,
                                               const ExpanderParams& ep) {
  if (dp.d < 1) throw std::invalid_argument("d must be at least 1");
  if (g.order() == 0 || g.min_degree() < 1) throw std::invalid_argument("d-out sampling needs minimum degree >= 1");
  if (s.edge_count() != g.size()) throw std::invalid_argument("conflict system does not match the graph");
  ExpanderBuild out;
  for (int attempt = 0; attempt <= std::max(0, dp.max_retries); ++attempt) {
    ++out.attempts;
    Rng rng = make_rng(mix_seed(dp.seed, static_cast<std::uint64_t>(attempt)));
    auto r = detail::sample_compatible_dout(g, s, dp.d, dp.resample_rounds, rng);
    if (!r) {
      out.failure = "conflicts persisted after resampling";
      continue;
    }
    out.status = is_expander(*r, ep).status;
    out.graph = std::move(r);
    if (out.status != ExpanderStatus::certified_false) {
      out.ok = true;
      out.failure.clear();
      return out;
    }
    out.failure = "sampled graph is not an expander";
  }
  return out;
}

struct SolveLimits {
  int max_restarts = 20;              // fresh R draws after a stall
  std::int64_t max_iterations = 0;    // booster steps per attempt; 0 means 4n
  double time_limit_ms = 0.0;         // 0 disables the wall-clock limit
  std::int64_t expander_budget = 100'000;
};

struct SparseReport : SolveReport {
  std::vector<std::vector<std::size_t>> path_history;  // |P| after each maximisation, per attempt
  ExpanderStatus last_expander_status = ExpanderStatus::budget_exceeded;
};

namespace detail {

/// State of one attempt of the booster loop for a fixed R.
class BoosterLoop {
 public:
  BoosterLoop(const Graph& g, const ConflictSystem& s, const Graph& r, SparseReport& rep, std::vector<std::size_t>& history)
      : g_(g), s_(s), r_(r), rep_(rep), history_(history), on_path_(static_cast<std::size_t>(g.order()), 0),
        pos_(static_cast<std::size_t>(g.order()), -1) {}

  enum class Step { cycle, stalled, out_of_time };

  template <class Clock>
  Step run(std::int64_t max_iterations, Clock&& out_of_time, Cycle& result) {
    set_path(Path{{0}});
    maximise();
    for (std::int64_t it = 0; it < max_iterations; ++it) {
      if (out_of_time()) return Step::out_of_time;
      if (path_.size() < 3) return Step::stalled;
      const Graph u = with_path_edges(r_, path_);
      auto used = used_colors(u);
      std::optional<Path> witness;
      std::set<VertexPair> seen;
      rep_.rotations += for_each_rotation_pair(path_, u, [&](const Path& w) {
        const auto pair = VertexPair::of(w.front(), w.back());
        if (!g_.has_edge(pair.u, pair.v) || !seen.insert(pair).second) return false;
        ++rep_.boosters_enumerated;
        if (!admissible(g_.require_edge(pair.u, pair.v), u, used, -1)) {
          ++rep_.boosters_rejected;
          return false;
        }
        witness = w;
        return true;
      });
      if (!witness) return Step::stalled;

      // witness plus the booster closes a cycle through V(P).
      const auto& c = witness->vertices;
      if (c.size() == static_cast<std::size_t>(g_.order())) {
        result = Cycle{c};
        return Step::cycle;
      }
      const EdgeId booster = g_.require_edge(c.front(), c.back());
      auto next = open_cycle(c, u, used, booster);
      if (!next) return Step::stalled;
      set_path(std::move(*next));
      maximise();
    }
    return Step::stalled;
  }

 private:
  void set_path(Path p) {
    for (Vertex v : path_.vertices) on_path_[static_cast<std::size_t>(v)] = 0;
    path_ = std::move(p);
    for (Vertex v : path_.vertices) on_path_[static_cast<std::size_t>(v)] = 1;
  }

  std::optional<Vertex> outside_r_neighbor(Vertex v) const {
    for (Vertex w : r_.neighbors(v))
      if (!on_path_[static_cast<std::size_t>(w)]) return w;
    return std::nullopt;
  }

  bool extend_back() {
    if (auto w = outside_r_neighbor(path_.back())) {
      path_.vertices.push_back(*w);
      on_path_[static_cast<std::size_t>(*w)] = 1;
      return true;
    }
    return false;
  }

  void reverse_path() { std::reverse(path_.vertices.begin(), path_.vertices.end()); }

  // Extends P through R-edges, rotating (P u R edges, one endpoint fixed)
  // whenever both ends are stuck, until no reachable endpoint can extend.
  void maximise() {
    while (true) {
      if (extend_back()) continue;
      reverse_path();
      if (extend_back()) continue;
      bool grown = false;
      if (path_.size() >= 3) {
        for (int side = 0; side < 2 && !grown; ++side) {
          const Graph u = with_path_edges(r_, path_);
          std::optional<Path> better;
          rep_.rotations += visit_rotations(path_, u, pos_, [&](const Path& q) {
            if (!outside_r_neighbor(q.back())) return false;
            better = q;
            return true;
          });
          if (better) {
            path_ = std::move(*better);
            grown = extend_back();
          } else {
            reverse_path();
          }
        }
      }
      if (!grown) break;
    }
    history_.push_back(path_.size());
  }

  std::unordered_map<int, int> used_colors(const Graph& u) const {
    std::unordered_map<int, int> used;
    if (s_.mode() == ConflictMode::global)
      for (const auto& e : u.edges()) ++used[s_.color(g_.require_edge(e.u, e.v))];
    return used;
  }

  // Whether adding host edge e keeps U (plus `extra`, when >= 0) compatible.
  bool admissible(EdgeId e, const Graph& u, const std::unordered_map<int, int>& used, EdgeId extra) const {
    const auto ends = g_.endpoints(e);
    if (u.has_edge(ends.u, ends.v) || e == extra) return true;
    if (s_.mode() == ConflictMode::global) {
      if (used.count(s_.color(e))) return false;
      return extra < 0 || s_.color(extra) != s_.color(e);
    }
    for (Vertex x : {ends.u, ends.v}) {
      for (Vertex y : u.neighbors(x))
        if (!s_.compatible(e, g_.require_edge(x, y))) return false;
      if (extra >= 0) {
        const auto ex = g_.endpoints(extra);
        if ((ex.u == x || ex.v == x) && !s_.compatible(e, extra)) return false;
      }
    }
    return true;
  }

  // Breaks the cycle `c` (closed by `booster`) next to a vertex with a
  // neighbour outside it. R-edges are preferred; a host edge is used only
  // when no R-edge leaves the cycle and it is compatible with everything.
  std::optional<Path> open_cycle(const std::vector<Vertex>& c, const Graph& u,
                                 const std::unordered_map<int, int>& used, EdgeId booster) {
    auto opened = [&](std::size_t i, Vertex w) {
      std::vector<Vertex> out;
      out.reserve(c.size() + 1);
      for (std::size_t k = 1; k <= c.size(); ++k) out.push_back(c[(i + k) % c.size()]);
      out.push_back(w);
      return Path{std::move(out)};
    };
    for (std::size_t i = 0; i < c.size(); ++i)
      if (auto w = outside_r_neighbor(c[i])) return opened(i, *w);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (Vertex w : g_.neighbors(c[i]))
        if (!on_path_[static_cast<std::size_t>(w)] && admissible(g_.require_edge(c[i], w), u, used, booster))
          return opened(i, w);
    return std::nullopt;
  }

  const Graph& g_;
  const ConflictSystem& s_;
  const Graph& r_;
  SparseReport& rep_;
  std::vector<std::size_t>& history_;
  Path path_;
  std::vector<char> on_path_;
  std::vector<int> pos_;
};

}  // namespace detail

/// Booster-filtering rotation-extension search for a Hamilton cycle that is
/// compatible with a local system, or rainbow under a global colouring.
/// Every returned cycle has been checked by verify_cycle.
inline SparseReport solve_constrained(const Graph& g, const ConflictSystem& s, const DOutParams& dp,
                                      const SolveLimits& limits = {}) {
  if (g.order() < 3) throw std::invalid_argument("a Hamilton cycle needs at least 3 vertices");
  if (s.edge_count() != g.size()) throw std::invalid_argument("conflict system does not match the graph");
  const auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  };
  auto out_of_time = [&] { return limits.time_limit_ms > 0 && elapsed() > limits.time_limit_ms; };
  const CycleMode mode = s.mode() == ConflictMode::global ? CycleMode::rainbow : CycleMode::compatible;
  const std::int64_t max_iterations = limits.max_iterations > 0 ? limits.max_iterations : 4 * std::int64_t{g.order()};

  SparseReport rep;
  auto finish = [&](std::string stage, std::string message) {
    rep.stage = std::move(stage);
    rep.message = std::move(message);
    rep.elapsed_ms = elapsed();
    return rep;
  };
  if (g.min_degree() < 2) return finish("degree", "a vertex has degree below 2");

  for (int attempt = 0; attempt <= std::max(0, limits.max_restarts); ++attempt) {
    rep.restarts = attempt;
    if (out_of_time()) return finish("time", "time limit reached");
    DOutParams sub = dp;
    sub.seed = mix_seed(dp.seed, static_cast<std::uint64_t>(attempt));
    auto build = build_compatible_expander(g, s, sub, ExpanderParams::quarter(g.order(), limits.expander_budget));
    rep.last_expander_status = build.status;
    if (!build.graph) {
      rep.stage = "expander";
      rep.message = build.failure;
      continue;
    }
    rep.path_history.emplace_back();
    detail::BoosterLoop loop(g, s, *build.graph, rep, rep.path_history.back());
    Cycle cycle;
    const auto step = loop.run(max_iterations, out_of_time, cycle);
    if (step == detail::BoosterLoop::Step::out_of_time) return finish("time", "time limit reached");
    if (step == detail::BoosterLoop::Step::stalled) {
      rep.stage = "booster";
      rep.message = "no admissible booster";
      continue;
    }
    rep.verdict = verify_cycle(g, s, cycle, mode);
    if (rep.verdict.pass()) {
      rep.success = true;
      rep.cycle = std::move(cycle);
      return finish("ok", "");
    }
    rep.stage = "verify";
    rep.message = "candidate cycle rejected by verification";
  }
  return finish(rep.stage.empty() ? "restarts" : rep.stage, rep.message.empty() ? "restarts exhausted" : rep.message);
}

}  // namespace hamcompat
