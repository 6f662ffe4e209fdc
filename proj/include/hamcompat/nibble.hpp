#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamcompat/conflict.hpp"
#include "hamcompat/graph.hpp"
#include "hamcompat/matching.hpp"
#include "hamcompat/rng.hpp"

namespace hamcompat {

enum class NibbleMode { paper, desk };

/// Parameters of the semi-random matching. In paper mode delta and the round
/// count follow from epsilon; in desk mode delta is taken as given and
/// rounds = 0 means "derive the round count from delta and epsilon".
struct NibbleParams {
  NibbleMode mode = NibbleMode::desk;
  double epsilon = 0.4;
  double delta = 0.05;
  std::int64_t rounds = 0;
  std::uint64_t seed = 0;
  int restart_cap = 5;
  bool host_completion = true;        // finish with host edges when H_T has no perfect matching
  std::int64_t max_rounds = 1'000'000;
};

struct NibbleSchedule {
  double delta = 0.0;
  double log_delta = 0.0;
  double exact_rounds = 0.0;  // ln(4/eps) / -ln(1 - delta) before rounding
  std::int64_t rounds = 0;
  bool feasible = false;
  std::string diagnostic;
};

inline NibbleSchedule resolve_schedule(const NibbleParams& params) {
  NibbleSchedule s;
  const double eps = params.epsilon;
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (params.mode == NibbleMode::paper) {
    if (!(eps < 1.0)) throw std::invalid_argument("paper mode needs epsilon < 1");
    s.log_delta = -22.0 / eps * std::log(1.0 / eps);
    s.delta = std::exp(s.log_delta);
  } else {
    if (!(params.delta > 0.0 && params.delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (eps > 4.0) throw std::invalid_argument("epsilon must be at most 4 (edges are kept with probability eps/4)");
    s.delta = params.delta;
    s.log_delta = std::log(params.delta);
  }
  const double per_round = s.delta > 0.0 ? -std::log1p(-s.delta) : 0.0;
  s.exact_rounds = per_round > 0.0 ? std::log(4.0 / eps) / per_round : std::numeric_limits<double>::infinity();
  if (params.mode == NibbleMode::desk && params.rounds > 0) {
    s.rounds = params.rounds;
  } else if (!(s.exact_rounds <= static_cast<double>(params.max_rounds))) {
    s.feasible = false;
    s.diagnostic = "delta = exp(" + std::to_string(s.log_delta) + ") needs about " + std::to_string(s.exact_rounds) +
                   " rounds, above the limit of " + std::to_string(params.max_rounds) +
                   "; use desk mode with an explicit delta";
    return s;
  } else {
    s.rounds = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(s.exact_rounds)));
  }
  if (s.rounds < 1) throw std::invalid_argument("round count must be at least 1");
  s.feasible = true;
  return s;
}

/// One element e_i = (a_i, b_i), or the odd-order triple (a, v*, b).
struct MatchingElement {
  Vertex a = -1;
  Vertex b = -1;
  Vertex middle = -1;  // v* for the triple, -1 otherwise

  bool is_triple() const { return middle >= 0; }
  VertexPair edge_at_a() const { return VertexPair::of(a, is_triple() ? middle : b); }
  VertexPair edge_at_b() const { return VertexPair::of(is_triple() ? middle : a, b); }
  friend bool operator==(const MatchingElement&, const MatchingElement&) = default;
};

/// Pairs (a_i, b_i) over a partition A u B (u {v*} for odd n).
struct PerfectMatching {
  std::vector<Vertex> part_a;  // ascending
  std::vector<Vertex> part_b;  // ascending
  std::vector<MatchingElement> elements;
  friend bool operator==(const PerfectMatching&, const PerfectMatching&) = default;
};

/// Empty when M is a perfect matching of G in the above sense, otherwise a
/// description of the first problem found.
inline std::optional<std::string> matching_error(const Graph& g, const PerfectMatching& m) {
  const Vertex n = g.order();
  const auto half = static_cast<std::size_t>(n / 2);
  if (m.part_a.size() != half || m.part_b.size() != half) return "parts must have floor(n/2) vertices each";
  if (m.elements.size() != half) return "expected " + std::to_string(half) + " elements";
  std::vector<int> side(static_cast<std::size_t>(n), 0);  // 1: A, 2: B
  for (Vertex v : m.part_a) {
    if (!g.valid(v) || side[static_cast<std::size_t>(v)]) return "bad or repeated vertex in A";
    side[static_cast<std::size_t>(v)] = 1;
  }
  for (Vertex v : m.part_b) {
    if (!g.valid(v) || side[static_cast<std::size_t>(v)]) return "bad or repeated vertex in B";
    side[static_cast<std::size_t>(v)] = 2;
  }
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  int triples = 0;
  for (const auto& e : m.elements) {
    if (!g.valid(e.a) || !g.valid(e.b)) return "element vertex out of range";
    if (side[static_cast<std::size_t>(e.a)] != 1) return "a-vertex " + std::to_string(e.a) + " is not in A";
    if (side[static_cast<std::size_t>(e.b)] != 2) return "b-vertex " + std::to_string(e.b) + " is not in B";
    ++seen[static_cast<std::size_t>(e.a)];
    ++seen[static_cast<std::size_t>(e.b)];
    if (e.is_triple()) {
      ++triples;
      if (!g.valid(e.middle) || side[static_cast<std::size_t>(e.middle)] != 0) return "v* must lie outside A and B";
      ++seen[static_cast<std::size_t>(e.middle)];
    }
    const auto ea = e.edge_at_a();
    const auto eb = e.edge_at_b();
    if (!g.has_edge(ea.u, ea.v) || !g.has_edge(eb.u, eb.v))
      return "element (" + std::to_string(e.a) + ", " + std::to_string(e.b) + ") is not supported by edges";
  }
  if (triples != (n % 2)) return n % 2 ? "odd order needs exactly one triple" : "even order allows no triple";
  for (Vertex v = 0; v < n; ++v)
    if (seen[static_cast<std::size_t>(v)] != 1) return "vertex " + std::to_string(v) + " is not covered exactly once";
  return std::nullopt;
}

struct NibbleRound {
  std::int64_t iteration = 0;
  Vertex n_i = 0;             // |B_i|
  std::int64_t m_i = 0;       // e(H_i)
  std::int64_t chosen = 0;    // |M_i^(0)|
  std::int64_t kept = 0;      // |M_i|
  std::int64_t discarded = 0; // |M_i^(1)|
  Vertex min_deg = 0;         // over A_i u B_i in H_i
  Vertex max_deg = 0;
};

struct NibbleTrace {
  double epsilon = 0.0;
  double delta = 0.0;
  double q_factor = 0.0;  // eps/4: probability a crossing host edge enters H
  int attempts = 0;
  std::vector<NibbleRound> rounds;

  Vertex final_n = 0;
  std::int64_t final_h_edges = 0;
  int final_h_matching = 0;   // maximum matching of H_T (after the triple, for odd n)
  int final_host_augmented = 0;
  bool host_completion_used = false;

  // Enough to rebuild A_i, B_i, H_i and M_i for diagnostics.
  std::vector<char> in_a;                        // bisection side per vertex
  std::vector<std::int64_t> removed_at;          // round of removal; rounds.size() for the final stage
  std::vector<std::pair<Vertex, Vertex>> h_edges;                 // (a, b)
  std::vector<std::vector<std::pair<Vertex, Vertex>>> round_matchings;  // M_i as (a, b)
};

struct NibbleResult {
  std::optional<PerfectMatching> matching;
  NibbleTrace trace;
  std::string failure;
};

namespace detail {

struct FinalStage {
  std::vector<MatchingElement> elements;
  bool ok = false;
  std::string failure;
};

inline FinalStage nibble_final(const Graph& g, const ConflictSystem& s, const NibbleParams& params,
                               const std::vector<Vertex>& a_left, const std::vector<Vertex>& b_left,
                               const std::vector<std::vector<Vertex>>& h_adj, NibbleTrace& trace) {
  FinalStage out;
  std::vector<Vertex> left = a_left;
  std::vector<Vertex> right = b_left;
  std::optional<MatchingElement> triple;
  if (g.order() % 2 == 1) {
    for (Vertex star : a_left) {
      for (Vertex a : a_left) {
        if (a == star || !g.has_edge(star, a)) continue;
        const EdgeId ea = g.require_edge(star, a);
        for (Vertex b : b_left)
          if (g.has_edge(star, b) && s.compatible(ea, g.require_edge(star, b))) {
            triple = MatchingElement{a, b, star};
            break;
          }
        if (triple) break;
      }
      if (triple) break;
    }
    if (!triple) {
      out.failure = "no compatible odd triple in the final stage";
      return out;
    }
    std::erase(left, triple->a);
    std::erase(left, triple->middle);
    std::erase(right, triple->b);
  }

  std::vector<int> right_index(static_cast<std::size_t>(g.order()), -1);
  for (std::size_t j = 0; j < right.size(); ++j) right_index[static_cast<std::size_t>(right[j])] = static_cast<int>(j);
  std::vector<std::vector<int>> adj(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (Vertex w : h_adj[static_cast<std::size_t>(left[i])])
      if (right_index[static_cast<std::size_t>(w)] >= 0) adj[i].push_back(right_index[static_cast<std::size_t>(w)]);
    std::sort(adj[i].begin(), adj[i].end());
    trace.final_h_edges += static_cast<std::int64_t>(adj[i].size());
  }
  const int l = static_cast<int>(left.size());
  auto m = max_bipartite_matching(l, static_cast<int>(right.size()), adj);
  trace.final_h_matching = m.size;
  if (m.size < l && params.host_completion) {
    trace.host_completion_used = true;
    std::vector<std::vector<int>> host(left.size());
    for (std::size_t i = 0; i < left.size(); ++i)
      for (Vertex w : g.neighbors(left[i]))
        if (right_index[static_cast<std::size_t>(w)] >= 0) host[i].push_back(right_index[static_cast<std::size_t>(w)]);
    m = max_bipartite_matching(l, static_cast<int>(right.size()), host, &m);
    trace.final_host_augmented = m.size - trace.final_h_matching;
  }
  if (m.size < l) {
    out.failure = "final stage has no perfect matching";
    return out;
  }
  for (std::size_t i = 0; i < left.size(); ++i)
    out.elements.push_back({left[i], right[static_cast<std::size_t>(m.left_to_right[i])], -1});
  if (triple) out.elements.push_back(*triple);
  out.ok = true;
  return out;
}

}  // namespace detail

/// Semi-random perfect matching: random bisection, thinned crossing graph H,
/// `rounds` nibble rounds of isolated random edges, then a deterministic
/// maximum matching of what is left. Restarts with a fresh sub-seed on
/// failure, up to restart_cap times.
inline NibbleResult nibble_matching(const Graph& g, const ConflictSystem& s, const NibbleParams& params) {
  const Vertex n = g.order();
  if (n < 4) throw std::invalid_argument("nibble matching needs at least 4 vertices");
  if (s.edge_count() != g.size()) throw std::invalid_argument("conflict system does not match the graph");
  const auto schedule = resolve_schedule(params);
  if (!schedule.feasible) throw std::invalid_argument(schedule.diagnostic);
  const double keep = std::min(1.0, params.epsilon / 4.0);

  NibbleResult result;
  for (int attempt = 0; attempt <= std::max(0, params.restart_cap); ++attempt) {
    Rng rng = make_rng(mix_seed(params.seed, static_cast<std::uint64_t>(attempt)));
    NibbleTrace tr;
    tr.epsilon = params.epsilon;
    tr.delta = schedule.delta;
    tr.q_factor = keep;
    tr.attempts = attempt + 1;

    std::vector<Vertex> perm(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) perm[static_cast<std::size_t>(v)] = v;
    shuffle(perm, rng);
    tr.in_a.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < static_cast<std::size_t>((n + 1) / 2); ++i) tr.in_a[static_cast<std::size_t>(perm[i])] = 1;

    std::vector<std::vector<Vertex>> h_adj(static_cast<std::size_t>(n));
    for (const auto& e : g.edges()) {
      const bool ua = tr.in_a[static_cast<std::size_t>(e.u)];
      if (ua == static_cast<bool>(tr.in_a[static_cast<std::size_t>(e.v)])) continue;
      if (!bernoulli(rng, keep)) continue;
      const Vertex a = ua ? e.u : e.v;
      const Vertex b = ua ? e.v : e.u;
      tr.h_edges.emplace_back(a, b);
      h_adj[static_cast<std::size_t>(a)].push_back(b);
      h_adj[static_cast<std::size_t>(b)].push_back(a);
    }

    std::vector<char> alive(static_cast<std::size_t>(n), 1);
    tr.removed_at.assign(static_cast<std::size_t>(n), schedule.rounds);
    std::vector<MatchingElement> elements;
    std::vector<int> deg(static_cast<std::size_t>(n));
    std::vector<int> hits(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < schedule.rounds; ++i) {
      NibbleRound rec;
      rec.iteration = i;
      std::vector<std::pair<Vertex, Vertex>> live;
      std::fill(deg.begin(), deg.end(), 0);
      for (const auto& [a, b] : tr.h_edges)
        if (alive[static_cast<std::size_t>(a)] && alive[static_cast<std::size_t>(b)]) {
          live.emplace_back(a, b);
          ++deg[static_cast<std::size_t>(a)];
          ++deg[static_cast<std::size_t>(b)];
        }
      rec.m_i = static_cast<std::int64_t>(live.size());
      bool first = true;
      for (Vertex v = 0; v < n; ++v) {
        if (!alive[static_cast<std::size_t>(v)]) continue;
        if (!tr.in_a[static_cast<std::size_t>(v)]) ++rec.n_i;
        const Vertex d = deg[static_cast<std::size_t>(v)];
        rec.min_deg = first ? d : std::min(rec.min_deg, d);
        rec.max_deg = first ? d : std::max(rec.max_deg, d);
        first = false;
      }
      const double prob = rec.m_i > 0 ? std::min(1.0, schedule.delta * rec.n_i / static_cast<double>(rec.m_i)) : 0.0;
      std::vector<std::pair<Vertex, Vertex>> chosen;
      for (const auto& e : live)
        if (bernoulli(rng, prob)) chosen.push_back(e);
      std::fill(hits.begin(), hits.end(), 0);
      for (const auto& [a, b] : chosen) {
        ++hits[static_cast<std::size_t>(a)];
        ++hits[static_cast<std::size_t>(b)];
      }
      std::vector<std::pair<Vertex, Vertex>> kept;
      for (const auto& [a, b] : chosen)
        if (hits[static_cast<std::size_t>(a)] == 1 && hits[static_cast<std::size_t>(b)] == 1) kept.emplace_back(a, b);
      for (const auto& [a, b] : kept) {
        alive[static_cast<std::size_t>(a)] = alive[static_cast<std::size_t>(b)] = 0;
        tr.removed_at[static_cast<std::size_t>(a)] = tr.removed_at[static_cast<std::size_t>(b)] = i;
        elements.push_back({a, b, -1});
      }
      rec.chosen = static_cast<std::int64_t>(chosen.size());
      rec.kept = static_cast<std::int64_t>(kept.size());
      rec.discarded = rec.chosen - rec.kept;
      tr.rounds.push_back(rec);
      tr.round_matchings.push_back(std::move(kept));
    }

    std::vector<Vertex> a_left;
    std::vector<Vertex> b_left;
    for (Vertex v = 0; v < n; ++v)
      if (alive[static_cast<std::size_t>(v)]) (tr.in_a[static_cast<std::size_t>(v)] ? a_left : b_left).push_back(v);
    tr.final_n = static_cast<Vertex>(b_left.size());
    auto fin = detail::nibble_final(g, s, params, a_left, b_left, h_adj, tr);
    result.trace = std::move(tr);
    if (!fin.ok) {
      result.failure = fin.failure;
      continue;
    }
    elements.insert(elements.end(), fin.elements.begin(), fin.elements.end());
    PerfectMatching m;
    Vertex star = -1;
    for (const auto& e : elements)
      if (e.is_triple()) star = e.middle;
    for (Vertex v = 0; v < n; ++v) {
      if (v == star) continue;
      (result.trace.in_a[static_cast<std::size_t>(v)] ? m.part_a : m.part_b).push_back(v);
    }
    m.elements = std::move(elements);
    if (auto err = matching_error(g, m)) throw std::logic_error("nibble produced an invalid matching: " + *err);
    result.matching = std::move(m);
    result.failure.clear();
    return result;
  }
  return result;
}

/// Tabular trace: one row per nibble round.
inline void write_trace_csv(std::ostream& os, const NibbleTrace& trace) {
  os << "iteration,n_i,m_i,chosen,kept,discarded,min_deg,max_deg\n";
  for (const auto& r : trace.rounds)
    os << r.iteration << ',' << r.n_i << ',' << r.m_i << ',' << r.chosen << ',' << r.kept << ',' << r.discarded << ','
       << r.min_deg << ',' << r.max_deg << '\n';
}

// ---------------------------------------------------------------------------
// Normality diagnostics

/// e2 = (a2, b2) is A-bad for e = (a, b) when {a, b2} is an edge compatible
/// with e but incompatible with e2.
inline bool is_a_bad(const Graph& g, const ConflictSystem& s, std::pair<Vertex, Vertex> e,
                     std::pair<Vertex, Vertex> e2) {
  const auto [a, b] = e;
  const auto [a2, b2] = e2;
  if (b2 == b || a2 == a || !g.has_edge(a, b2)) return false;
  const EdgeId link = g.require_edge(a, b2);
  return s.compatible(link, g.require_edge(a, b)) && !s.compatible(link, g.require_edge(a2, b2));
}

/// e2 = (a2, b2) is B-bad for e = (a, b) when {b, a2} is an edge compatible
/// with e but incompatible with e2.
inline bool is_b_bad(const Graph& g, const ConflictSystem& s, std::pair<Vertex, Vertex> e,
                     std::pair<Vertex, Vertex> e2) {
  const auto [a, b] = e;
  const auto [a2, b2] = e2;
  if (a2 == a || b2 == b || !g.has_edge(b, a2)) return false;
  const EdgeId link = g.require_edge(b, a2);
  return s.compatible(link, g.require_edge(a, b)) && !s.compatible(link, g.require_edge(a2, b2));
}

struct ConditionCheck {
  bool pass = true;
  std::int64_t checks = 0;
  std::int64_t failures = 0;
  double max_excess = -std::numeric_limits<double>::infinity();  // > 0 means out of window
  std::int64_t worst_round = -1;

  void record(double excess, std::int64_t round) {
    ++checks;
    if (excess > max_excess) {
      max_excess = excess;
      worst_round = round;
    }
    if (excess > 1e-12) {
      ++failures;
      pass = false;
    }
  }
};

struct NormalityOptions {
  std::size_t sample_size = 200;  // crossing host edges examined for (iv) and (v)
  bool exhaustive = false;
  std::uint64_t seed = 0;
};

struct NormalityReport {
  bool evaluated = false;
  std::string diagnostic;
  std::array<ConditionCheck, 5> conditions{};  // (i) .. (v)
  std::vector<double> xi;                      // xi_i for i = 0..T
  double p = 0.0;                              // host edge density
  double q = 0.0;                              // eps * p / 4
  double mu_hat = 0.0;                         // measured bound / (n p)
  Vertex n0 = 0;
  std::int64_t sampled_edges = 0;
  std::int64_t a_bad_total = 0;
  std::int64_t b_bad_total = 0;

  bool all_pass() const {
    return evaluated && std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
  }
};

/// xi_i = delta (1 + 21 delta / eps)^i.
inline double normality_xi(double delta, double epsilon, std::int64_t i) {
  return delta * std::pow(1.0 + 21.0 * delta / epsilon, static_cast<double>(i));
}

/// Evaluates the normality conditions (i)-(v) on every H_i of a finished
/// trace. Measured quantities x with base b are checked as
/// |x/b - (1-delta)^i| <= xi_i; the bad-edge counts against their upper bound.
inline NormalityReport normality_check(const Graph& g, const ConflictSystem& s, const NibbleTrace& trace,
                                       const NibbleParams& params, const NormalityOptions& opt = {}) {
  NormalityReport rep;
  const auto schedule = resolve_schedule(params);
  if (!schedule.feasible) {
    rep.diagnostic = schedule.diagnostic;
    return rep;
  }
  const Vertex n = g.order();
  if (trace.in_a.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("trace does not match the graph");
  const double delta = schedule.delta;
  const double eps = params.epsilon;
  const auto big_t = static_cast<std::int64_t>(trace.rounds.size());
  const double nd = static_cast<double>(n);
  rep.evaluated = true;
  rep.p = n > 1 ? 2.0 * static_cast<double>(g.size()) / (nd * (nd - 1.0)) : 0.0;
  rep.q = eps * rep.p / 4.0;
  rep.n0 = n / 2;
  rep.mu_hat = rep.p > 0 ? max_bound(s).max_bound / (nd * rep.p) : 0.0;
  for (std::int64_t i = 0; i <= big_t; ++i) rep.xi.push_back(normality_xi(delta, eps, i));
  const double n0 = static_cast<double>(rep.n0);
  const int odd = n % 2;

  auto alive = [&](Vertex v, std::int64_t i) { return trace.removed_at[static_cast<std::size_t>(v)] >= i; };
  auto window = [&](double measured, double base, std::int64_t i) {
    if (base <= 0) return measured > 0 ? std::numeric_limits<double>::infinity() : -rep.xi[static_cast<std::size_t>(i)];
    return std::abs(measured / base - std::pow(1.0 - delta, static_cast<double>(i))) - rep.xi[static_cast<std::size_t>(i)];
  };

  std::vector<std::vector<Vertex>> h_adj(static_cast<std::size_t>(n));
  for (const auto& [a, b] : trace.h_edges) {
    h_adj[static_cast<std::size_t>(a)].push_back(b);
    h_adj[static_cast<std::size_t>(b)].push_back(a);
  }

  // Sampled crossing host edges, oriented (a, b).
  std::vector<std::pair<Vertex, Vertex>> crossing;
  for (const auto& e : g.edges()) {
    const bool ua = trace.in_a[static_cast<std::size_t>(e.u)];
    if (ua != static_cast<bool>(trace.in_a[static_cast<std::size_t>(e.v)]))
      crossing.emplace_back(ua ? e.u : e.v, ua ? e.v : e.u);
  }
  if (!opt.exhaustive && crossing.size() > opt.sample_size) {
    Rng rng = make_rng(mix_seed(opt.seed, 0x6e6f726dULL));
    shuffle(crossing, rng);
    crossing.resize(opt.sample_size);
  }
  rep.sampled_edges = static_cast<std::int64_t>(crossing.size());

  // A_e and B_e for each sampled edge, over G and over H.
  struct EdgeSets {
    std::vector<Vertex> a_g, b_g, a_h, b_h;
  };
  std::vector<EdgeSets> sets;
  for (const auto& [a, b] : crossing) {
    EdgeSets es;
    const EdgeId e = g.require_edge(a, b);
    for (Vertex x : g.neighbors(b))
      if (x != a && trace.in_a[static_cast<std::size_t>(x)] && s.compatible(g.require_edge(b, x), e)) es.a_g.push_back(x);
    for (Vertex y : g.neighbors(a))
      if (y != b && !trace.in_a[static_cast<std::size_t>(y)] && s.compatible(g.require_edge(a, y), e)) es.b_g.push_back(y);
    for (Vertex x : h_adj[static_cast<std::size_t>(b)])
      if (x != a && s.compatible(g.require_edge(b, x), e)) es.a_h.push_back(x);
    for (Vertex y : h_adj[static_cast<std::size_t>(a)])
      if (y != b && s.compatible(g.require_edge(a, y), e)) es.b_h.push_back(y);
    sets.push_back(std::move(es));
  }

  std::vector<int> deg(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i <= big_t; ++i) {
    // (i)
    Vertex a_count = 0;
    Vertex b_count = 0;
    for (Vertex v = 0; v < n; ++v)
      if (alive(v, i)) ++(trace.in_a[static_cast<std::size_t>(v)] ? a_count : b_count);
    rep.conditions[0].record(window(b_count, n0, i), i);
    rep.conditions[0].record(window(a_count - odd, n0, i), i);

    // (ii)
    std::fill(deg.begin(), deg.end(), 0);
    for (const auto& [a, b] : trace.h_edges)
      if (alive(a, i) && alive(b, i)) {
        ++deg[static_cast<std::size_t>(a)];
        ++deg[static_cast<std::size_t>(b)];
      }
    for (Vertex v = 0; v < n; ++v)
      if (alive(v, i)) rep.conditions[1].record(window(deg[static_cast<std::size_t>(v)], n0 * rep.q, i), i);

    // (iii)
    for (Vertex v = 0; v < n; ++v) {
      Vertex into_a = 0;
      Vertex into_b = 0;
      for (Vertex y : g.neighbors(v))
        if (alive(y, i)) ++(trace.in_a[static_cast<std::size_t>(y)] ? into_a : into_b);
      rep.conditions[2].record(window(into_a, n0 * rep.p, i), i);
      rep.conditions[2].record(window(into_b, n0 * rep.p, i), i);
    }

    // (iv)
    auto surviving = [&](const std::vector<Vertex>& xs) {
      return static_cast<double>(std::count_if(xs.begin(), xs.end(), [&](Vertex x) { return alive(x, i); }));
    };
    for (const auto& es : sets)
      for (const auto* xs : {&es.a_g, &es.b_g, &es.a_h, &es.b_h})
        if (!xs->empty()) rep.conditions[3].record(window(surviving(*xs), static_cast<double>(xs->size()), i), i);

    // (v)
    if (i >= 1 && static_cast<std::size_t>(i - 1) < trace.round_matchings.size()) {
      const auto& prev = trace.round_matchings[static_cast<std::size_t>(i - 1)];
      const double scale = (rep.mu_hat + eps / 3.0) * delta * std::pow(1.0 - delta, static_cast<double>(i - 1));
      for (std::size_t k = 0; k < crossing.size(); ++k) {
        std::int64_t a_bad = 0;
        std::int64_t b_bad = 0;
        for (const auto& e2 : prev) {
          if (e2 == crossing[k]) continue;
          a_bad += is_a_bad(g, s, crossing[k], e2);
          b_bad += is_b_bad(g, s, crossing[k], e2);
        }
        rep.a_bad_total += a_bad;
        rep.b_bad_total += b_bad;
        auto excess = [](double count, double bound) {
          if (bound <= 0) return count > 0 ? count : -1.0;
          return count / bound - 1.0;
        };
        rep.conditions[4].record(excess(static_cast<double>(a_bad), scale * static_cast<double>(sets[k].b_g.size())), i);
        rep.conditions[4].record(excess(static_cast<double>(b_bad), scale * static_cast<double>(sets[k].a_g.size())), i);
      }
    }
  }
  return rep;
}

}  // namespace hamcompat
