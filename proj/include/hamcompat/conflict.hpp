#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamcompat/graph.hpp"
#include "hamcompat/rng.hpp"

namespace hamcompat {

enum class ConflictMode { local, global };

/// Either a local incompatibility system {F_v} (pairs of edges meeting at v)
/// or a global edge colouring whose conflicts are equal colours anywhere in
/// the graph.
class ConflictSystem {
 public:
  ConflictSystem() = default;

  static ConflictSystem empty_local(const Graph& g) {
    ConflictSystem s;
    s.mode_ = ConflictMode::local;
    s.endpoints_ = g.edges();
    s.partners_.assign(2 * g.edges().size(), {});
    return s;
  }

  static ConflictSystem global(const Graph& g, std::vector<int> colors) {
    if (colors.size() != g.edges().size()) {
      throw std::invalid_argument("colouring covers " + std::to_string(colors.size()) + " edges, graph has " +
                                  std::to_string(g.size()));
    }
    ConflictSystem s;
    s.mode_ = ConflictMode::global;
    s.endpoints_ = g.edges();
    s.colors_ = std::move(colors);
    return s;
  }

  ConflictMode mode() const { return mode_; }
  EdgeId edge_count() const { return static_cast<EdgeId>(endpoints_.size()); }

  /// Records {e, f} in F_v. Both edges must contain v and differ; adding an
  /// existing pair is a no-op.
  void add_conflict(Vertex v, EdgeId e, EdgeId f) {
    if (mode_ != ConflictMode::local) throw std::logic_error("add_conflict on a global system");
    check_edge(e);
    check_edge(f);
    if (e == f) throw std::invalid_argument("conflict pair needs two distinct edges");
    const auto& pe = endpoints_[static_cast<std::size_t>(e)];
    const auto& pf = endpoints_[static_cast<std::size_t>(f)];
    if (!pe.contains(v) || !pf.contains(v)) {
      throw std::invalid_argument("edges " + std::to_string(e) + "," + std::to_string(f) + " do not both meet vertex " +
                                  std::to_string(v));
    }
    insert_sorted(slot(e, v), f);
    insert_sorted(slot(f, v), e);
  }

  bool has_conflict(Vertex v, EdgeId e, EdgeId f) const {
    if (mode_ != ConflictMode::local) return false;
    const auto& pe = endpoints_[static_cast<std::size_t>(e)];
    if (!pe.contains(v)) return false;
    const auto& list = partners_[slot_index(e, v)];
    return std::binary_search(list.begin(), list.end(), f);
  }

  /// False iff e and f conflict: LOCAL, {e,f} in F_v for their shared vertex;
  /// GLOBAL, equal colours. Non-incident pairs are always compatible in LOCAL
  /// mode.
  bool compatible(EdgeId e, EdgeId f) const {
    check_edge(e);
    check_edge(f);
    if (e == f) throw std::invalid_argument("compatibility query needs two distinct edges");
    if (mode_ == ConflictMode::global) return colors_[static_cast<std::size_t>(e)] != colors_[static_cast<std::size_t>(f)];
    const auto& pe = endpoints_[static_cast<std::size_t>(e)];
    const auto& pf = endpoints_[static_cast<std::size_t>(f)];
    for (Vertex v : {pe.u, pe.v})
      if (pf.contains(v) && has_conflict(v, e, f)) return false;
    return true;
  }

  /// Edges f with {e, f} in F_v, ascending.
  const std::vector<EdgeId>& partners(Vertex v, EdgeId e) const {
    check_edge(e);
    if (mode_ != ConflictMode::local) throw std::logic_error("partners() on a global system");
    if (!endpoints_[static_cast<std::size_t>(e)].contains(v)) throw std::invalid_argument("edge not incident to vertex");
    return partners_[slot_index(e, v)];
  }

  int color(EdgeId e) const {
    check_edge(e);
    if (mode_ != ConflictMode::global) throw std::logic_error("color() on a local system");
    return colors_[static_cast<std::size_t>(e)];
  }
  const std::vector<int>& colors() const { return colors_; }
  const VertexPair& endpoints(EdgeId e) const { return endpoints_.at(static_cast<std::size_t>(e)); }

  struct LocalConflict {
    Vertex v;
    EdgeId a;
    EdgeId b;  // a < b
    friend bool operator==(const LocalConflict&, const LocalConflict&) = default;
  };

  /// All pairs of every F_v, ordered by (v, a, b).
  std::vector<LocalConflict> local_conflicts() const {
    std::vector<LocalConflict> out;
    if (mode_ != ConflictMode::local) return out;
    for (EdgeId e = 0; e < edge_count(); ++e) {
      const auto& pe = endpoints_[static_cast<std::size_t>(e)];
      for (Vertex v : {pe.u, pe.v})
        for (EdgeId f : partners_[slot_index(e, v)])
          if (e < f) out.push_back({v, e, f});
    }
    std::sort(out.begin(), out.end(), [](const LocalConflict& x, const LocalConflict& y) {
      return std::tie(x.v, x.a, x.b) < std::tie(y.v, y.a, y.b);
    });
    return out;
  }

  std::size_t conflict_count() const {
    std::size_t total = 0;
    for (const auto& l : partners_) total += l.size();
    return total / 2;
  }

  friend bool operator==(const ConflictSystem& x, const ConflictSystem& y) {
    return x.mode_ == y.mode_ && x.endpoints_ == y.endpoints_ && x.partners_ == y.partners_ && x.colors_ == y.colors_;
  }

 private:
  void check_edge(EdgeId e) const {
    if (e < 0 || e >= edge_count()) throw std::out_of_range("unknown edge id " + std::to_string(e));
  }
  std::size_t slot_index(EdgeId e, Vertex v) const {
    return 2 * static_cast<std::size_t>(e) + (endpoints_[static_cast<std::size_t>(e)].u == v ? 0 : 1);
  }
  std::vector<EdgeId>& slot(EdgeId e, Vertex v) { return partners_[slot_index(e, v)]; }
  static void insert_sorted(std::vector<EdgeId>& list, EdgeId f) {
    auto it = std::lower_bound(list.begin(), list.end(), f);
    if (it == list.end() || *it != f) list.insert(it, f);
  }

  ConflictMode mode_ = ConflictMode::local;
  std::vector<VertexPair> endpoints_;
  std::vector<std::vector<EdgeId>> partners_;  // 2 slots per edge: at u, at v
  std::vector<int> colors_;
};

/// The smallest Delta for which the system is Delta-bounded, with a witness.
struct BoundReport {
  int max_bound = 0;
  Vertex witness_vertex = -1;  // LOCAL
  EdgeId witness_edge = -1;    // LOCAL
  int witness_color = -1;      // GLOBAL
};

inline BoundReport max_bound(const ConflictSystem& s) {
  BoundReport rep;
  if (s.mode() == ConflictMode::global) {
    std::map<int, int> counts;
    for (int c : s.colors()) ++counts[c];
    for (auto [c, k] : counts)
      if (k > rep.max_bound) {
        rep.max_bound = k;
        rep.witness_color = c;
      }
    return rep;
  }
  for (EdgeId e = 0; e < s.edge_count(); ++e) {
    const auto& pe = s.endpoints(e);
    for (Vertex v : {pe.u, pe.v}) {
      const int k = static_cast<int>(s.partners(v, e).size());
      if (k > rep.max_bound) {
        rep.max_bound = k;
        rep.witness_vertex = v;
        rep.witness_edge = e;
      }
    }
  }
  return rep;
}

/// Local system of a colouring: {e, f} in F_v exactly when e, f meet at v and
/// share a colour.
inline ConflictSystem from_local_coloring(const Graph& g, const std::vector<int>& colors) {
  if (colors.size() != g.edges().size()) {
    throw std::invalid_argument("every edge needs a colour (" + std::to_string(colors.size()) + " of " +
                                std::to_string(g.size()) + " given)");
  }
  auto s = ConflictSystem::empty_local(g);
  for (Vertex v = 0; v < g.order(); ++v) {
    auto inc = g.incident_edges(v);
    for (std::size_t i = 0; i < inc.size(); ++i)
      for (std::size_t j = i + 1; j < inc.size(); ++j)
        if (colors[static_cast<std::size_t>(inc[i])] == colors[static_cast<std::size_t>(inc[j])])
          s.add_conflict(v, inc[i], inc[j]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Adversarial generators

struct RandomBounded {
  int delta = 0;
};
struct StarKiller {
  Vertex vertex = 0;
};
struct GlobalRandom {
  int bound = 1;
};
using AdversaryKind = std::variant<RandomBounded, StarKiller, GlobalRandom>;

/// Random local system in which every (vertex, edge) slot is filled up to
/// min(delta, deg(v) - 1) partners by rejection sampling: a drawn partner is
/// rejected when it is the edge itself, already paired, or its own slot is full.
inline ConflictSystem gen_random_bounded(const Graph& g, int delta, std::uint64_t seed) {
  if (delta < 0) throw std::invalid_argument("delta must be non-negative");
  auto s = ConflictSystem::empty_local(g);
  if (delta == 0) return s;
  Rng rng = make_rng(seed);
  for (Vertex v = 0; v < g.order(); ++v) {
    auto inc = g.incident_edges(v);
    const int deg = static_cast<int>(inc.size());
    const int cap = std::min(delta, deg - 1);
    if (cap <= 0) continue;
    for (EdgeId e : inc) {
      int tries = 4 * cap + 8;
      while (static_cast<int>(s.partners(v, e).size()) < cap && tries-- > 0) {
        EdgeId f = inc[static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(deg)))];
        if (f == e || s.has_conflict(v, e, f)) continue;
        if (static_cast<int>(s.partners(v, f).size()) >= cap) continue;
        s.add_conflict(v, e, f);
      }
    }
  }
  return s;
}

/// Every pair of edges at `vertex` conflicts.
inline ConflictSystem gen_star_killer(const Graph& g, Vertex vertex) {
  if (!g.valid(vertex)) throw std::invalid_argument("star_killer vertex out of range");
  auto s = ConflictSystem::empty_local(g);
  auto inc = g.incident_edges(vertex);
  for (std::size_t i = 0; i < inc.size(); ++i)
    for (std::size_t j = i + 1; j < inc.size(); ++j) s.add_conflict(vertex, inc[i], inc[j]);
  return s;
}

/// Global colouring using each colour at most `bound` times: ceil(m/bound)
/// colours, each offered `bound` slots, slots shuffled and dealt to edges.
inline ConflictSystem gen_global_random(const Graph& g, int bound, std::uint64_t seed) {
  if (bound < 1) throw std::invalid_argument("global colour bound must be at least 1");
  const auto m = static_cast<std::size_t>(g.size());
  const std::size_t ncolors = (m + static_cast<std::size_t>(bound) - 1) / static_cast<std::size_t>(bound);
  std::vector<int> slots;
  slots.reserve(ncolors * static_cast<std::size_t>(bound));
  for (std::size_t c = 0; c < ncolors; ++c)
    for (int k = 0; k < bound; ++k) slots.push_back(static_cast<int>(c));
  Rng rng = make_rng(seed);
  shuffle(slots, rng);
  slots.resize(m);
  return ConflictSystem::global(g, std::move(slots));
}

inline ConflictSystem gen_adversarial(const Graph& g, const AdversaryKind& kind, std::uint64_t seed) {
  return std::visit(
      [&](const auto& k) -> ConflictSystem {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, RandomBounded>) return gen_random_bounded(g, k.delta, seed);
        else if constexpr (std::is_same_v<K, StarKiller>) return gen_star_killer(g, k.vertex);
        else return gen_global_random(g, k.bound, seed);
      },
      kind);
}

// ---------------------------------------------------------------------------
// Files. LOCAL: {"mode":"local","conflicts":[{"vertex":v,"edge_a":[x,y],"edge_b":[x,z]},...]}.
// GLOBAL: one "u v color" line per edge.

inline nlohmann::json local_system_to_json(const Graph& g, const ConflictSystem& s) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& c : s.local_conflicts()) {
    const auto& a = g.endpoints(c.a);
    const auto& b = g.endpoints(c.b);
    records.push_back({{"vertex", c.v}, {"edge_a", {a.u, a.v}}, {"edge_b", {b.u, b.v}}});
  }
  return {{"mode", "local"}, {"conflicts", std::move(records)}};
}

inline ConflictSystem local_system_from_json(const Graph& g, const nlohmann::json& j) {
  if (j.value("mode", std::string("local")) != "local") throw std::invalid_argument("expected a local conflict system");
  auto s = ConflictSystem::empty_local(g);
  std::size_t index = 0;
  for (const auto& rec : j.at("conflicts")) {
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("conflict record " + std::to_string(index) + " (" + rec.dump() + "): " + why);
    };
    try {
      const auto v = rec.at("vertex").get<Vertex>();
      const auto ea = rec.at("edge_a");
      const auto eb = rec.at("edge_b");
      auto ida = g.edge_id(ea.at(0).get<Vertex>(), ea.at(1).get<Vertex>());
      auto idb = g.edge_id(eb.at(0).get<Vertex>(), eb.at(1).get<Vertex>());
      if (!ida) fail("edge_a is not an edge of the graph");
      if (!idb) fail("edge_b is not an edge of the graph");
      if (*ida == *idb) fail("edge_a and edge_b coincide");
      if (!g.endpoints(*ida).contains(v) || !g.endpoints(*idb).contains(v)) fail("edges do not both meet the vertex");
      s.add_conflict(v, *ida, *idb);
    } catch (const nlohmann::json::exception& e) {
      fail(e.what());
    }
    ++index;
  }
  return s;
}

inline void write_global_coloring(std::ostream& os, const Graph& g, const ConflictSystem& s) {
  for (EdgeId e = 0; e < g.size(); ++e) {
    const auto& p = g.endpoints(e);
    os << p.u << ' ' << p.v << ' ' << s.color(e) << '\n';
  }
}

inline ConflictSystem read_global_coloring(std::istream& is, const Graph& g) {
  std::vector<int> colors(static_cast<std::size_t>(g.size()), -1);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long u, v, c;
    std::string extra;
    if (!(ls >> u >> v >> c) || (ls >> extra)) {
      throw std::invalid_argument("colour line " + std::to_string(lineno) + " must read \"u v color\": " + line);
    }
    auto id = g.edge_id(static_cast<Vertex>(u), static_cast<Vertex>(v));
    if (!id) throw std::invalid_argument("colour line " + std::to_string(lineno) + ": (" + std::to_string(u) + "," +
                                         std::to_string(v) + ") is not an edge");
    if (colors[static_cast<std::size_t>(*id)] != -1)
      throw std::invalid_argument("colour line " + std::to_string(lineno) + ": edge coloured twice");
    if (c < 0) throw std::invalid_argument("colour line " + std::to_string(lineno) + ": negative colour");
    colors[static_cast<std::size_t>(*id)] = static_cast<int>(c);
  }
  for (EdgeId e = 0; e < g.size(); ++e)
    if (colors[static_cast<std::size_t>(e)] < 0) {
      const auto& p = g.endpoints(e);
      throw std::invalid_argument("edge (" + std::to_string(p.u) + "," + std::to_string(p.v) + ") has no colour");
    }
  return ConflictSystem::global(g, std::move(colors));
}

inline void write_system(std::ostream& os, const Graph& g, const ConflictSystem& s) {
  if (s.mode() == ConflictMode::local) os << local_system_to_json(g, s).dump(1) << '\n';
  else write_global_coloring(os, g, s);
}

/// Loads either file kind; a leading '{' selects the local JSON form.
inline ConflictSystem read_system(std::istream& is, const Graph& g) {
  is >> std::ws;
  if (is.peek() == '{') return local_system_from_json(g, nlohmann::json::parse(is));
  return read_global_coloring(is, g);
}

}  // namespace hamcompat
