#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamcompat/rng.hpp"

namespace hamcompat {

using Vertex = std::int32_t;
using EdgeId = std::int32_t;

/// Unordered vertex pair stored with u < v.
struct VertexPair {
  Vertex u = 0;
  Vertex v = 0;

  static VertexPair of(Vertex a, Vertex b) { return a < b ? VertexPair{a, b} : VertexPair{b, a}; }
  bool contains(Vertex x) const { return u == x || v == x; }
  Vertex other(Vertex x) const { return x == u ? v : u; }

  friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

/// Square bit matrix used for O(1) adjacency queries.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  bool test(std::size_t r, std::size_t c) const { return (bits_[r * words_ + c / 64] >> (c % 64)) & 1U; }
  void set(std::size_t r, std::size_t c) { bits_[r * words_ + c / 64] |= std::uint64_t{1} << (c % 64); }
  void reset(std::size_t r, std::size_t c) { bits_[r * words_ + c / 64] &= ~(std::uint64_t{1} << (c % 64)); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Simple undirected graph. Immutable after construction; edge ids follow the
/// lexicographic order of (min endpoint, max endpoint).
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an arbitrary list of pairs. Rejects self-loops,
  /// out-of-range endpoints and parallel edges.
  static Graph from_edges(Vertex n, std::vector<VertexPair> pairs) {
    if (n < 0) throw std::invalid_argument("vertex count must be non-negative");
    for (auto& e : pairs) {
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
      if (e.u < 0 || e.v >= n) {
        throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                    ") outside vertex range");
      }
    }
    std::sort(pairs.begin(), pairs.end());
    if (auto dup = std::adjacent_find(pairs.begin(), pairs.end()); dup != pairs.end()) {
      throw std::invalid_argument("parallel edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
    }
    return Graph(n, std::move(pairs));
  }

  static Graph from_edges(Vertex n, const std::vector<std::pair<Vertex, Vertex>>& pairs) {
    std::vector<VertexPair> edges;
    edges.reserve(pairs.size());
    for (auto [a, b] : pairs) edges.push_back({a, b});
    return from_edges(n, std::move(edges));
  }

  static Graph complete(Vertex n) {
    std::vector<VertexPair> edges;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph(n, std::move(edges));
  }

  static Graph cycle(Vertex n) {
    std::vector<VertexPair> edges;
    for (Vertex i = 0; i < n; ++i) edges.push_back(VertexPair::of(i, (i + 1) % n));
    return from_edges(n, std::move(edges));
  }

  Vertex order() const { return n_; }
  EdgeId size() const { return static_cast<EdgeId>(edges_.size()); }
  const std::vector<VertexPair>& edges() const { return edges_; }

  bool has_edge(Vertex u, Vertex v) const {
    if (u == v || !valid(u) || !valid(v)) return false;
    return adj_.test(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  }

  std::optional<EdgeId> edge_id(Vertex u, Vertex v) const {
    if (!has_edge(u, v)) return std::nullopt;
    const auto& nb = nbrs_[static_cast<std::size_t>(u)];
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    return inc_[static_cast<std::size_t>(u)][static_cast<std::size_t>(it - nb.begin())];
  }

  EdgeId require_edge(Vertex u, Vertex v) const {
    if (auto id = edge_id(u, v)) return *id;
    throw std::invalid_argument("no edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
  }

  const VertexPair& endpoints(EdgeId e) const {
    if (e < 0 || e >= size()) throw std::out_of_range("edge id " + std::to_string(e) + " out of range");
    return edges_[static_cast<std::size_t>(e)];
  }

  /// Neighbours of v in ascending order.
  std::span<const Vertex> neighbors(Vertex v) const { return nbrs_.at(static_cast<std::size_t>(v)); }
  /// Edge ids parallel to neighbors(v).
  std::span<const EdgeId> incident_edges(Vertex v) const { return inc_.at(static_cast<std::size_t>(v)); }

  Vertex degree(Vertex v) const { return static_cast<Vertex>(nbrs_.at(static_cast<std::size_t>(v)).size()); }
  Vertex min_degree() const {
    Vertex best = n_ > 0 ? degree(0) : 0;
    for (Vertex v = 1; v < n_; ++v) best = std::min(best, degree(v));
    return best;
  }
  Vertex max_degree() const {
    Vertex best = 0;
    for (Vertex v = 0; v < n_; ++v) best = std::max(best, degree(v));
    return best;
  }

  bool valid(Vertex v) const { return v >= 0 && v < n_; }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  Graph(Vertex n, std::vector<VertexPair> sorted_edges)
      : n_(n), edges_(std::move(sorted_edges)), nbrs_(static_cast<std::size_t>(n)), inc_(static_cast<std::size_t>(n)),
        adj_(static_cast<std::size_t>(n)) {
    for (EdgeId id = 0; id < size(); ++id) {
      auto [u, v] = edges_[static_cast<std::size_t>(id)];
      nbrs_[static_cast<std::size_t>(u)].push_back(v);
      inc_[static_cast<std::size_t>(u)].push_back(id);
      nbrs_[static_cast<std::size_t>(v)].push_back(u);
      inc_[static_cast<std::size_t>(v)].push_back(id);
      adj_.set(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
      adj_.set(static_cast<std::size_t>(v), static_cast<std::size_t>(u));
    }
    // Edges arrive sorted by (u, v), so u's list is sorted already; v's list
    // receives lower neighbours first, then higher ones, also sorted.
  }

  Vertex n_ = 0;
  std::vector<VertexPair> edges_;
  std::vector<std::vector<Vertex>> nbrs_;
  std::vector<std::vector<EdgeId>> inc_;
  BitMatrix adj_;
};

/// Number of edges with both endpoints in xs.
inline std::int64_t edges_within(const Graph& g, std::span<const Vertex> xs) {
  std::int64_t count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) count += g.has_edge(xs[i], xs[j]) ? 1 : 0;
  return count;
}

/// e(X, Y) for disjoint X and Y.
inline std::int64_t edges_between(const Graph& g, std::span<const Vertex> xs, std::span<const Vertex> ys) {
  std::int64_t count = 0;
  for (Vertex x : xs)
    for (Vertex y : ys) count += g.has_edge(x, y) ? 1 : 0;
  return count;
}

/// N(X) \ X, sorted.
inline std::vector<Vertex> outer_neighbourhood(const Graph& g, std::span<const Vertex> xs) {
  std::vector<char> in_x(static_cast<std::size_t>(g.order()), 0), seen(static_cast<std::size_t>(g.order()), 0);
  for (Vertex x : xs) in_x[static_cast<std::size_t>(x)] = 1;
  std::vector<Vertex> out;
  for (Vertex x : xs)
    for (Vertex y : g.neighbors(x))
      if (!in_x[static_cast<std::size_t>(y)] && !seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = 1;
        out.push_back(y);
      }
  std::sort(out.begin(), out.end());
  return out;
}

/// Connected components, each sorted; components ordered by smallest vertex.
inline std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
  std::vector<int> comp(static_cast<std::size_t>(g.order()), -1);
  std::vector<std::vector<Vertex>> out;
  for (Vertex s = 0; s < g.order(); ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<Vertex> stack{s};
    comp[static_cast<std::size_t>(s)] = id;
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      out.back().push_back(x);
      for (Vertex y : g.neighbors(x))
        if (comp[static_cast<std::size_t>(y)] < 0) {
          comp[static_cast<std::size_t>(y)] = id;
          stack.push_back(y);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

/// Directed graph without self-arcs.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(Vertex m) : m_(m), out_(static_cast<std::size_t>(m)), in_(static_cast<std::size_t>(m)), arcs_(static_cast<std::size_t>(m)) {}

  static Digraph from_arcs(Vertex m, const std::vector<std::pair<Vertex, Vertex>>& arcs) {
    Digraph d(m);
    for (auto [i, j] : arcs) d.add_arc(i, j);
    d.finalize();
    return d;
  }

  /// Adds arc (i, j); duplicate arcs are ignored. Call finalize() before
  /// relying on sorted adjacency.
  void add_arc(Vertex i, Vertex j) {
    if (i == j) throw std::invalid_argument("self-arc at " + std::to_string(i));
    if (i < 0 || j < 0 || i >= m_ || j >= m_) throw std::invalid_argument("arc endpoint out of range");
    if (has_arc(i, j)) return;
    arcs_.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    out_[static_cast<std::size_t>(i)].push_back(j);
    in_[static_cast<std::size_t>(j)].push_back(i);
    ++arc_count_;
  }

  void finalize() {
    for (auto& l : out_) std::sort(l.begin(), l.end());
    for (auto& l : in_) std::sort(l.begin(), l.end());
  }

  Vertex order() const { return m_; }
  std::int64_t arc_count() const { return arc_count_; }
  bool has_arc(Vertex i, Vertex j) const {
    if (i < 0 || j < 0 || i >= m_ || j >= m_ || i == j) return false;
    return arcs_.test(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  std::span<const Vertex> out_neighbors(Vertex i) const { return out_.at(static_cast<std::size_t>(i)); }
  std::span<const Vertex> in_neighbors(Vertex i) const { return in_.at(static_cast<std::size_t>(i)); }
  Vertex out_degree(Vertex i) const { return static_cast<Vertex>(out_.at(static_cast<std::size_t>(i)).size()); }
  Vertex in_degree(Vertex i) const { return static_cast<Vertex>(in_.at(static_cast<std::size_t>(i)).size()); }

  std::vector<std::pair<Vertex, Vertex>> arcs() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (Vertex i = 0; i < m_; ++i)
      for (Vertex j : out_[static_cast<std::size_t>(i)]) out.emplace_back(i, j);
    return out;
  }

 private:
  Vertex m_ = 0;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
  BitMatrix arcs_;
  std::int64_t arc_count_ = 0;
};

/// Ordered sequence of distinct vertices. |P| is the number of vertices.
struct Path {
  std::vector<Vertex> vertices;

  std::size_t size() const { return vertices.size(); }
  Vertex front() const { return vertices.front(); }
  Vertex back() const { return vertices.back(); }
  friend bool operator==(const Path&, const Path&) = default;
};

/// Cyclic vertex sequence; the closing step back to the first vertex is implicit.
struct Cycle {
  std::vector<Vertex> vertices;

  std::size_t size() const { return vertices.size(); }
  friend bool operator==(const Cycle&, const Cycle&) = default;
};

/// True when the vertices are distinct and each consecutive pair is an edge of g.
inline bool is_path_in(const Graph& g, const Path& p) {
  std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    Vertex v = p.vertices[i];
    if (!g.valid(v) || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
    if (i > 0 && !g.has_edge(p.vertices[i - 1], v)) return false;
  }
  return true;
}

/// Union of g and the edges of path p (same vertex set).
inline Graph with_path_edges(const Graph& g, const Path& p) {
  std::vector<VertexPair> edges = g.edges();
  for (std::size_t i = 1; i < p.size(); ++i) {
    auto e = VertexPair::of(p.vertices[i - 1], p.vertices[i]);
    if (!g.has_edge(e.u, e.v)) edges.push_back(e);
  }
  return Graph::from_edges(g.order(), std::move(edges));
}

/// G(n, p): every unordered pair is drawn independently, in lexicographic pair
/// order, from a generator seeded with `seed`.
inline Graph gen_gnp(Vertex n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0,1]");
  if (n < 0) throw std::invalid_argument("vertex count must be non-negative");
  Rng rng = make_rng(seed);
  std::vector<VertexPair> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (bernoulli(rng, p)) edges.push_back({u, v});
  return Graph::from_edges(n, std::move(edges));
}

// ---------------------------------------------------------------------------
// Serialization

inline void write_graph_text(std::ostream& os, const Graph& g) {
  os << g.order() << ' ' << g.size() << '\n';
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

inline std::string graph_to_text(const Graph& g) {
  std::ostringstream os;
  write_graph_text(os, g);
  return os.str();
}

/// Parses the "n m" + m lines "u v" format. Lines must be u < v and appear in
/// edge-id order.
inline Graph read_graph_text(std::istream& is) {
  long long n = -1, m = -1;
  if (!(is >> n >> m) || n < 0 || m < 0) throw std::invalid_argument("graph header must be \"n m\"");
  std::vector<VertexPair> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u, v;
    if (!(is >> u >> v)) throw std::invalid_argument("graph file truncated at edge " + std::to_string(i));
    if (u >= v) throw std::invalid_argument("edge line " + std::to_string(i) + " must satisfy u < v");
    VertexPair e{static_cast<Vertex>(u), static_cast<Vertex>(v)};
    if (!edges.empty() && !(edges.back() < e)) {
      throw std::invalid_argument("edge line " + std::to_string(i) + " out of edge-id order");
    }
    edges.push_back(e);
  }
  std::string trailing;
  if (is >> trailing) throw std::invalid_argument("unexpected trailing data in graph file");
  return Graph::from_edges(static_cast<Vertex>(n), std::move(edges));
}

inline Graph graph_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_graph_text(is);
}

inline nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.order()}, {"m", g.size()}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const nlohmann::json& j) {
  const auto n = j.at("n").get<Vertex>();
  std::vector<VertexPair> edges;
  for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<Vertex>(), e.at(1).get<Vertex>()});
  if (j.contains("m") && j.at("m").get<std::size_t>() != edges.size()) {
    throw std::invalid_argument("edge count does not match \"m\"");
  }
  return Graph::from_edges(n, std::move(edges));
}

/// Reads either format; structured objects start with '{'.
inline Graph read_graph(std::istream& is) {
  is >> std::ws;
  if (is.peek() == '{') return graph_from_json(nlohmann::json::parse(is));
  return read_graph_text(is);
}

}  // namespace hamcompat
