#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hamcompat/graph.hpp"

namespace hamcompat {

/// (k, r)-expansion: every X with |X| <= k has |N(X) \ X| >= r|X|.
struct ExpanderParams {
  int k = 1;
  int r = 2;
  std::int64_t enumeration_budget = 10'000'000;

  /// The (floor(n/4), 2) setting used for rotation-extension.
  static ExpanderParams quarter(Vertex n, std::int64_t budget = 10'000'000) {
    return {std::max(1, static_cast<int>(n / 4)), 2, budget};
  }
};

enum class ExpanderStatus { certified_true, certified_false, budget_exceeded };

struct ExpanderResult {
  ExpanderStatus status = ExpanderStatus::budget_exceeded;
  std::vector<Vertex> witness;     // violating X when certified_false
  std::int64_t sets_examined = 0;
};

namespace detail {

/// Dynamic bitset over vertices, just enough for closed-neighbourhood unions.
class VertexSet {
 public:
  explicit VertexSet(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(Vertex v) { words_[static_cast<std::size_t>(v) / 64] |= std::uint64_t{1} << (static_cast<std::size_t>(v) % 64); }
  void unite(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  }
  std::int64_t count() const {
    std::int64_t c = 0;
    for (auto w : words_) c += __builtin_popcountll(w);
    return c;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct ExpansionSearch {
  const Graph& g;
  const ExpanderParams& params;
  std::vector<VertexSet> closed;  // N[v] = {v} u N(v)
  std::vector<Vertex> current;
  std::int64_t examined = 0;
  bool out_of_budget = false;
  std::vector<Vertex> witness;

  // Depth-first over X in increasing vertex order. N[X] only grows as X grows,
  // and a violation needs |N[X']| < (r+1)|X'| <= (r+1)k, so a branch whose
  // closed neighbourhood already reaches (r+1)k cannot contain a violation.
  bool descend(Vertex first, const VertexSet& cover) {
    for (Vertex v = first; v < g.order(); ++v) {
      if (examined >= params.enumeration_budget) {
        out_of_budget = true;
        return false;
      }
      ++examined;
      VertexSet next = cover;
      next.unite(closed[static_cast<std::size_t>(v)]);
      current.push_back(v);
      const auto size = static_cast<std::int64_t>(current.size());
      const auto closed_size = next.count();
      if (closed_size - size < static_cast<std::int64_t>(params.r) * size) {
        witness = current;
        return true;
      }
      const auto cap = static_cast<std::int64_t>(params.r + 1) * params.k;
      if (size < params.k && closed_size < cap && descend(v + 1, next)) return true;
      current.pop_back();
      if (out_of_budget) return false;
    }
    return false;
  }
};

}  // namespace detail

/// Exact (k, r)-expansion certificate by pruned subset enumeration.
/// enumeration_budget bounds the number of subsets visited; when it runs out
/// without a violation the answer is budget_exceeded. Cheap structural
/// checks (singletons, components, pairs) run first.
inline ExpanderResult is_expander(const Graph& g, const ExpanderParams& params) {
  if (params.k < 1 || params.r < 1) throw std::invalid_argument("expander parameters need k >= 1 and r >= 1");
  ExpanderResult res;
  const Vertex n = g.order();
  if (n == 0) {
    res.status = ExpanderStatus::certified_true;
    return res;
  }
  const int k = std::min<int>(params.k, n);

  auto violates = [&](const std::vector<Vertex>& xs) {
    return static_cast<std::int64_t>(outer_neighbourhood(g, xs).size()) <
           static_cast<std::int64_t>(params.r) * static_cast<std::int64_t>(xs.size());
  };

  // Singletons.
  for (Vertex v = 0; v < n; ++v) {
    ++res.sets_examined;
    if (g.degree(v) < params.r) {
      res.status = ExpanderStatus::certified_false;
      res.witness = {v};
      return res;
    }
  }
  // A component C with |C| <= k violates outright; otherwise its first k
  // vertices can only see |C| - k outside vertices.
  auto comps = connected_components(g);
  if (comps.size() > 1) {
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    for (const auto& c : comps) {
      std::vector<Vertex> xs(c.begin(), c.begin() + std::min<std::ptrdiff_t>(k, static_cast<std::ptrdiff_t>(c.size())));
      ++res.sets_examined;
      if (violates(xs)) {
        res.status = ExpanderStatus::certified_false;
        res.witness = std::move(xs);
        return res;
      }
    }
  }

  ExpanderParams capped = params;
  capped.k = k;
  detail::ExpansionSearch search{g, capped, {}, {}, 0, false, {}};
  search.closed.reserve(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) {
    detail::VertexSet s(static_cast<std::size_t>(n));
    s.set(v);
    for (Vertex y : g.neighbors(v)) s.set(y);
    search.closed.push_back(std::move(s));
  }

  // Pairs, when affordable, so that a budget-limited run still screens them.
  const auto pair_count = static_cast<std::int64_t>(n) * (n - 1) / 2;
  if (k >= 2 && pair_count <= params.enumeration_budget) {
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) {
        ++res.sets_examined;
        auto cover = search.closed[static_cast<std::size_t>(u)];
        cover.unite(search.closed[static_cast<std::size_t>(v)]);
        if (cover.count() - 2 < 2 * static_cast<std::int64_t>(params.r)) {
          res.status = ExpanderStatus::certified_false;
          res.witness = {u, v};
          return res;
        }
      }
  }

  const bool found = search.descend(0, detail::VertexSet(static_cast<std::size_t>(n)));
  res.sets_examined += search.examined;
  if (found) {
    res.status = ExpanderStatus::certified_false;
    res.witness = search.witness;
  } else {
    res.status = search.out_of_budget ? ExpanderStatus::budget_exceeded : ExpanderStatus::certified_true;
  }
  return res;
}

}  // namespace hamcompat
