#pragma once

#include <stdexcept>
#include <vector>

namespace hamcompat {

struct BipartiteMatching {
  std::vector<int> left_to_right;  // -1 when unmatched
  std::vector<int> right_to_left;
  int size = 0;
};

namespace detail {

inline bool kuhn_augment(int v, const std::vector<std::vector<int>>& adj, BipartiteMatching& m, std::vector<int>& stamp,
                         int round) {
  for (int w : adj[static_cast<std::size_t>(v)]) {
    if (stamp[static_cast<std::size_t>(w)] == round) continue;
    stamp[static_cast<std::size_t>(w)] = round;
    const int owner = m.right_to_left[static_cast<std::size_t>(w)];
    if (owner < 0 || kuhn_augment(owner, adj, m, stamp, round)) {
      m.left_to_right[static_cast<std::size_t>(v)] = w;
      m.right_to_left[static_cast<std::size_t>(w)] = v;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Maximum bipartite matching by augmenting paths (Kuhn). Left vertices are
/// tried in increasing index order and adjacency lists are scanned in the
/// given order, so the result is deterministic. `start` seeds the search with
/// an existing matching over the same index ranges.
inline BipartiteMatching max_bipartite_matching(int left_count, int right_count,
                                                const std::vector<std::vector<int>>& adj,
                                                const BipartiteMatching* start = nullptr) {
  if (static_cast<int>(adj.size()) != left_count) throw std::invalid_argument("adjacency size mismatch");
  BipartiteMatching m;
  if (start) {
    m = *start;
    if (static_cast<int>(m.left_to_right.size()) != left_count || static_cast<int>(m.right_to_left.size()) != right_count)
      throw std::invalid_argument("starting matching has the wrong shape");
  } else {
    m.left_to_right.assign(static_cast<std::size_t>(left_count), -1);
    m.right_to_left.assign(static_cast<std::size_t>(right_count), -1);
  }
  for (const auto& list : adj)
    for (int w : list)
      if (w < 0 || w >= right_count) throw std::invalid_argument("adjacency entry out of range");
  std::vector<int> stamp(static_cast<std::size_t>(right_count), -1);
  for (int v = 0; v < left_count; ++v)
    if (m.left_to_right[static_cast<std::size_t>(v)] < 0) detail::kuhn_augment(v, adj, m, stamp, v);
  m.size = 0;
  for (int w : m.left_to_right)
    if (w >= 0) ++m.size;
  return m;
}

}  // namespace hamcompat
