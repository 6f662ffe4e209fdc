#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hamcompat/graph.hpp"
#include "hamcompat/rng.hpp"

namespace hamcompat {

/// Finite-n stand-ins for the o(1) slack in the G(n,p) regularity properties.
struct PropertyTolerances {
  double degree_slack = 0.25;   // (i): degrees within (1 +- slack)(n-1)p
  double density_margin = 1.0;  // (ii)-(iii): upper bounds multiplied, (iv): lower bound divided
  int pair_samples = 200;       // (iv): random disjoint pairs examined
  double pair_threshold = 8.0;  // (iv): only pairs with |X||Y|p >= threshold * n count
  int set_samples = 200;        // (ii)/(iii): random sets per family
  std::uint64_t sample_seed = 0x5eed;
};

struct PropertyReport {
  bool degrees_ok = false;        // (i)
  bool small_sets_ok = false;     // (ii)
  bool mid_sets_ok = false;       // (iii)
  bool pair_density_ok = false;   // (iv)

  Vertex min_degree = 0;
  Vertex max_degree = 0;
  double expected_degree = 0.0;
  double max_degree_deviation = 0.0;  // max |d(v) - (n-1)p| / ((n-1)p)

  double small_set_cutoff = 0.0;      // (np^4)^{-1/3}
  int small_sets_checked = 0;
  double small_set_worst_ratio = 0.0; // max e(X) / (8|X|)

  int mid_sets_checked = 0;
  double mid_set_worst_ratio = 0.0;   // max e(X) / (t^2 p (n/t)^{1/2})

  int pairs_checked = 0;
  int pairs_skipped = 0;
  double pair_worst_ratio = 0.0;      // min e(X,Y) / (|X||Y|p/2); starts at +inf

  bool all_pass() const { return degrees_ok && small_sets_ok && mid_sets_ok && pair_density_ok; }
};

namespace detail {

inline std::vector<Vertex> random_subset(Rng& rng, Vertex n, std::size_t size, std::vector<Vertex>& scratch) {
  scratch.resize(static_cast<std::size_t>(n));
  for (Vertex i = 0; i < n; ++i) scratch[static_cast<std::size_t>(i)] = i;
  for (std::size_t i = 0; i < size; ++i) {
    auto j = i + static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(n) - i));
    std::swap(scratch[i], scratch[j]);
  }
  return {scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(size)};
}

/// Greedy dense set of size t grown from `seed`: repeatedly adds the vertex
/// with most neighbours inside the current set.
inline std::vector<Vertex> greedy_dense_set(const Graph& g, Vertex seed, std::size_t t) {
  std::vector<int> inside_count(static_cast<std::size_t>(g.order()), 0);
  std::vector<char> in(static_cast<std::size_t>(g.order()), 0);
  std::vector<Vertex> set;
  Vertex next = seed;
  while (set.size() < t) {
    set.push_back(next);
    in[static_cast<std::size_t>(next)] = 1;
    for (Vertex y : g.neighbors(next)) ++inside_count[static_cast<std::size_t>(y)];
    int best = -1;
    for (Vertex v = 0; v < g.order(); ++v)
      if (!in[static_cast<std::size_t>(v)] && inside_count[static_cast<std::size_t>(v)] > best) {
        best = inside_count[static_cast<std::size_t>(v)];
        next = v;
      }
    if (best < 0) break;
  }
  return set;
}

}  // namespace detail

/// Checks the four regularity properties of G(n,p) with explicit tolerances.
/// Set families are sampled deterministically from tol.sample_seed, so the
/// examined sets do not depend on degree_slack or density_margin.
inline PropertyReport check_gnp_properties(const Graph& g, double p, const PropertyTolerances& tol = {}) {
  if (g.order() == 0) throw std::invalid_argument("property check needs a nonempty graph");
  if (!(tol.degree_slack > 0 && tol.density_margin > 0 && tol.pair_samples > 0 && tol.pair_threshold > 0)) {
    throw std::invalid_argument("tolerances must be strictly positive");
  }
  const Vertex n = g.order();
  const double nd = static_cast<double>(n);
  PropertyReport rep;
  Rng rng = make_rng(tol.sample_seed);
  std::vector<Vertex> scratch;

  // (i)
  rep.expected_degree = (nd - 1.0) * p;
  rep.min_degree = g.min_degree();
  rep.max_degree = g.max_degree();
  if (rep.expected_degree > 0) {
    rep.max_degree_deviation = std::max(std::abs(rep.min_degree - rep.expected_degree),
                                        std::abs(rep.max_degree - rep.expected_degree)) /
                               rep.expected_degree;
  } else {
    rep.max_degree_deviation = rep.max_degree > 0 ? INFINITY : 0.0;
  }
  rep.degrees_ok = rep.max_degree_deviation <= tol.degree_slack;

  // (ii) sets below (np^4)^{-1/3}: greedy dense sets and uniform random sets.
  const double np4 = nd * std::pow(p, 4);
  rep.small_set_cutoff = np4 > 0 ? std::pow(np4, -1.0 / 3.0) : INFINITY;
  const double small_limit = std::min(nd, std::ceil(rep.small_set_cutoff) - 1.0);
  const auto small_max = small_limit < 1.0 ? std::size_t{0} : static_cast<std::size_t>(small_limit);
  auto check_small = [&](const std::vector<Vertex>& xs) {
    if (xs.empty()) return;
    ++rep.small_sets_checked;
    const double ratio = static_cast<double>(edges_within(g, xs)) / (8.0 * static_cast<double>(xs.size()));
    rep.small_set_worst_ratio = std::max(rep.small_set_worst_ratio, ratio);
  };
  if (small_max >= 1) {
    for (int s = 0; s < tol.set_samples; ++s) {
      const auto t = 1 + static_cast<std::size_t>(uniform_below(rng, small_max));
      const auto v = static_cast<Vertex>(uniform_below(rng, static_cast<std::uint64_t>(n)));
      check_small(detail::greedy_dense_set(g, v, t));
      check_small(detail::random_subset(rng, n, t, scratch));
    }
  }
  rep.small_sets_ok = rep.small_set_worst_ratio <= tol.density_margin;

  // (iii) sets of size t in [(np^4)^{-1/3}, n].
  const auto mid_min = static_cast<std::size_t>(std::max(1.0, std::ceil(std::min(rep.small_set_cutoff, nd))));
  auto check_mid = [&](const std::vector<Vertex>& xs) {
    const double t = static_cast<double>(xs.size());
    const double bound = t * t * p * std::sqrt(nd / t);
    ++rep.mid_sets_checked;
    const double ratio = bound > 0 ? static_cast<double>(edges_within(g, xs)) / bound : 0.0;
    rep.mid_set_worst_ratio = std::max(rep.mid_set_worst_ratio, ratio);
  };
  if (mid_min <= static_cast<std::size_t>(n)) {
    const auto span = static_cast<std::uint64_t>(n) - mid_min + 1;
    const int mid_samples = std::max(1, tol.set_samples / 10);
    for (int s = 0; s < mid_samples; ++s) {
      const auto t = mid_min + static_cast<std::size_t>(uniform_below(rng, span));
      const auto v = static_cast<Vertex>(uniform_below(rng, static_cast<std::uint64_t>(n)));
      check_mid(detail::random_subset(rng, n, t, scratch));
      if (t <= 200) check_mid(detail::greedy_dense_set(g, v, t));
    }
  }
  rep.mid_sets_ok = rep.mid_set_worst_ratio <= tol.density_margin;

  // (iv) disjoint pairs with |X||Y|p >= threshold * n: random pairs, random
  // bisections and neighbourhood splits.
  rep.pair_worst_ratio = INFINITY;
  auto check_pair = [&](const std::vector<Vertex>& xs, const std::vector<Vertex>& ys) {
    const double prod = static_cast<double>(xs.size()) * static_cast<double>(ys.size()) * p;
    if (xs.empty() || ys.empty() || prod < tol.pair_threshold * nd) {
      ++rep.pairs_skipped;
      return;
    }
    ++rep.pairs_checked;
    const double ratio = static_cast<double>(edges_between(g, xs, ys)) / (0.5 * prod);
    rep.pair_worst_ratio = std::min(rep.pair_worst_ratio, ratio);
  };
  for (int s = 0; s < tol.pair_samples; ++s) {
    auto perm = detail::random_subset(rng, n, static_cast<std::size_t>(n), scratch);
    const auto kind = s % 3;
    if (kind == 0 && n >= 2) {
      const auto sx = 1 + static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(n - 1)));
      const auto sy = 1 + static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(n) - sx));
      check_pair({perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(sx)},
                 {perm.begin() + static_cast<std::ptrdiff_t>(sx), perm.begin() + static_cast<std::ptrdiff_t>(sx + sy)});
    } else if (kind == 1) {
      const auto half = perm.size() / 2;
      check_pair({perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(half)},
                 {perm.begin() + static_cast<std::ptrdiff_t>(half), perm.end()});
    } else {
      const auto v = perm.front();
      std::vector<Vertex> xs(g.neighbors(v).begin(), g.neighbors(v).end());
      std::vector<char> mark(static_cast<std::size_t>(n), 0);
      mark[static_cast<std::size_t>(v)] = 1;
      for (Vertex x : xs) mark[static_cast<std::size_t>(x)] = 1;
      std::vector<Vertex> ys;
      for (Vertex y = 0; y < n; ++y)
        if (!mark[static_cast<std::size_t>(y)]) ys.push_back(y);
      check_pair(xs, ys);
    }
  }
  rep.pair_density_ok = rep.pairs_checked == 0 || rep.pair_worst_ratio * tol.density_margin >= 1.0;
  return rep;
}

}  // namespace hamcompat
