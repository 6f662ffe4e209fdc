#include <gtest/gtest.h>

#include "hamcompat/reduction.hpp"
#include "support.hpp"

using namespace hamcompat;
using namespace hamcompat::testing;

namespace {

PerfectMatching two_pairs() { return PerfectMatching{{0, 2}, {1, 3}, {{0, 1, -1}, {2, 3, -1}}}; }

NibbleParams desk_params(std::uint64_t seed) {
  NibbleParams p;
  p.seed = seed;
  return p;
}

}  // namespace

TEST(BuildDigraph, SingleLink) {
  const Graph g = Graph::from_edges(4, std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {2, 3}, {1, 2}});
  const Digraph d = build_digraph(g, two_pairs());
  EXPECT_TRUE(d.has_arc(0, 1));
  EXPECT_FALSE(d.has_arc(1, 0));
  EXPECT_EQ(d.arc_count(), 1);
}

TEST(BuildDigraph, CompleteHostGivesCompleteDigraph) {
  Rng rng = make_rng(3);
  const Graph g = Graph::complete(12);
  const Digraph d = build_digraph(g, random_matching(12, rng));
  EXPECT_EQ(d.order(), 6);
  EXPECT_EQ(d.arc_count(), 30);
  for (Vertex i = 0; i < 6; ++i) EXPECT_FALSE(d.has_arc(i, i));
}

TEST(BuildDigraph, ArcCountMatchesBruteForce) {
  Rng rng = make_rng(17);
  for (int round = 0; round < 20; ++round) {
    const Vertex n = 20 + static_cast<Vertex>(round);
    const auto m = random_matching(n, rng);
    const Graph g = random_graph(n, 0.4, rng, matching_edges(m));
    const Digraph d = build_digraph(g, m);
    std::int64_t count = 0;
    for (std::size_t i = 0; i < m.elements.size(); ++i)
      for (std::size_t j = 0; j < m.elements.size(); ++j)
        if (i != j && g.has_edge(m.elements[i].b, m.elements[j].a)) ++count;
    ASSERT_EQ(d.arc_count(), count);
  }
}

TEST(PruneDigraph, EmptySystemKeepsEverything) {
  Rng rng = make_rng(4);
  const auto m = random_matching(15, rng);
  const Graph g = random_graph(15, 0.5, rng, matching_edges(m));
  const Digraph d = build_digraph(g, m);
  EXPECT_EQ(prune_digraph(d, g, m, ConflictSystem::empty_local(g)).arcs(), d.arcs());
}

TEST(PruneDigraph, ConflictAtBRemovesArc) {
  const Graph g = Graph::from_edges(4, std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {2, 3}, {1, 2}, {3, 0}});
  auto s = ConflictSystem::empty_local(g);
  s.add_conflict(1, g.require_edge(1, 2), g.require_edge(0, 1));
  const auto m = two_pairs();
  const Digraph pruned = prune_digraph(build_digraph(g, m), g, m, s);
  EXPECT_FALSE(pruned.has_arc(0, 1));
  EXPECT_TRUE(pruned.has_arc(1, 0));
}

TEST(PruneDigraph, ConflictAtARemovesArc) {
  const Graph g = Graph::from_edges(4, std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {2, 3}, {1, 2}, {3, 0}});
  auto s = ConflictSystem::empty_local(g);
  s.add_conflict(2, g.require_edge(1, 2), g.require_edge(2, 3));
  const auto m = two_pairs();
  EXPECT_FALSE(prune_digraph(build_digraph(g, m), g, m, s).has_arc(0, 1));
}

TEST(PruneDigraph, ConflictingTripleIsolated) {
  const Graph g = Graph::complete(7);
  PerfectMatching m{{0, 2, 4}, {1, 3, 5}, {{0, 1, -1}, {2, 3, -1}, {4, 5, 6}}};
  ASSERT_FALSE(matching_error(g, m).has_value());
  auto s = ConflictSystem::empty_local(g);
  s.add_conflict(6, g.require_edge(4, 6), g.require_edge(6, 5));
  const Digraph pruned = prune_digraph(build_digraph(g, m), g, m, s);
  EXPECT_EQ(pruned.in_degree(2), 0);
  EXPECT_EQ(pruned.out_degree(2), 0);
  EXPECT_TRUE(pruned.has_arc(0, 1));
}

TEST(PruneDigraph, TripleUsesSideSpecificEdges) {
  // Element 1 is the triple (2, v*=6, 3). Arc 0 -> 1 uses link {1, 2}; the
  // relevant matching edge at a = 2 is {2, 6}, not {6, 3}.
  const Graph g = Graph::complete(7);
  PerfectMatching m{{0, 2, 4}, {1, 3, 5}, {{0, 1, -1}, {4, 5, -1}, {2, 3, 6}}};
  auto s = ConflictSystem::empty_local(g);
  s.add_conflict(2, g.require_edge(1, 2), g.require_edge(2, 3));
  Digraph pruned = prune_digraph(build_digraph(g, m), g, m, s);
  EXPECT_TRUE(pruned.has_arc(0, 2));
  s.add_conflict(2, g.require_edge(1, 2), g.require_edge(2, 6));
  pruned = prune_digraph(build_digraph(g, m), g, m, s);
  EXPECT_FALSE(pruned.has_arc(0, 2));
}

TEST(PruneDigraphProperty, OnlyRemovesArcs) {
  Rng rng = make_rng(23);
  for (int round = 0; round < 40; ++round) {
    const Vertex n = 10 + static_cast<Vertex>(uniform_below(rng, 20));
    const auto m = random_matching(n, rng);
    const Graph g = random_graph(n, 0.5, rng, matching_edges(m));
    const auto s = gen_random_bounded(g, 2, static_cast<std::uint64_t>(round));
    const Digraph d = build_digraph(g, m);
    const Digraph p = prune_digraph(d, g, m, s);
    for (auto [i, j] : p.arcs()) ASSERT_TRUE(d.has_arc(i, j));
    for (Vertex v = 0; v < d.order(); ++v) {
      ASSERT_LE(p.in_degree(v), d.in_degree(v));
      ASSERT_LE(p.out_degree(v), d.out_degree(v));
    }
  }
}

TEST(Typicality, ThresholdArithmetic) {
  const Graph g = Graph::complete(101);
  Digraph d(41);
  for (Vertex i = 0; i < 41; ++i)
    for (Vertex j = 0; j < 41; ++j)
      if (i != j) d.add_arc(i, j);
  d.finalize();
  const auto rep = typicality_report(d, g, 0.1);
  EXPECT_DOUBLE_EQ(rep.threshold, 30.0);
  EXPECT_EQ(rep.min_in, 40);
  EXPECT_TRUE(rep.typical);
}

TEST(Typicality, IsolatedVertex) {
  const Digraph d = Digraph::from_arcs(3, {{0, 1}, {1, 0}});
  EXPECT_FALSE(typicality_report(d, Graph::complete(6), 1e-9).typical);
  EXPECT_FALSE(typicality_report(d, Graph::from_edges(6, std::vector<std::pair<Vertex, Vertex>>{}), 0.1).typical);
}

TEST(Typicality, DensePipelineRegression) {
  const Graph g = gen_gnp(400, 0.3, 400);
  const auto s = ConflictSystem::empty_local(g);
  const auto res = nibble_matching(g, s, desk_params(401));
  ASSERT_TRUE(res.matching.has_value()) << res.failure;
  const auto rep = typicality_report(prune_digraph(build_digraph(g, *res.matching), g, *res.matching, s), g, 0.1);
  EXPECT_EQ(rep.host_min_degree, 96);
  EXPECT_EQ(rep.min_in, 42);
  EXPECT_EQ(rep.min_out, 45);
  EXPECT_TRUE(rep.typical);
}

TEST(Directed, FiveCycle) {
  const Digraph d = Digraph::from_arcs(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  const auto res = directed_hamilton(d);
  ASSERT_EQ(res.status, DirectedStatus::found);
  EXPECT_EQ(res.cycle, (std::vector<Vertex>{0, 1, 2, 3, 4}));
}

TEST(Directed, AcyclicCertified) {
  Digraph d(6);
  for (Vertex i = 0; i < 6; ++i)
    for (Vertex j = i + 1; j < 6; ++j) d.add_arc(i, j);
  d.finalize();
  const auto res = directed_hamilton(d);
  EXPECT_EQ(res.status, DirectedStatus::none_certified);
  EXPECT_THROW(directed_hamilton(Digraph(1)), std::invalid_argument);
}

TEST(DirectedProperty, ExactMatchesPermutationOracle) {
  Rng rng = make_rng(808);
  for (int round = 0; round < 300; ++round) {
    const Vertex m = 2 + static_cast<Vertex>(uniform_below(rng, 7));
    const Digraph d = random_digraph(m, 0.2 + 0.6 * uniform01(rng), rng);
    const auto res = directed_hamilton(d);
    ASSERT_NE(res.status, DirectedStatus::not_found);
    ASSERT_EQ(res.status == DirectedStatus::found, has_directed_cycle_by_permutation(d));
    if (res.status == DirectedStatus::found) {
      ASSERT_TRUE(is_directed_hamilton_cycle(d, res.cycle));
    }
  }
}

TEST(DirectedProperty, HeuristicCyclesAreValid) {
  Rng rng = make_rng(909);
  int found = 0;
  for (int round = 0; round < 10; ++round) {
    const Digraph d = random_digraph(60, 0.3, rng);
    const auto res = directed_hamilton(d);
    EXPECT_FALSE(res.exact);
    if (res.status == DirectedStatus::found) {
      ++found;
      ASSERT_TRUE(is_directed_hamilton_cycle(d, res.cycle));
    }
  }
  EXPECT_EQ(found, 10);
}

TEST(Lift, TwoElements) {
  EXPECT_EQ(lift_cycle({0, 1}, two_pairs()).vertices, (std::vector<Vertex>{0, 1, 2, 3}));
}

TEST(Lift, TripleInsertsMiddle) {
  PerfectMatching m{{0, 2}, {1, 3}, {{0, 1, -1}, {2, 3, 4}}};
  EXPECT_EQ(lift_cycle({1, 0}, m).vertices, (std::vector<Vertex>{2, 4, 3, 0, 1}));
}

TEST(Lift, RejectsNonSpanning) {
  EXPECT_THROW(lift_cycle({0}, two_pairs()), std::invalid_argument);
  EXPECT_THROW(lift_cycle({0, 0}, two_pairs()), std::invalid_argument);
}

TEST(LiftProperty, PrunedCyclesLiftToCompatibleCycles) {
  Rng rng = make_rng(1212);
  int lifted = 0;
  for (int round = 0; round < 100; ++round) {
    const Vertex n = 4 + static_cast<Vertex>(uniform_below(rng, 13));
    const auto m = random_matching(n, rng);
    const Graph g = random_graph(n, 0.6, rng, matching_edges(m));
    const auto s = gen_random_bounded(g, 1 + static_cast<int>(uniform_below(rng, 3)), static_cast<std::uint64_t>(round));
    const Digraph pruned = prune_digraph(build_digraph(g, m), g, m, s);
    if (pruned.order() < 2) continue;
    for_each_directed_cycle(pruned, [&](const std::vector<Vertex>& dc) {
      ++lifted;
      ASSERT_TRUE(verify_cycle(g, s, lift_cycle(dc, m), CycleMode::compatible).pass());
    });
  }
  EXPECT_GT(lifted, 0);
}

TEST(Dense, CompleteEven) {
  const Graph g = Graph::complete(20);
  const auto s = ConflictSystem::empty_local(g);
  const auto rep = solve_dense(g, s, desk_params(1));
  ASSERT_TRUE(rep.success) << rep.stage << ": " << rep.message;
  EXPECT_TRUE(verify_cycle(g, s, *rep.cycle, CycleMode::compatible).pass());
}

TEST(Dense, RandomBoundedDense) {
  const Graph g = gen_gnp(400, 0.3, 41);
  const auto s = gen_random_bounded(g, static_cast<int>(std::floor(0.25 * 400 * 0.3)), 42);
  const auto rep = solve_dense(g, s, desk_params(43));
  ASSERT_TRUE(rep.success) << rep.stage << ": " << rep.message;
  EXPECT_TRUE(verify_cycle(g, s, *rep.cycle, CycleMode::compatible).pass());
  EXPECT_LE(rep.pruned_arcs, rep.arcs);
}

TEST(Dense, StarKillerNeverReturnsInvalidCycle) {
  for (Vertex n : {8, 9, 40}) {
    const Graph g = Graph::complete(n);
    const auto s = gen_star_killer(g, 0);
    const auto rep = solve_dense(g, s, desk_params(static_cast<std::uint64_t>(n)));
    EXPECT_FALSE(rep.success);
    EXPECT_FALSE(rep.cycle.has_value());
  }
}

TEST(Dense, RainbowColoringVerifiedAsRainbow) {
  const Graph g = Graph::complete(10);
  std::vector<int> colors(static_cast<std::size_t>(g.size()));
  std::iota(colors.begin(), colors.end(), 0);
  const auto s = ConflictSystem::global(g, colors);
  const auto rep = solve_dense(g, s, desk_params(2));
  ASSERT_TRUE(rep.success) << rep.message;
  EXPECT_TRUE(verify_cycle(g, s, *rep.cycle, CycleMode::rainbow).pass());
}

TEST(DenseProperty, Deterministic) {
  const Graph g = gen_gnp(120, 0.4, 6);
  const auto s = gen_random_bounded(g, 4, 6);
  const auto a = solve_dense(g, s, desk_params(7));
  const auto b = solve_dense(g, s, desk_params(7));
  EXPECT_EQ(a.matching, b.matching);
  EXPECT_EQ(a.cycle, b.cycle);
  EXPECT_EQ(a.pruned_arcs, b.pruned_arcs);
}
