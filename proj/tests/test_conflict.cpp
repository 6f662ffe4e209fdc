#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "hamcompat/conflict.hpp"
#include "hamcompat/rng.hpp"

using namespace hamcompat;

namespace {

Graph star(Vertex leaves) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return Graph::from_edges(leaves + 1, e);
}

std::vector<int> random_colors(const Graph& g, int k, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<int> c(static_cast<std::size_t>(g.size()));
  for (auto& x : c) x = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(k)));
  return c;
}

int max_multiplicity_minus_one(const Graph& g, const std::vector<int>& colors) {
  int best = 0;
  for (Vertex v = 0; v < g.order(); ++v) {
    std::map<int, int> count;
    for (EdgeId e : g.incident_edges(v)) best = std::max(best, ++count[colors[static_cast<std::size_t>(e)]]);
  }
  return best - 1;
}

}  // namespace

TEST(Compatible, EmptyLocalSystem) {
  const Graph g = Graph::complete(4);
  const auto s = ConflictSystem::empty_local(g);
  for (EdgeId e = 0; e < g.size(); ++e)
    for (EdgeId f = 0; f < g.size(); ++f)
      if (e != f) {
        EXPECT_TRUE(s.compatible(e, f));
      }
}

TEST(Compatible, LocalPairIsUnordered) {
  const Graph g = Graph::complete(4);
  auto s = ConflictSystem::empty_local(g);
  const EdgeId e1 = g.require_edge(0, 1), e2 = g.require_edge(0, 2);
  s.add_conflict(0, e2, e1);
  EXPECT_FALSE(s.compatible(e1, e2));
  EXPECT_FALSE(s.compatible(e2, e1));
  EXPECT_TRUE(s.compatible(e1, g.require_edge(1, 2)));
  EXPECT_EQ(s.conflict_count(), 1U);
}

TEST(Compatible, GlobalSameColorDisjointEdges) {
  const Graph g = Graph::complete(4);
  std::vector<int> colors(static_cast<std::size_t>(g.size()), 0);
  for (std::size_t i = 0; i < colors.size(); ++i) colors[i] = static_cast<int>(i);
  const EdgeId e1 = g.require_edge(0, 1), e2 = g.require_edge(2, 3);
  colors[static_cast<std::size_t>(e1)] = colors[static_cast<std::size_t>(e2)] = 3;
  colors[3] = 99;
  const auto s = ConflictSystem::global(g, colors);
  EXPECT_FALSE(s.compatible(e1, e2));
  EXPECT_TRUE(s.compatible(e1, g.require_edge(0, 2)));
}

TEST(Compatible, RejectsUnknownEdges) {
  const Graph g = Graph::complete(3);
  const auto s = ConflictSystem::empty_local(g);
  EXPECT_THROW(s.compatible(0, 7), std::out_of_range);
  EXPECT_THROW(s.compatible(-1, 0), std::out_of_range);
}

TEST(Compatible, AddConflictValidatesIncidence) {
  const Graph g = Graph::complete(4);
  auto s = ConflictSystem::empty_local(g);
  EXPECT_THROW(s.add_conflict(0, g.require_edge(0, 1), g.require_edge(2, 3)), std::invalid_argument);
  EXPECT_THROW(s.add_conflict(0, g.require_edge(0, 1), g.require_edge(0, 1)), std::invalid_argument);
}

TEST(LocalColoring, MonochromaticStar) {
  const Graph g = star(3);
  const auto s = from_local_coloring(g, {1, 1, 1});
  EXPECT_EQ(s.local_conflicts().size(), 3U);
  for (const auto& c : s.local_conflicts()) EXPECT_EQ(c.v, 0);
  EXPECT_EQ(max_bound(s).max_bound, 2);
}

TEST(LocalColoring, RainbowK4IsEmpty) {
  const Graph g = Graph::complete(4);
  const auto s = from_local_coloring(g, {0, 1, 2, 3, 4, 5});
  EXPECT_EQ(s.conflict_count(), 0U);
  EXPECT_EQ(max_bound(s).max_bound, 0);
}

TEST(LocalColoring, MissingColorsRejected) {
  EXPECT_THROW(from_local_coloring(Graph::complete(4), {0, 1}), std::invalid_argument);
}

TEST(LocalColoring, BoundMatchesMultiplicity) {
  const Graph g = gen_gnp(100, 0.3, 21);
  const auto colors = random_colors(g, 5, 4);
  const auto s = from_local_coloring(g, colors);
  EXPECT_EQ(max_bound(s).max_bound, max_multiplicity_minus_one(g, colors));
}

TEST(LocalColoringProperty, AgreesWithColorComparison) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = gen_gnp(25, 0.3, seed);
    const auto colors = random_colors(g, 3, seed + 100);
    const auto s = from_local_coloring(g, colors);
    for (EdgeId e = 0; e < g.size(); ++e)
      for (EdgeId f = 0; f < g.size(); ++f) {
        if (e == f) continue;
        const auto pe = g.endpoints(e), pf = g.endpoints(f);
        const bool incident = pe.contains(pf.u) || pe.contains(pf.v);
        const bool same = colors[static_cast<std::size_t>(e)] == colors[static_cast<std::size_t>(f)];
        ASSERT_EQ(s.compatible(e, f), !(incident && same));
        ASSERT_EQ(s.compatible(e, f), s.compatible(f, e));
      }
  }
}

TEST(Adversarial, RandomBoundedZeroIsEmpty) {
  const Graph g = gen_gnp(50, 0.2, 3);
  EXPECT_EQ(gen_adversarial(g, RandomBounded{0}, 1), ConflictSystem::empty_local(g));
}

TEST(Adversarial, StarKillerDegreeThree) {
  const auto s = gen_adversarial(star(3), StarKiller{0}, 0);
  EXPECT_EQ(s.conflict_count(), 3U);
  EXPECT_EQ(max_bound(s).max_bound, 2);
  EXPECT_EQ(max_bound(s).witness_vertex, 0);
}

TEST(Adversarial, RandomBoundedRespectsDelta) {
  const Graph g = gen_gnp(200, 0.1, 11);
  const auto s = gen_adversarial(g, RandomBounded{5}, 11);
  EXPECT_LE(max_bound(s).max_bound, 5);
  EXPECT_GT(s.conflict_count(), 0U);
}

TEST(AdversarialProperty, RandomBoundedOverSeeds) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = gen_gnp(60, 0.2, seed);
    const int delta = static_cast<int>(seed % 7);
    const auto s = gen_random_bounded(g, delta, seed * 31 + 1);
    ASSERT_LE(max_bound(s).max_bound, delta);
    const auto again = gen_random_bounded(g, delta, seed * 31 + 1);
    ASSERT_EQ(s, again);
  }
}

TEST(Adversarial, GlobalRandomBound) {
  const Graph g = gen_gnp(80, 0.2, 2);
  for (int bound : {1, 2, 7}) {
    const auto s = gen_adversarial(g, GlobalRandom{bound}, 9);
    EXPECT_EQ(s.mode(), ConflictMode::global);
    EXPECT_LE(max_bound(s).max_bound, bound);
  }
  EXPECT_THROW(gen_global_random(g, 0, 1), std::invalid_argument);
}

TEST(Bound, EmptySystem) { EXPECT_EQ(max_bound(ConflictSystem::empty_local(Graph::complete(5))).max_bound, 0); }

TEST(Bound, Recomputable) {
  const Graph g = gen_gnp(70, 0.2, 8);
  const auto s = gen_random_bounded(g, 3, 8);
  EXPECT_EQ(max_bound(s).max_bound, max_bound(s).max_bound);
  const auto rep = max_bound(s);
  EXPECT_EQ(static_cast<int>(s.partners(rep.witness_vertex, rep.witness_edge).size()), rep.max_bound);
}

TEST(SystemIo, LocalRoundTrip) {
  const Graph g = gen_gnp(40, 0.3, 12);
  const auto s = gen_random_bounded(g, 3, 12);
  std::stringstream ss;
  write_system(ss, g, s);
  EXPECT_EQ(read_system(ss, g), s);
}

TEST(SystemIo, GlobalRoundTrip) {
  const Graph g = gen_gnp(40, 0.3, 13);
  const auto s = gen_global_random(g, 4, 13);
  std::stringstream ss;
  write_system(ss, g, s);
  EXPECT_EQ(read_system(ss, g), s);
}

TEST(SystemIo, RejectsBadRecords) {
  const Graph g = Graph::complete(4);
  std::istringstream missing_edge(
      R"({"mode":"local","conflicts":[{"vertex":0,"edge_a":[0,1],"edge_b":[0,9]}]})");
  EXPECT_THROW(read_system(missing_edge, g), std::invalid_argument);
  std::istringstream not_incident(
      R"({"mode":"local","conflicts":[{"vertex":0,"edge_a":[0,1],"edge_b":[2,3]}]})");
  EXPECT_THROW(read_system(not_incident, g), std::invalid_argument);
  std::istringstream short_coloring("0 1 3\n");
  EXPECT_THROW(read_system(short_coloring, g), std::invalid_argument);
}
