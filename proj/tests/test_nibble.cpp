#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "hamcompat/nibble.hpp"
#include "support.hpp"

using namespace hamcompat;

namespace {

NibbleParams desk(double delta, std::int64_t rounds, double eps, std::uint64_t seed) {
  NibbleParams p;
  p.delta = delta;
  p.rounds = rounds;
  p.epsilon = eps;
  p.seed = seed;
  return p;
}

}  // namespace

TEST(Schedule, DeskRoundFormula) {
  const auto s = resolve_schedule(desk(0.05, 0, 0.4, 0));
  EXPECT_TRUE(s.feasible);
  EXPECT_NEAR(s.exact_rounds, std::log(10.0) / -std::log(0.95), 1e-12);
  EXPECT_EQ(s.rounds, 45);
  EXPECT_EQ(resolve_schedule(desk(0.05, 7, 0.4, 0)).rounds, 7);
}

TEST(Schedule, PaperModeIsRejected) {
  NibbleParams p;
  p.mode = NibbleMode::paper;
  p.epsilon = 0.2;
  const auto s = resolve_schedule(p);
  EXPECT_FALSE(s.feasible);
  EXPECT_NEAR(s.log_delta, -110.0 * std::log(5.0), 1e-9);
  EXPECT_NE(s.diagnostic.find("desk"), std::string::npos);
  const Graph g = Graph::complete(10);
  EXPECT_THROW(nibble_matching(g, ConflictSystem::empty_local(g), p), std::invalid_argument);
}

TEST(Schedule, RejectsBadParameters) {
  EXPECT_THROW(resolve_schedule(desk(0.0, 0, 0.4, 0)), std::invalid_argument);
  EXPECT_THROW(resolve_schedule(desk(1.0, 0, 0.4, 0)), std::invalid_argument);
  EXPECT_THROW(resolve_schedule(desk(0.1, 0, 0.0, 0)), std::invalid_argument);
}

TEST(Nibble, CompleteTenDeterministic) {
  const Graph g = Graph::complete(10);
  const auto s = ConflictSystem::empty_local(g);
  const auto a = nibble_matching(g, s, desk(0.1, 3, 0.4, 5));
  ASSERT_TRUE(a.matching.has_value()) << a.failure;
  EXPECT_EQ(a.matching->elements.size(), 5U);
  EXPECT_FALSE(matching_error(g, *a.matching).has_value());
  const auto b = nibble_matching(g, s, desk(0.1, 3, 0.4, 5));
  EXPECT_EQ(a.matching, b.matching);
}

TEST(Nibble, OddOrderTriple) {
  const Graph g = Graph::complete(9);
  const auto s = ConflictSystem::empty_local(g);
  const auto res = nibble_matching(g, s, desk(0.1, 3, 0.4, 1));
  ASSERT_TRUE(res.matching.has_value()) << res.failure;
  const auto& m = *res.matching;
  EXPECT_FALSE(matching_error(g, m).has_value());
  ASSERT_EQ(m.elements.size(), 4U);
  int triples = 0;
  for (const auto& e : m.elements) triples += e.is_triple();
  EXPECT_EQ(triples, 1);
  const auto& t = m.elements.back();
  ASSERT_TRUE(t.is_triple());
  EXPECT_TRUE(s.compatible(g.require_edge(t.a, t.middle), g.require_edge(t.middle, t.b)));
}

TEST(Nibble, OddTripleAvoidsConflict) {
  const Graph g = Graph::complete(9);
  const auto s = gen_random_bounded(g, 3, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto res = nibble_matching(g, s, desk(0.1, 3, 0.4, seed));
    ASSERT_TRUE(res.matching.has_value());
    const auto& t = res.matching->elements.back();
    EXPECT_TRUE(s.compatible(g.require_edge(t.a, t.middle), g.require_edge(t.middle, t.b)));
  }
}

TEST(Nibble, SmallInputsRejected) {
  const Graph g = Graph::complete(3);
  EXPECT_THROW(nibble_matching(g, ConflictSystem::empty_local(g), {}), std::invalid_argument);
}

TEST(NibbleProperty, Bookkeeping) {
  Rng rng = make_rng(44);
  for (int round = 0; round < 12; ++round) {
    const Vertex n = 60 + static_cast<Vertex>(uniform_below(rng, 61));
    const Graph g = gen_gnp(n, 0.5, static_cast<std::uint64_t>(round));
    const auto s = gen_random_bounded(g, 2, static_cast<std::uint64_t>(round));
    const auto res = nibble_matching(g, s, desk(0.1, 0, 1.0, static_cast<std::uint64_t>(round)));
    const auto& tr = res.trace;
    ASSERT_EQ(tr.rounds.size(), tr.round_matchings.size());
    std::set<Vertex> used;
    for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
      const auto& r = tr.rounds[i];
      ASSERT_EQ(r.chosen, r.kept + r.discarded);
      ASSERT_EQ(static_cast<std::size_t>(r.kept), tr.round_matchings[i].size());
      const Vertex next = i + 1 < tr.rounds.size() ? tr.rounds[i + 1].n_i : tr.final_n;
      ASSERT_EQ(next, r.n_i - r.kept);
      for (auto [a, b] : tr.round_matchings[i]) {
        ASSERT_TRUE(used.insert(a).second);
        ASSERT_TRUE(used.insert(b).second);
        ASSERT_TRUE(g.has_edge(a, b));
      }
    }
    if (res.matching) {
      ASSERT_FALSE(matching_error(g, *res.matching).has_value());
    }
  }
}

TEST(NibbleProperty, SameSeedSameTrace) {
  const Graph g = gen_gnp(200, 0.3, 3);
  const auto s = gen_random_bounded(g, 5, 3);
  const auto a = nibble_matching(g, s, desk(0.05, 0, 0.4, 8));
  const auto b = nibble_matching(g, s, desk(0.05, 0, 0.4, 8));
  std::ostringstream x, y;
  write_trace_csv(x, a.trace);
  write_trace_csv(y, b.trace);
  EXPECT_EQ(x.str(), y.str());
  EXPECT_EQ(a.matching, b.matching);
}

TEST(NibbleTraceCsv, Header) {
  const Graph g = Graph::complete(12);
  const auto res = nibble_matching(g, ConflictSystem::empty_local(g), desk(0.1, 2, 0.4, 0));
  std::ostringstream os;
  write_trace_csv(os, res.trace);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "iteration,n_i,m_i,chosen,kept,discarded,min_deg,max_deg");
  int rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(MatchingError, DetectsProblems) {
  const Graph g = Graph::complete(4);
  PerfectMatching m{{0, 1}, {2, 3}, {{0, 2, -1}, {1, 3, -1}}};
  EXPECT_FALSE(matching_error(g, m).has_value());
  auto twice = m;
  twice.elements[1] = {0, 3, -1};
  EXPECT_TRUE(matching_error(g, twice).has_value());
  const Graph sparse = Graph::from_edges(4, std::vector<std::pair<Vertex, Vertex>>{{0, 2}});
  EXPECT_TRUE(matching_error(sparse, m).has_value());
}

TEST(Normality, XiFormula) {
  EXPECT_DOUBLE_EQ(normality_xi(0.05, 0.4, 0), 0.05);
  EXPECT_NEAR(normality_xi(0.05, 0.4, 3), 0.05 * std::pow(1.0 + 21.0 * 0.05 / 0.4, 3), 1e-15);
}

TEST(Normality, RoundZeroSizesExact) {
  const Graph g = gen_gnp(400, 0.3, 12);
  const auto s = ConflictSystem::empty_local(g);
  const auto params = desk(0.05, 0, 0.4, 12);
  const auto res = nibble_matching(g, s, params);
  ASSERT_FALSE(res.trace.rounds.empty());
  EXPECT_EQ(res.trace.rounds[0].n_i, 200);
  const auto rep = normality_check(g, s, res.trace, params, {});
  ASSERT_TRUE(rep.evaluated) << rep.diagnostic;
  EXPECT_EQ(rep.n0, 200);
  EXPECT_DOUBLE_EQ(rep.xi[0], 0.05);
  EXPECT_NEAR(rep.q, 0.1 * rep.p, 1e-15);
  EXPECT_GT(rep.conditions[0].checks, 0);
  EXPECT_EQ(rep.conditions[4].failures, 0);
}

TEST(Normality, HandcraftedBadEdges) {
  // e = (a, b) = (0, 1), e2 = (a2, b2) = (2, 3); link {a, b2} = {0, 3}.
  const Graph g = Graph::from_edges(6, std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {2, 3}, {0, 3}, {1, 2}, {4, 5}});
  auto s = ConflictSystem::empty_local(g);
  s.add_conflict(3, g.require_edge(0, 3), g.require_edge(2, 3));
  EXPECT_TRUE(is_a_bad(g, s, {0, 1}, {2, 3}));
  EXPECT_FALSE(is_b_bad(g, s, {0, 1}, {2, 3}));
  s.add_conflict(0, g.require_edge(0, 3), g.require_edge(0, 1));
  EXPECT_FALSE(is_a_bad(g, s, {0, 1}, {2, 3}));
  s.add_conflict(2, g.require_edge(1, 2), g.require_edge(2, 3));
  EXPECT_TRUE(is_b_bad(g, s, {0, 1}, {2, 3}));
  EXPECT_FALSE(is_a_bad(g, s, {0, 1}, {4, 5}));
}

TEST(Normality, PaperModeNotEvaluated) {
  const Graph g = Graph::complete(10);
  NibbleParams p;
  p.mode = NibbleMode::paper;
  p.epsilon = 0.2;
  const auto rep = normality_check(g, ConflictSystem::empty_local(g), NibbleTrace{}, p, {});
  EXPECT_FALSE(rep.evaluated);
  EXPECT_FALSE(rep.diagnostic.empty());
}
