#include <gtest/gtest.h>

#include <sstream>

#include "hamcompat/harness.hpp"

using namespace hamcompat;

namespace {

std::string csv_of(const ExperimentConfig& cfg) {
  std::ostringstream os;
  write_csv(os, run_experiment(cfg));
  return os.str();
}

}  // namespace

TEST(Config, ParsesFlatKeys) {
  const auto cfg = parse_config_text(R"(
    # sweep
    n = 50, 80
    p_c = 3
    mu_ratio = 0, 0.02
    method = sparse
    trials = 4
    master_seed = 99
    threads = 2
    d = 6
    max_restarts = 7
    format = json
  )");
  EXPECT_EQ(cfg.n_values, (std::vector<Vertex>{50, 80}));
  EXPECT_EQ(cfg.mu_ratios, (std::vector<double>{0.0, 0.02}));
  EXPECT_EQ(cfg.trials, 4);
  EXPECT_EQ(cfg.master_seed, 99U);
  EXPECT_EQ(cfg.dout.d, 6);
  EXPECT_EQ(cfg.sparse_limits.max_restarts, 7);
  EXPECT_EQ(cfg.format, "json");
  EXPECT_EQ(cfg.system_kind(), SystemKind::random_bounded);
  EXPECT_NEAR(cfg.p_for(50), 3.0 * std::log(50.0) / 50.0, 1e-15);
}

TEST(Config, RejectsInvalid) {
  EXPECT_THROW(parse_config_text("n = 10\np = 0.5\ntrials = 0\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("n = 10\np = 0.5\nmu_ratio = -1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("n = 10\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("n = 10\np = 0.5\np_c = 2\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("n = 10\np = 0.5\nbogus = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("n = 10\np = 0.5\nmethod = rainbow\nsystem = random_bounded\n"),
               std::invalid_argument);
  EXPECT_THROW(parse_config_text("n = ten\np = 0.5\n"), std::invalid_argument);
}

TEST(Experiment, SingleCompleteTrial) {
  const auto cfg = parse_config_text("n = 10\ngraph = complete\nsystem = none\nmethod = sparse\ntrials = 1\n");
  const auto res = run_experiment(cfg);
  ASSERT_EQ(res.records.size(), 1U);
  EXPECT_TRUE(res.records[0].success);
  EXPECT_TRUE(res.records[0].verified);
  EXPECT_EQ(res.records[0].stage, "ok");
  ASSERT_EQ(res.cells.size(), 1U);
  EXPECT_DOUBLE_EQ(res.cells[0].rate(), 1.0);
}

TEST(Experiment, ByteIdenticalAcrossRunsAndThreads) {
  auto cfg = parse_config_text("n = 40, 60\np_c = 3\nmu_ratio = 0, 0.05\ntrials = 3\nmaster_seed = 5\n");
  const std::string first = csv_of(cfg);
  EXPECT_EQ(first, csv_of(cfg));
  cfg.threads = 4;
  EXPECT_EQ(first, csv_of(cfg));
  std::ostringstream a, b;
  write_experiment(a, run_experiment(cfg), "json");
  cfg.threads = 1;
  write_experiment(b, run_experiment(cfg), "json");
  EXPECT_EQ(a.str(), b.str());
}

TEST(Experiment, RowsAndSummaryConsistent) {
  const auto cfg = parse_config_text("n = 30, 50\np = 0.3\nmu_ratio = 0, 0.1, 0.2\ntrials = 2\nmethod = dense\n");
  const auto res = run_experiment(cfg);
  ASSERT_EQ(res.records.size(), 12U);
  ASSERT_EQ(res.cells.size(), 6U);
  for (std::size_t c = 0; c < res.cells.size(); ++c) {
    int wins = 0;
    for (int t = 0; t < 2; ++t) {
      const auto& r = res.records[c * 2 + static_cast<std::size_t>(t)];
      EXPECT_EQ(r.trial, t);
      EXPECT_EQ(r.seed, trial_seed(cfg.master_seed, static_cast<int>(c), t));
      if (r.success) {
        EXPECT_TRUE(r.verified);
      }
      wins += r.success;
    }
    EXPECT_EQ(res.cells[c].successes, wins);
  }
}

TEST(Experiment, CsvColumns) {
  const auto cfg = parse_config_text("n = 12\np = 0.9\ntrials = 2\nmethod = rainbow\nmu_ratio = 0.05\n");
  const std::string csv = csv_of(cfg);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "seed,n,p,mu_ratio,method,success,stage,rotations,boosters,restarts,elapsed_ms");
  EXPECT_NE(csv.find(",rainbow,"), std::string::npos);
}

TEST(Experiment, SparsePilotRegression) {
  const auto cfg = parse_config_text("n = 200\np_c = 3\nmu_ratio = 0.02\ntrials = 100\nthreads = 4\n");
  const auto res = run_experiment(cfg);
  EXPECT_EQ(res.cells[0].successes, 100);
}
