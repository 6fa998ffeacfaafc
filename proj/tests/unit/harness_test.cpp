#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "prefwatch/harness.hpp"
#include "prefwatch/measures.hpp"
#include "prefwatch/verify.hpp"
#include "test_support.hpp"

namespace prefwatch {
namespace {

std::string csv_of(const RunRecord& r) {
  std::ostringstream out;
  write_steps_csv(out, r);
  return out.str();
}

std::vector<ExperimentConfig> four_learner_grid(std::size_t seeds) {
  std::vector<ExperimentConfig> grid;
  const std::vector<double> rewards{0.2, 0.9, 0.5, 0.4};
  for (const auto& learner : scenarios::all_learners(4)) {
    if (grid.size() == 4) break;
    auto c = testing::bandit_config(rewards, learner, 200);
    c.name = std::string(to_string(learner.kind));
    c.seeds.clear();
    for (std::uint64_t s = 0; s < seeds; ++s) c.seeds.push_back(s);
    grid.push_back(c);
  }
  return grid;
}

TEST(BoundApplies, OnlyForMatchedAveragingScenario) {
  auto c = scenarios::linf_stateless(100, 0.1);
  EXPECT_TRUE(bound_applies(c));
  c.predictor.beta = 3.0;
  EXPECT_FALSE(bound_applies(c));
  c = scenarios::linf_stateless(100, 0.1);
  c.predictor.kind = PredictorKind::kBestResponse;
  EXPECT_FALSE(bound_applies(c));
  c = scenarios::linf_stateless(1, 0.1);
  EXPECT_FALSE(bound_applies(c));
  auto s = scenarios::linf_stateful(100, 0.1);
  EXPECT_TRUE(bound_applies(s));
  s.weighting.rule = WeightRule::kUniform;
  EXPECT_FALSE(bound_applies(s));
}

TEST(RunExperiment, ConstantLearnerWithBestResponseStaysWithinOne) {
  auto c = testing::bandit_config({0.2, 0.9, 0.5}, LearnerModel::constant_action(0), 500);
  const auto r = run_experiment(c, 0);
  const double d_br = r.summary.final_measures.at(0);
  EXPECT_LE(d_br, 1.0 + r.summary.measured_regret);
}

TEST(RunExperiment, SummaryDescribesRun) {
  const auto c = scenarios::linf_stateless(300, 0.1);
  const auto r = run_experiment(c, 7);
  EXPECT_EQ(r.summary.seed, 7u);
  EXPECT_EQ(r.summary.config_hash, c.hash());
  EXPECT_EQ(r.summary.horizon, 300u);
  EXPECT_EQ(r.summary.learner, "boltzmann-synthesized");
  EXPECT_EQ(r.summary.predictor, "averaging");
  ASSERT_EQ(r.summary.exploration_time.size(), 1u);
  ASSERT_TRUE(r.summary.linf_from_exploration.has_value());
  EXPECT_GE(r.summary.wall_time_seconds, 0.0);
}

TEST(RunExperiment, StatefulRegretMatchesPolicyRegret) {
  const auto mdp = scenarios::br_mdps()[1];
  auto c = testing::mdp_config(mdp, LearnerModel::exponential_weights(), 300);
  const auto sim = simulate(c, 3);
  const auto r = build_record(c, sim, 3);
  EXPECT_NEAR(r.summary.measured_regret, measured_policy_regret(sim.learner_policies, *sim.dynamics, 300), 1e-9);
}

TEST(Sweep, ProducesOneRecordPerConfigSeedPairInCanonicalOrder) {
  const auto grid = four_learner_grid(50);
  const auto entries = sweep(grid, 2);
  ASSERT_EQ(entries.size(), 200u);
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const auto prev = std::make_pair(entries[i - 1].config_hash, entries[i - 1].seed);
    const auto cur = std::make_pair(entries[i].config_hash, entries[i].seed);
    ASSERT_LT(prev, cur);
  }
  for (const auto& e : entries) ASSERT_TRUE(e.record.has_value()) << e.error;
}

TEST(Sweep, ParallelismDoesNotChangeResults) {
  const auto grid = four_learner_grid(5);
  const auto serial = sweep(grid, 1);
  const auto parallel = sweep(grid, 8);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    ASSERT_EQ(csv_of(*serial[i].record), csv_of(*parallel[i].record));
  }
}

TEST(Sweep, FailingRunIsIsolated) {
  auto grid = four_learner_grid(2);
  auto broken = grid.front();
  broken.name = "broken";
  broken.learner.kind = LearnerKind::kBoltzmannSynthesized;  // no schedule or beta: invalid
  broken.learner.fixed_action.reset();
  grid.push_back(broken);
  const auto entries = sweep(grid, 2);
  std::size_t failures = 0;
  for (const auto& e : entries) {
    if (!e.record) {
      ++failures;
      EXPECT_EQ(e.config_name, "broken");
      EXPECT_FALSE(e.error.empty());
    }
  }
  EXPECT_EQ(failures, 2u);
  EXPECT_EQ(entries.size(), 10u);
}

TEST(OutputRoot, EnvironmentVariablePrefixesRelativePaths) {
  unsetenv(kOutputRootVariable);
  EXPECT_EQ(resolve_output_dir("runs"), std::filesystem::path("runs"));
  EXPECT_EQ(resolve_output_dir(""), std::filesystem::path("prefwatch-out"));
  setenv(kOutputRootVariable, "/tmp/pw-root", 1);
  EXPECT_EQ(resolve_output_dir("runs"), std::filesystem::path("/tmp/pw-root/runs"));
  EXPECT_EQ(resolve_output_dir("/abs/runs"), std::filesystem::path("/abs/runs"));
  unsetenv(kOutputRootVariable);
}

TEST(HashHex, SixteenDigits) {
  EXPECT_EQ(hash_hex(0xabcULL), "0000000000000abc");
}

}  // namespace
}  // namespace prefwatch
