#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "prefwatch/env.hpp"
#include "prefwatch/errors.hpp"
#include "prefwatch/harness.hpp"
#include "prefwatch/learners.hpp"
#include "prefwatch/measures.hpp"
#include "prefwatch/oracle.hpp"
#include "prefwatch/simulation.hpp"
#include "prefwatch/verify.hpp"
#include "test_support.hpp"

namespace prefwatch {
namespace {

using testing::bandit_config;
using testing::mdp_config;

EstimateSchedule schedule(double c, double alpha, NoiseMode mode) { return EstimateSchedule{c, alpha, mode}; }

TEST(LearnerModel, ParametersPresentIffRequired) {
  EXPECT_NO_THROW(LearnerModel::constant_action(0).validate());
  LearnerModel bad = LearnerModel::explore_then_commit();
  bad.fixed_action = 1;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  LearnerModel no_schedule;
  no_schedule.kind = LearnerKind::kBoltzmannSynthesized;
  no_schedule.beta = 1.0;
  EXPECT_THROW(no_schedule.validate(), InvalidArgument);
  EXPECT_THROW(schedule(1.0, 1.0, NoiseMode::kFixedDirection).validate(), InvalidArgument);
  EXPECT_THROW(schedule(-1.0, 0.5, NoiseMode::kFixedDirection).validate(), InvalidArgument);
}

TEST(LearnerModel, NamesRoundTrip) {
  for (auto kind : {LearnerKind::kConstantAction, LearnerKind::kExploreThenCommit, LearnerKind::kExponentialWeights,
                    LearnerKind::kBoltzmannSynthesized, LearnerKind::kEpsilonMixedOptimal}) {
    EXPECT_EQ(parse_learner_kind(to_string(kind)), kind);
  }
  EXPECT_FALSE(parse_learner_kind("gradient-bandit").has_value());
}

TEST(ConstantAction, AlwaysPlaysFixedAction) {
  const auto sim = simulate(bandit_config({0.1, 0.9, 0.5}, LearnerModel::constant_action(0), 50), 3);
  for (Action a : sim.history.behavior().actions()) EXPECT_EQ(a, 0u);
}

TEST(ExploreThenCommit, TraceOnTwoArms) {
  const auto sim = simulate(bandit_config({1.0, 0.5}, LearnerModel::explore_then_commit(), 10), 0);
  const auto actions = sim.history.behavior().actions();
  EXPECT_EQ(actions[0], 0u);
  EXPECT_EQ(actions[1], 1u);
  for (std::size_t t = 2; t < actions.size(); ++t) EXPECT_EQ(actions[t], 0u);
  EXPECT_DOUBLE_EQ(measured_regret_stateless(sim.history, RewardTable({1.0, 0.5})), 0.5);
}

TEST(LearnerStep, ReplaysHistoryForStatefulAlgorithms) {
  const QTable truth(1, 2, std::vector<double>{1.0, 0.5});
  InteractionHistory h(1, 2);
  h.record(0, 0, 1.0);
  h.record(0, 1, 0.5);
  Rng rng(1);
  EXPECT_EQ(learner_step(LearnerModel::explore_then_commit(), h, 0, truth, rng, 10), 0u);
  InteractionHistory h1(1, 2);
  h1.record(0, 0, 1.0);
  EXPECT_EQ(learner_step(LearnerModel::explore_then_commit(), h1, 0, truth, rng, 10), 1u);
}

TEST(BoltzmannSynthesized, ZeroNoiseMatchesTruePolicy) {
  const RewardTable truth({0.8, 0.5, 0.2});
  Learner learner(LearnerModel::boltzmann_synthesized(2.0, schedule(0.0, 0.5, NoiseMode::kRandomDirection)),
                  QTable(1, 3, std::vector<double>{0.8, 0.5, 0.2}), 100);
  InteractionHistory h(1, 3);
  Rng noise(4);
  const auto p = learner.policy(h, noise);
  const auto want = boltzmann_policy(truth.values(), 2.0);
  for (Action a = 0; a < 3; ++a) EXPECT_DOUBLE_EQ(p[0][a], want[a]);
}

TEST(BoltzmannSynthesized, EmpiricalFrequenciesMatchPolicy) {
  Learner learner(LearnerModel::boltzmann_synthesized(3.0, schedule(1.0, 0.5, NoiseMode::kRandomDirection)),
                  QTable(1, 4, std::vector<double>{0.2, 0.9, 0.5, 0.4}), 100);
  InteractionHistory h(1, 4);
  Rng noise(5), draws(6);
  const auto p = learner.policy(h, noise);
  std::vector<double> freq(4, 0.0);
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) freq[draws.categorical(p[0].probs())] += 1.0 / n;
  EXPECT_LE(tv_distance(freq, p[0].probs()), 0.01);
}

TEST(SynthesizeEstimate, ZeroScaleIsExact) {
  const RewardTable truth({0.3, -0.1, 2.0});
  Rng rng(1);
  EXPECT_EQ(synthesize_estimate(truth, 17, schedule(0.0, 0.5, NoiseMode::kRandomDirection), rng).values()[2], 2.0);
  const auto est = synthesize_estimate(truth, 17, schedule(0.0, 0.5, NoiseMode::kFixedDirection), rng);
  for (Action a = 0; a < 3; ++a) EXPECT_EQ(est[a], truth[a]);
}

TEST(SynthesizeEstimate, FixedDirectionPartialSum) {
  const RewardTable truth({0.8, 0.5, 0.2});
  const auto sched = schedule(1.0, 0.5, NoiseMode::kFixedDirection);
  Rng rng(2);
  double total = 0.0;
  for (std::size_t t = 1; t <= 100; ++t) {
    const auto est = synthesize_estimate(truth, t, sched, rng);
    const double err = linf_distance(est.values(), truth.values());
    EXPECT_NEAR(err, 1.0 / std::sqrt(static_cast<double>(t)), 1e-12);
    total += err;
  }
  EXPECT_NEAR(total, 18.59, 5e-3);
  EXPECT_LE(total, 2.0 * std::sqrt(100.0));
}

TEST(SynthesizeEstimate, AllNoiseModesHaveExactMagnitude) {
  const RewardTable truth({0.1, 0.7, 0.4, 0.4});
  Rng rng(3);
  for (auto mode : {NoiseMode::kFixedDirection, NoiseMode::kRandomDirection, NoiseMode::kAdversarialSign}) {
    for (std::size_t t = 1; t <= 1000; ++t) {
      const auto est = synthesize_estimate(truth, t, schedule(0.7, 0.3, mode), rng);
      ASSERT_NEAR(linf_distance(est.values(), truth.values()), 0.7 * std::pow(t, -0.7), 1e-12);
    }
  }
}

TEST(SynthesizeEstimateProperty, CumulativeErrorWithinProfile) {
  const RewardTable truth({0.6, 0.2, 0.9});
  for (double alpha : {0.25, 0.5, 0.75}) {
    const auto sched = schedule(1.5, alpha, NoiseMode::kRandomDirection);
    Rng rng(9);
    double total = 0.0;
    for (std::size_t t = 1; t <= 100000; ++t) {
      const auto est = synthesize_estimate(truth, t, sched, rng);
      total += linf_distance(est.values(), truth.values());
      const double T = static_cast<double>(t);
      ASSERT_LE(total, (sched.c / alpha) * std::pow(T, alpha) + sched.c) << "t=" << t;
      ASSERT_LE(total, sched.cumulative_bound(T) * (1 + 1e-12));
    }
  }
}

TEST(MeasuredRegret, Examples) {
  InteractionHistory h(1, 2);
  for (int t = 0; t < 7; ++t) h.record(0, 1, 0.0);
  EXPECT_DOUBLE_EQ(measured_regret_stateless(h, RewardTable({1.0, 0.0})), 7.0);
  InteractionHistory opt(1, 2);
  for (int t = 0; t < 7; ++t) opt.record(0, 0, 1.0);
  EXPECT_DOUBLE_EQ(measured_regret_stateless(opt, RewardTable({1.0, 0.0})), 0.0);
  EXPECT_THROW(measured_regret_stateless(InteractionHistory(1, 2), RewardTable({1.0, 0.0})), InvalidArgument);
}

TEST(MeasuredPolicyRegret, OptimalSequenceHasZeroRegret) {
  const auto mdp = testing::two_step_chain({0.1, 0.4}, {0.9, 0.2});
  const std::size_t H = 4;
  std::vector<PolicyTable> seq;
  const auto backward = backward_induction(mdp, H);
  for (std::size_t t = 0; t < H; ++t) seq.push_back(greedy_policy(backward[t]));
  EXPECT_NEAR(measured_policy_regret(seq, mdp, H), 0.0, 1e-12);
  EXPECT_THROW(measured_policy_regret(seq, mdp, H + 1), InvalidArgument);
}

TEST(MeasuredPolicyRegret, UniformPoliciesMatchEnumeration) {
  const auto mdp = oracle::random_mdp(2, 2, false, 31);
  std::vector<PolicyTable> seq(3, PolicyTable(2, PolicyDist::uniform(2)));
  const auto steps = oracle::enumerate_step_rewards(
      mdp, std::vector<std::vector<oracle::Vec>>(3, std::vector<oracle::Vec>(2, oracle::Vec{0.5, 0.5})));
  double expected = 0.0;
  for (double r : steps) expected += r;
  EXPECT_NEAR(measured_policy_regret(seq, mdp, 3), oracle::enumerate_optimal_return(mdp, 3) - expected, 1e-9);
}

TEST(MeasuredPolicyRegret, SingleStateReducesToStateless) {
  Mdp mdp(1, 2, {1.0, 1.0}, {1.0}, {}, QTable(1, 2, std::vector<double>{1.0, 0.25}));
  std::vector<PolicyTable> seq(6, PolicyTable{PolicyDist({0.4, 0.6})});
  EXPECT_NEAR(measured_policy_regret(seq, mdp, 6), 6 * 0.6 * 0.75, 1e-12);
}

double mean_regret(const LearnerModel& learner, std::size_t T) {
  double total = 0.0;
  const auto bandit = scenarios::br_bandit();
  const std::vector<double> rewards(bandit.values().begin(), bandit.values().end());
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto sim = simulate(bandit_config(rewards, learner, T), seed);
    total += measured_regret_stateless(sim.history, bandit);
  }
  return total / 100.0;
}

TEST(LearnerProperty, AverageRegretDecreasesWithHorizon) {
  for (const auto& learner : scenarios::all_learners(4)) {
    if (learner.kind == LearnerKind::kConstantAction) continue;
    for (std::size_t T : {250, 500, 1000}) {
      const double short_run = mean_regret(learner, T) / static_cast<double>(T);
      const double long_run = mean_regret(learner, 2 * T) / static_cast<double>(2 * T);
      EXPECT_LE(long_run, short_run + 1e-9) << to_string(learner.kind) << " T=" << T;
    }
  }
}

TEST(LearnerProperty, EpsilonMixedPolicyRegretWithinExplorationBudget) {
  const auto sched = schedule(1.0, 0.5, NoiseMode::kFixedDirection);
  for (const auto& mdp : scenarios::br_mdps()) {
    const std::size_t T = 300;
    auto config = mdp_config(mdp, LearnerModel::epsilon_mixed_optimal(sched), T);
    const auto sim = simulate(config, 1);
    const auto& dyn = *sim.dynamics;
    double lo = dyn.reward(0, 0), hi = lo;
    for (double r : dyn.reward().values()) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    double budget = 0.0;
    for (std::size_t t = 1; t <= T; ++t) budget += std::pow(static_cast<double>(t), sched.alpha - 1.0);
    const double regret = measured_policy_regret(sim.learner_policies, dyn, T);
    EXPECT_LE(regret, static_cast<double>(T) * (hi - lo) * budget);
    EXPECT_GE(regret, -1e-9);
  }
}

TEST(ExponentialWeights, ConcentratesOnBestArm) {
  const auto sim = simulate(bandit_config({0.2, 0.9, 0.5}, LearnerModel::exponential_weights(), 5000), 2);
  EXPECT_GT(sim.learner_policies.back()[0][1], 0.9);
}

}  // namespace
}  // namespace prefwatch
