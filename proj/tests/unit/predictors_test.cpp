#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "prefwatch/env.hpp"
#include "prefwatch/errors.hpp"
#include "prefwatch/measures.hpp"
#include "prefwatch/oracle.hpp"
#include "prefwatch/predictors.hpp"
#include "prefwatch/simulation.hpp"
#include "test_support.hpp"

namespace prefwatch {
namespace {

TEST(BestResponse, IndicatorOnPreviousAction) {
  BehaviorLog log(1, 4);
  log.record(0, 1);
  log.record(0, 2);
  const auto r = best_response_predictor(log);
  EXPECT_EQ(std::vector<double>(r.values().begin(), r.values().end()), (std::vector<double>{0, 0, 1, 0}));
}

TEST(BestResponse, FirstStepIndicatesActionZero) {
  const auto r = best_response_predictor(BehaviorLog(1, 3));
  EXPECT_EQ(std::vector<double>(r.values().begin(), r.values().end()), (std::vector<double>{1, 0, 0}));
}

TEST(BestResponse, ArgmaxIsAlwaysPreviousAction) {
  Rng rng(1);
  BehaviorLog log(1, 5);
  for (int t = 0; t < 200; ++t) {
    const Action a = rng.below(5);
    log.record(0, a);
    EXPECT_EQ(argmax(best_response_predictor(log).values()), a);
  }
}

TEST(BestResponse, StatefulUsesLastActionPerState) {
  BehaviorLog log(3, 2);
  log.record(0, 1);
  log.record(1, 0);
  log.record(0, 0);
  const auto p = best_response_predictor_stateful(log);
  EXPECT_EQ(argmax(p.values.row(0)), 0u);
  EXPECT_EQ(argmax(p.values.row(1)), 0u);
  EXPECT_EQ(p.values.at(2, 0), 1.0);
  BehaviorLog other(3, 2);
  other.record(1, 1);
  EXPECT_EQ(argmax(best_response_predictor_stateful(other).values.row(1)), 1u);
}

TEST(Averaging, SymmetricCountsGiveSigmaShare) {
  const std::vector<std::size_t> counts{3, 3, 3, 3};
  const auto r = averaging_predictor_stateless(counts, 1.7, 2.0);
  for (Action a = 0; a < 4; ++a) EXPECT_NEAR(r[a], 0.5, 1e-15);
}

TEST(Averaging, ClosedFormExample) {
  const std::vector<std::size_t> counts{2, 1, 1};
  const auto r = averaging_predictor_stateless(counts, 1.0, 0.0);
  EXPECT_NEAR(r[0], 0.4621, 5e-5);
  EXPECT_NEAR(r[1], -0.2310, 5e-5);
  EXPECT_NEAR(r[2], -0.2310, 5e-5);
  const auto ref = oracle::averaging_closed_form(counts, 1.0, 0.0);
  for (Action a = 0; a < 3; ++a) EXPECT_NEAR(r[a], ref[a], 1e-12);
}

TEST(Averaging, ZeroCountIsNotYetExplored) {
  const std::vector<std::size_t> counts{2, 0, 1};
  EXPECT_THROW(averaging_predictor_stateless(counts, 1.0, 0.0), NotYetExplored);
  EXPECT_THROW(averaging_predictor_stateless(std::vector<std::size_t>{1, 1}, 0.0, 0.0), InvalidArgument);
}

TEST(Averaging, StatefulMarksUnexploredStatesAbsent) {
  const std::vector<std::size_t> counts{2, 1, 1, 0, 4, 4, 5, 5, 5};
  const std::vector<double> sigma{0.0, 1.5, 3.0};
  const auto p = averaging_predictor_stateful(counts, 3, 1.0, sigma);
  EXPECT_TRUE(p.present[0]);
  EXPECT_FALSE(p.present[1]);
  EXPECT_TRUE(p.present[2]);
  EXPECT_NEAR(p.values.at(0, 0), 0.4621, 5e-5);
  for (Action a = 0; a < 3; ++a) EXPECT_NEAR(p.values.at(2, a), 1.0, 1e-12);
}

TEST(AveragingProperty, RoundTripToFrequencies) {
  Rng rng(21);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 2 + rng.below(5);
    std::vector<std::size_t> counts(m);
    double total = 0.0;
    for (auto& c : counts) total += static_cast<double>(c = 1 + rng.below(500));
    const double beta = 0.1 + 5.0 * rng.uniform();
    const double sigma = -3.0 + 6.0 * rng.uniform();
    const auto r = averaging_predictor_stateless(counts, beta, sigma);
    double sum = 0.0;
    for (Action a = 0; a < m; ++a) sum += r[a];
    ASSERT_NEAR(sum, sigma, 1e-9);
    const auto p = boltzmann_policy(r.values(), beta);
    for (Action a = 0; a < m; ++a) ASSERT_NEAR(p[a], counts[a] / total, 1e-12);
  }
}

TEST(AveragingProperty, SigmaShiftIsUniformOffset) {
  Rng rng(22);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 2 + rng.below(5);
    std::vector<std::size_t> counts(m);
    for (auto& c : counts) c = 1 + rng.below(100);
    const double s1 = -5.0 + 10.0 * rng.uniform();
    const double s2 = -5.0 + 10.0 * rng.uniform();
    const auto a = averaging_predictor_stateless(counts, 1.3, s1);
    const auto b = averaging_predictor_stateless(counts, 1.3, s2);
    for (Action i = 0; i < m; ++i) ASSERT_NEAR(a[i] - b[i], (s1 - s2) / static_cast<double>(m), 1e-9);
  }
}

TEST(Predictor, AveragingBeforeExplorationIsUniformShare) {
  Predictor p(PredictorKind::kAveraging, 1.0, 3.0);
  BehaviorLog log(1, 3);
  log.record(0, 0);
  const auto r = p.predict(log);
  for (Action a = 0; a < 3; ++a) EXPECT_NEAR(r[a], 1.0, 1e-15);
}

TEST(Predictor, ConstantZero) {
  Predictor p(PredictorKind::kConstantZero, 1.0, 0.0);
  BehaviorLog log(1, 3);
  log.record(0, 2);
  const auto r = p.predict(log);
  for (double v : r.values()) EXPECT_EQ(v, 0.0);
}

TEST(PredictorProperty, CausalityUnderHistoryPerturbation) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const bool stateful = trial % 2 == 1;
    const std::size_t S = stateful ? 3 : 1, A = 3, T = 60;
    BehaviorLog base(S, A);
    std::vector<std::pair<State, Action>> steps;
    for (std::size_t t = 0; t < T; ++t) steps.emplace_back(rng.below(S), rng.below(A));
    const std::size_t cut = 1 + rng.below(T);
    auto perturbed_steps = steps;
    for (std::size_t t = cut - 1; t < T; ++t) perturbed_steps[t] = {rng.below(S), rng.below(A)};
    BehaviorLog a(S, A), b(S, A);
    for (auto [s, x] : steps) a.record(s, x);
    for (auto [s, x] : perturbed_steps) b.record(s, x);
    for (auto kind : {PredictorKind::kBestResponse, PredictorKind::kAveraging}) {
      Predictor p(kind, 1.5, 0.0);
      const auto ta = predict_trace(p, a, stateful);
      const auto tb = predict_trace(p, b, stateful);
      for (std::size_t t = 0; t < cut; ++t) {
        if (stateful) {
          ASSERT_EQ(ta.tables[t].values, tb.tables[t].values) << "trial " << trial << " t=" << t + 1;
          ASSERT_EQ(ta.tables[t].present, tb.tables[t].present);
        } else {
          ASSERT_EQ(ta.rewards[t], tb.rewards[t]) << "trial " << trial << " t=" << t + 1;
        }
      }
    }
  }
}

TEST(PredictorIsolation, SimulationTraceEqualsReplayOnBehaviorOnly) {
  for (bool stateful : {false, true}) {
    ExperimentConfig c = stateful ? testing::mdp_config(testing::two_step_chain({0.2, 0.7}, {0.5, 0.1}),
                                                        LearnerModel::exponential_weights(), 300)
                                  : testing::bandit_config({0.2, 0.7, 0.4}, LearnerModel::exponential_weights(), 300);
    for (auto kind : {PredictorKind::kBestResponse, PredictorKind::kAveraging}) {
      c.predictor.kind = kind;
      c.predictor.beta = 2.0;
      const auto sim = simulate(c, 5);
      const auto replay = predict_trace(Predictor(kind, 2.0, 0.0), sim.history.behavior(), stateful);
      ASSERT_EQ(replay.size(), sim.predictions.size());
      for (std::size_t t = 0; t < replay.size(); ++t) {
        if (stateful) {
          ASSERT_EQ(replay.tables[t].values, sim.predictions.tables[t].values);
        } else {
          ASSERT_EQ(replay.rewards[t], sim.predictions.rewards[t]);
        }
      }
    }
  }
}

TEST(Reductions, ConstantTraceIsFixedPointOfEveryMode) {
  const RewardTable r({0.3, 0.9, 0.1});
  const std::vector<RewardTable> trace(7, r);
  Rng rng(1);
  const auto mean = reduce_perstep_to_final(trace, FinalReduction::kAverage, rng);
  for (Action a = 0; a < 3; ++a) EXPECT_NEAR(mean[a], r[a], 1e-15);
  EXPECT_EQ(reduce_perstep_to_final(trace, FinalReduction::kSample, rng), r);
  const auto br = reduce_perstep_to_final(trace, FinalReduction::kBrMajority, rng);
  EXPECT_EQ(argmax(br.values()), 1u);
}

TEST(Reductions, MajorityOfArgmaxes) {
  const std::vector<RewardTable> trace{RewardTable({1, 0}), RewardTable({1, 0}), RewardTable({0, 1})};
  Rng rng(2);
  const auto r = reduce_perstep_to_final(trace, FinalReduction::kBrMajority, rng);
  EXPECT_EQ(r[0], 1.0);
  EXPECT_EQ(r[1], 0.0);
  EXPECT_THROW(reduce_perstep_to_final(std::vector<RewardTable>{}, FinalReduction::kAverage, rng), InvalidArgument);
}

TEST(Reductions, AverageSatisfiesJensenInL2) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 2 + rng.below(4), T = 1 + rng.below(30);
    const RewardTable truth(testing::random_vector(rng, m, -1, 1));
    std::vector<RewardTable> trace;
    for (std::size_t t = 0; t < T; ++t) trace.emplace_back(testing::random_vector(rng, m, -1, 1));
    const auto mean = reduce_perstep_to_final(trace, FinalReduction::kAverage, rng);
    const double lhs = T * l2_distance(mean.values(), truth.values());
    ASSERT_LE(lhs, norm_distance(truth, trace, Norm::kL2) * (1 + 1e-12));
  }
}

TEST(Reductions, FinalToPerStepCallsOnStrictPrefixes) {
  BehaviorLog log(1, 2);
  for (int i = 0; i < 5; ++i) log.record(0, i % 2);
  const auto trace = reduce_final_to_perstep(
      [](const BehaviorLog& prefix) { return RewardTable({static_cast<double>(prefix.size()), 0.0}); }, log);
  ASSERT_EQ(trace.size(), 5u);
  for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(trace[t][0], static_cast<double>(t));
  const auto constant = reduce_final_to_perstep([](const BehaviorLog&) { return RewardTable({0.5, 0.5}); }, log);
  for (const auto& r : constant) EXPECT_EQ(r[0], 0.5);
}

}  // namespace
}  // namespace prefwatch
