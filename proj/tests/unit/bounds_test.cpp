#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "prefwatch/bounds.hpp"
#include "prefwatch/env.hpp"
#include "prefwatch/errors.hpp"
#include "prefwatch/measures.hpp"
#include "prefwatch/oracle.hpp"
#include "prefwatch/verify.hpp"
#include "test_support.hpp"

namespace prefwatch {
namespace {

BoundInputs constant_inputs(std::size_t T, double k, std::function<double(double)> f) {
  BoundInputs in;
  in.horizon = T;
  in.epsilon = 0.1;
  in.beta = 2.0;
  in.action_count = 3;
  in.kappa = {std::vector<double>(T, k)};
  in.exploration_time = {std::size_t{1}};
  in.f = std::move(f);
  return in;
}

TEST(ConcentrationRadius, Example) {
  EXPECT_NEAR(concentration_radius(101, 2, 1, 101, 0.1), 0.4073, 5e-5);
  EXPECT_NEAR(concentration_radius(101, 2, 1, 101, 0.1), oracle::radius(101, 2, 1, 101, 0.1), 1e-15);
}

TEST(ConcentrationRadius, StrictlyDecreasingInTAndEpsilon) {
  for (std::size_t t = 2; t < 500; ++t) {
    ASSERT_GT(concentration_radius(t, 3, 1, 500, 0.1), concentration_radius(t + 1, 3, 1, 500, 0.1));
  }
  for (double eps = 0.01; eps < 0.95; eps += 0.01) {
    ASSERT_GT(concentration_radius(50, 3, 1, 500, eps), concentration_radius(50, 3, 1, 500, eps + 0.01));
  }
}

TEST(ConcentrationRadius, RejectsBadArguments) {
  EXPECT_THROW(concentration_radius(1, 2, 1, 10, 0.1), InvalidArgument);
  EXPECT_THROW(concentration_radius(5, 2, 1, 10, 1.0), InvalidArgument);
  EXPECT_THROW(concentration_radius(5, 2, 1, 10, 0.1, std::size_t{0}), InvalidArgument);
}

TEST(ConcentrationRadius, VisitCountReplacesElapsedSteps) {
  EXPECT_DOUBLE_EQ(concentration_radius(100, 2, 3, 200, 0.1, std::size_t{25}),
                   std::sqrt(2.0 * std::log(2.0 * 3 * 2 * 199 / 0.1) / 25.0));
}

TEST(Kappa, MinimumOverBothPolicies) {
  const std::vector<std::size_t> counts{1, 3};
  EXPECT_DOUBLE_EQ(kappa(counts, PolicyDist({0.4, 0.6})), 0.25);
  EXPECT_DOUBLE_EQ(kappa(counts, PolicyDist({0.1, 0.9})), 0.1);
  EXPECT_TRUE(std::isnan(kappa(std::vector<std::size_t>{0, 0}, PolicyDist({0.5, 0.5}))));
}

TEST(LinftyBound, ZeroLearnerErrorLeavesConcentrationOnly) {
  const auto terms = linfty_bound(constant_inputs(1000, 0.2, [](double) { return 0.0; }), false);
  EXPECT_EQ(terms.learner, 0.0);
  EXPECT_GT(terms.concentration, 0.0);
  EXPECT_EQ(terms.total(), terms.concentration);
}

TEST(LinftyBound, ConstantKappaMatchesPartialSumOracle) {
  const std::size_t T = 10000;
  const double k = 0.15;
  auto in = constant_inputs(T, k, [](double n) { return std::sqrt(n); });
  const double got = linfty_bound(in, false).total();
  const double want = oracle::constant_kappa_bound(T, 3, 0.1, 2.0, k);
  EXPECT_NEAR(got / want, 1.0, 1e-6);
}

TEST(LinftyBound, NondecreasingInHorizon) {
  double previous = 0.0;
  for (std::size_t T = 2; T <= 400; T += 7) {
    // The radius depends on T through its union bound, so each horizon is a fresh evaluation.
    const double v = linfty_bound(constant_inputs(T, 0.3, [](double n) { return std::sqrt(n); }), false).total();
    ASSERT_GE(v, previous);
    previous = v;
  }
}

TEST(LinftyBound, UndefinedKappaIsAnError) {
  auto in = constant_inputs(20, 0.3, [](double) { return 0.0; });
  in.kappa[0][9] = std::nan("");
  EXPECT_THROW(linfty_bound(in, false), InvalidArgument);
  in.kappa[0][9] = 0.3;
  in.exploration_time[0] = 12;
  in.kappa[0][5] = std::nan("");
  EXPECT_NO_THROW(linfty_bound(in, false));
}

TEST(LinftyBound, StatefulUsesVisitCounts) {
  BoundInputs in;
  in.horizon = 3;
  in.epsilon = 0.1;
  in.beta = 1.0;
  in.action_count = 2;
  in.state_count = 2;
  in.kappa = {std::vector<double>(3, 0.5), std::vector<double>(3, 0.5)};
  in.prior_visits = {{0, 1, 2}, {0, 0, 0}};
  in.exploration_time = {std::size_t{2}, std::nullopt};
  in.f = [](double n) { return n; };
  const auto terms = linfty_bound(in, true);
  double learner = 0.0, concentration = 0.0;
  for (std::size_t t = 2; t <= 3; ++t) {
    const double n = static_cast<double>(in.prior_visits[0][t - 1]);
    learner += n / std::sqrt((t - 1) * n) / 0.5;
    concentration += 2.0 * concentration_radius(t, 2, 2, 3, 0.1) / 0.5;
  }
  EXPECT_NEAR(terms.learner, learner, 1e-12);
  EXPECT_NEAR(terms.concentration, concentration, 1e-12);
}

TEST(AzumaCoverage, PointMassLearnerIsAlwaysCovered) {
  BehaviorLog log(1, 2);
  std::vector<PolicyTable> policies;
  for (int t = 0; t < 200; ++t) {
    log.record(0, 1);
    policies.push_back(PolicyTable{PolicyDist::point_mass(2, 1)});
  }
  EXPECT_TRUE(azuma_covered(log, policies, 0.1));
}

TEST(AzumaCoverage, GrossDeviationIsDetected) {
  BehaviorLog log(1, 2);
  std::vector<PolicyTable> policies;
  for (int t = 0; t < 200; ++t) {
    log.record(0, 0);
    policies.push_back(PolicyTable{PolicyDist::point_mass(2, 1)});
  }
  EXPECT_FALSE(azuma_covered(log, policies, 0.1));
}

TEST(AzumaCoverage, ScenarioReachesNominalLevel) {
  const auto result = azuma_coverage(scenarios::linf_stateless(500, 0.1), 50);
  EXPECT_EQ(result.seeds, 50u);
  EXPECT_GE(result.fraction(), 0.9);
}

TEST(Impossibility, PairIsTwoArmSeparated) {
  const auto [first, second] = adversarial_pair(2);
  EXPECT_NEAR(l2_distance(first.values(), second.values()), std::sqrt(0.5), 1e-15);
  EXPECT_THROW(adversarial_pair(1), InvalidArgument);
  EXPECT_NEAR(impossibility_lower_bound(2, 1000), 500 * std::sqrt(0.5), 1e-9);
}

TEST(Impossibility, AnyFixedTraceIsFarFromOneMember) {
  Rng rng(1);
  for (std::size_t m : {2, 4}) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<RewardTable> trace;
      for (int t = 0; t < 50; ++t) trace.emplace_back(testing::random_vector(rng, m, -1, 2));
      ASSERT_TRUE(certify_impossibility(trace).holds());
    }
  }
}

TEST(KlToBr, DomainAndMonotonicity) {
  EXPECT_FALSE(kl_to_br_perstep_bound(0.5, 2, 1.0).has_value());
  EXPECT_EQ(*kl_to_br_perstep_bound(0.0, 3, 1.0), 0.0);
  EXPECT_NEAR(*kl_to_br_perstep_bound(0.1, 3, 2.0), oracle::kl_to_br(0.1, 3, 2.0), 1e-15);
  EXPECT_LT(*kl_to_br_perstep_bound(0.1, 3, 2.0), *kl_to_br_perstep_bound(0.2, 3, 2.0));
  EXPECT_THROW(kl_to_br_perstep_bound(0.1, 3, 0.0), InvalidArgument);
}

TEST(KlToBrProperty, StepGapBoundedWheneverDefined) {
  Rng rng(3);
  std::size_t applicable = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 2 + rng.below(3);
    const double beta = 0.5 + 3.0 * rng.uniform();
    const RewardTable truth(testing::random_vector(rng, m, 0, 1));
    auto noisy = std::vector<double>(truth.values().begin(), truth.values().end());
    for (double& x : noisy) x += 0.05 * (2 * rng.uniform() - 1);
    const RewardTable prediction(noisy);
    const double kl = kl_divergence(boltzmann_policy(prediction.values(), beta), boltzmann_policy(truth.values(), beta));
    const auto bound = kl_to_br_perstep_bound(std::sqrt(kl / 2.0), m, beta);
    if (!bound) continue;
    ++applicable;
    ASSERT_LE(br_gap(truth, prediction), *bound + 1e-12);
  }
  EXPECT_GT(applicable, 5000u);
}

TEST(SoftmaxProperty, LipschitzConstantHalfBeta) {
  Rng rng(4);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 2 + rng.below(4);
    const double beta = 4.0 * rng.uniform();
    const auto x = testing::random_vector(rng, m, -2, 2), y = testing::random_vector(rng, m, -2, 2);
    const auto px = boltzmann_policy(x, beta), py = boltzmann_policy(y, beta);
    ASSERT_LE(linf_distance(px.probs(), py.probs()), 0.5 * beta * linf_distance(x, y) + 1e-12);
  }
}

}  // namespace
}  // namespace prefwatch
