#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "prefwatch/errors.hpp"
#include "prefwatch/history.hpp"
#include "prefwatch/rng.hpp"
#include "prefwatch/tables.hpp"

namespace prefwatch {
namespace {

TEST(RewardTable, RejectsNonFiniteValues) {
  EXPECT_THROW(RewardTable({1.0, std::numeric_limits<double>::quiet_NaN()}), InvalidArgument);
  EXPECT_THROW(RewardTable(std::vector<double>{}), InvalidArgument);
}

TEST(RewardTable, SigmaMustMatchCoordinateSum) {
  EXPECT_NO_THROW(RewardTable({0.5, 0.5}, 1.0));
  EXPECT_THROW(RewardTable({0.5, 0.6}, 1.0), InvalidArgument);
}

TEST(RewardTable, NormalizedShiftsToRequestedSum) {
  const std::vector<double> v{3.0, 1.0, -1.0};
  const auto r = RewardTable::normalized(v, 2.0);
  EXPECT_NEAR(r[0] + r[1] + r[2], 2.0, 1e-12);
  EXPECT_NEAR(r[0] - r[1], 2.0, 1e-12);
  EXPECT_NEAR(r[1] - r[2], 2.0, 1e-12);
}

TEST(QTable, RowsAreContiguous) {
  QTable q(2, 3, std::vector<double>{1, 2, 3, 4, 5, 6});
  EXPECT_EQ(q.at(1, 0), 4.0);
  EXPECT_EQ(q.row(1)[2], 6.0);
  EXPECT_THROW(QTable(2, 3, std::vector<double>{1, 2}), InvalidArgument);
}

TEST(PolicyDist, ValidatesAndRenormalizes) {
  EXPECT_THROW(PolicyDist({0.5, 0.6}), InvalidArgument);
  EXPECT_THROW(PolicyDist({-0.5, 1.5}), InvalidArgument);
  PolicyDist p({0.3 + 1e-10, 0.7});
  EXPECT_NEAR(p[0] + p[1], 1.0, 1e-15);
  EXPECT_EQ(PolicyDist::point_mass(3, 2)[2], 1.0);
  EXPECT_DOUBLE_EQ(PolicyDist::uniform(4)[1], 0.25);
}

TEST(Argmax, TiesGoToLowestIndex) {
  const std::vector<double> v{0.2, 0.9, 0.9, 0.1};
  EXPECT_EQ(argmax(v), 1u);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, StreamsDifferByRole) {
  EXPECT_NE(derive_stream_seed(1, 2, StreamRole::kEnvironment), derive_stream_seed(1, 2, StreamRole::kLearnerAction));
  EXPECT_NE(derive_stream_seed(1, 2, StreamRole::kEnvironment), derive_stream_seed(1, 3, StreamRole::kEnvironment));
}

TEST(Rng, CategoricalRespectsPointMass) {
  Rng rng(3);
  const std::vector<double> p{0.0, 1.0, 0.0};
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(rng.categorical(p), 1u);
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(9);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(rng.below(7), 7u);
}

TEST(BehaviorLog, CountsMatchRecomputation) {
  Rng rng(5);
  BehaviorLog log(3, 4);
  std::vector<std::size_t> pairs(12, 0);
  for (int i = 0; i < 500; ++i) {
    const State s = rng.below(3);
    const Action a = rng.below(4);
    log.record(s, a);
    ++pairs[s * 4 + a];
  }
  for (State s = 0; s < 3; ++s) {
    std::size_t visits = 0;
    for (Action a = 0; a < 4; ++a) {
      EXPECT_EQ(log.pair_visits(s, a), pairs[s * 4 + a]);
      visits += pairs[s * 4 + a];
    }
    EXPECT_EQ(log.state_visits(s), visits);
  }
}

TEST(BehaviorLog, ExplorationTimeIsStepAfterLastNewAction) {
  BehaviorLog log(1, 3);
  log.record(0, 0);
  log.record(0, 0);
  EXPECT_FALSE(log.exploration_time().has_value());
  log.record(0, 2);
  log.record(0, 1);
  ASSERT_TRUE(log.exploration_time().has_value());
  EXPECT_EQ(*log.exploration_time(), 5u);
  log.record(0, 1);
  EXPECT_EQ(*log.exploration_time(), 5u);
}

TEST(BehaviorLog, PrefixTruncates) {
  BehaviorLog log(2, 2);
  log.record(0, 1);
  log.record(1, 0);
  log.record(0, 0);
  const auto p = log.prefix(2);
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.state_visits(0), 1u);
  EXPECT_EQ(*p.last_action(0), 1u);
  EXPECT_EQ(*log.last_action(0), 0u);
}

}  // namespace
}  // namespace prefwatch
