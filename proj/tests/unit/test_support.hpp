#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "prefwatch/config.hpp"
#include "prefwatch/mdp.hpp"
#include "prefwatch/rng.hpp"
#include "prefwatch/tables.hpp"

namespace prefwatch::testing {

/// s0 -> s1 -> terminal s2 regardless of the action.
inline Mdp two_step_chain(std::vector<double> r0, std::vector<double> r1) {
  const std::size_t m = r0.size();
  std::vector<double> tr(3 * m * 3, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    tr[(0 * m + a) * 3 + 1] = 1.0;
    tr[(1 * m + a) * 3 + 2] = 1.0;
    tr[(2 * m + a) * 3 + 2] = 1.0;
  }
  std::vector<double> q = r0;
  q.insert(q.end(), r1.begin(), r1.end());
  q.insert(q.end(), m, 0.0);
  return Mdp(3, m, tr, {1.0, 0.0, 0.0}, {2}, QTable(3, m, q));
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

inline std::vector<double> random_simplex(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - rng.uniform());
    sum += x;
  }
  for (double& x : v) x /= sum;
  return v;
}

inline ExperimentConfig bandit_config(std::vector<double> rewards, LearnerModel learner, std::size_t horizon) {
  ExperimentConfig c;
  c.name = "test";
  c.environment.bandit = RewardTable(std::move(rewards));
  c.learner = std::move(learner);
  c.predictor.kind = PredictorKind::kBestResponse;
  c.measures = {MeasureKind::kBr, MeasureKind::kKlbp, MeasureKind::kL2, MeasureKind::kLinf};
  c.horizon = horizon;
  return c;
}

inline ExperimentConfig mdp_config(Mdp mdp, LearnerModel learner, std::size_t horizon) {
  ExperimentConfig c;
  c.name = "test-mdp";
  c.environment.mdp = std::move(mdp);
  c.learner = std::move(learner);
  c.predictor.kind = PredictorKind::kBestResponse;
  c.measures = {MeasureKind::kBr, MeasureKind::kKlbp, MeasureKind::kL2, MeasureKind::kLinf};
  c.horizon = horizon;
  return c;
}

}  // namespace prefwatch::testing
