#include "prefwatch/verify.hpp"

namespace prefwatch::scenarios {
namespace {

using Rows = std::vector<std::vector<std::vector<double>>>;

Mdp build(std::size_t S, std::size_t A, const Rows& P, std::vector<double> init, std::vector<State> terminals,
          const std::vector<std::vector<double>>& R) {
  std::vector<double> flat;
  std::vector<double> rewards;
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      flat.insert(flat.end(), P[s][a].begin(), P[s][a].end());
      rewards.push_back(R[s][a]);
    }
  }
  return Mdp(S, A, std::move(flat), std::move(init), std::move(terminals), QTable(S, A, std::move(rewards)));
}

EstimateSchedule sqrt_schedule() { return EstimateSchedule{1.0, 0.5, NoiseMode::kRandomDirection}; }

}  // namespace

RewardTable br_bandit() { return RewardTable({0.2, 0.9, 0.5, 0.4}); }

std::vector<Mdp> br_mdps() {
  std::vector<Mdp> out;
  // Two-level fork ending in a terminal state.
  out.push_back(build(4, 2,
                      {{{0, 1, 0, 0}, {0, 0, 1, 0}},
                       {{0, 0, 0, 1}, {0, 0, 0, 1}},
                       {{0, 0, 0, 1}, {0, 0, 0, 1}},
                       {{0, 0, 0, 1}, {0, 0, 0, 1}}},
                      {1, 0, 0, 0}, {3}, {{0.1, 0.4}, {0.9, 0.2}, {0.3, 0.5}, {0, 0}}));
  // Stochastic five-state chain with an occasional return to the start.
  out.push_back(build(5, 3,
                      {{{0, 0.7, 0.3, 0, 0}, {0, 0, 1, 0, 0}, {0, 0.5, 0, 0, 0.5}},
                       {{0, 0, 0, 1, 0}, {0, 0, 0.5, 0.5, 0}, {0, 0, 0, 0, 1}},
                       {{0, 0, 0, 0.6, 0.4}, {0, 0, 0, 0.6, 0.4}, {0, 0, 0, 0.6, 0.4}},
                       {{0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}, {0.2, 0, 0, 0, 0.8}},
                       {{0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}}},
                      {0.8, 0.2, 0, 0, 0}, {4},
                      {{0.3, 0.6, 0.1}, {0.8, 0.4, 0.5}, {0.2, 0.9, 0.6}, {0.5, 0.1, 0.7}, {0, 0, 0}}));
  // Four actions that continue with different probabilities.
  out.push_back(build(3, 4,
                      {{{0, 1, 0}, {0, 0.5, 0.5}, {0, 0.2, 0.8}, {0, 0, 1}},
                       {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}},
                       {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}}},
                      {1, 0, 0}, {2}, {{0.2, 0.6, 0.8, 0.4}, {0.7, 0.1, 0.3, 1.0}, {0, 0, 0, 0}}));
  return out;
}

Mdp layered_mdp() {
  return build(4, 2,
               {{{0, 0.8, 0.2, 0}, {0, 0.2, 0.8, 0}},
                {{0, 0, 0, 1}, {0, 0, 0, 1}},
                {{0, 0, 0, 1}, {0, 0, 0, 1}},
                {{0, 0, 0, 1}, {0, 0, 0, 1}}},
               {1, 0, 0, 0}, {3}, {{0.5, 0.2}, {1.0, 0.0}, {0.3, 0.6}, {0, 0}});
}

ExperimentConfig linf_stateless(std::size_t horizon, double epsilon) {
  ExperimentConfig c;
  c.name = "linf-stateless";
  c.environment.bandit = RewardTable({0.8, 0.5, 0.2});
  c.learner = LearnerModel::boltzmann_synthesized(2.0, sqrt_schedule());
  c.predictor.kind = PredictorKind::kAveraging;
  c.predictor.beta = 2.0;
  c.measures = {MeasureKind::kLinf};
  c.measure_beta = 2.0;
  c.horizon = horizon;
  c.epsilon = epsilon;
  return c;
}

ExperimentConfig linf_stateful(std::size_t horizon, double epsilon) {
  ExperimentConfig c = linf_stateless(horizon, epsilon);
  c.name = "linf-stateful";
  c.environment.bandit.reset();
  c.environment.mdp = layered_mdp();
  return c;
}

std::vector<LearnerModel> all_learners(std::size_t actions) {
  return {
      LearnerModel::constant_action(actions - 1),
      LearnerModel::explore_then_commit(),
      LearnerModel::exponential_weights(),
      LearnerModel::boltzmann_synthesized(5.0, sqrt_schedule()),
      LearnerModel::epsilon_mixed_optimal(sqrt_schedule()),
  };
}

}  // namespace prefwatch::scenarios
