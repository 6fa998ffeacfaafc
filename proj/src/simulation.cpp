#include "prefwatch/simulation.hpp"

#include "prefwatch/env.hpp"
#include "prefwatch/errors.hpp"
#include "prefwatch/learners.hpp"
#include "prefwatch/rng.hpp"

namespace prefwatch {

QTable ground_truth(const ExperimentConfig& config) {
  const auto& env = config.environment;
  if (!env.stateful()) {
    const auto values = env.bandit->values();
    return QTable(1, values.size(), std::vector<double>(values.begin(), values.end()));
  }
  try {
    return solve_q_star(*env.mdp);
  } catch (const DivergentMdp& e) {
    throw ConfigError({std::string("environment: ") + e.what()});
  }
}

Mdp run_dynamics(const ExperimentConfig& config) {
  const auto& env = config.environment;
  if (!env.stateful()) throw InvalidArgument("run_dynamics: single-state environment has no dynamics");
  return env.episode_reset ? env.mdp->with_restarts() : *env.mdp;
}

Simulation simulate(const ExperimentConfig& config, std::uint64_t seed) {
  const bool stateful = config.stateful();
  const std::size_t n_states = config.environment.num_states();
  const std::size_t n_actions = config.environment.num_actions();
  const std::uint64_t hash = config.hash();

  Rng env_rng(derive_stream_seed(hash, seed, StreamRole::kEnvironment));
  Rng action_rng(derive_stream_seed(hash, seed, StreamRole::kLearnerAction));
  Rng noise_rng(derive_stream_seed(hash, seed, StreamRole::kLearnerNoise));

  Simulation sim{InteractionHistory(n_states, n_actions), {}, {}, {}, ground_truth(config), std::nullopt};
  if (stateful) sim.dynamics = run_dynamics(config);
  sim.predictions.kind = config.predictor.kind;
  sim.learner_policies.reserve(config.horizon);

  const Predictor predictor(config.predictor.kind, config.predictor.beta, config.predictor.sigma);
  Learner learner(config.learner, sim.truth, config.horizon);

  State s = stateful ? sample_initial(*sim.dynamics, env_rng) : 0;
  for (std::size_t t = 1; t <= config.horizon; ++t) {
    const BehaviorLog& seen = sim.history.behavior();
    if (stateful) {
      sim.predictions.tables.push_back(predictor.predict_stateful(seen));
    } else {
      sim.predictions.rewards.push_back(predictor.predict(seen));
    }

    auto policy = learner.policy(sim.history, noise_rng);
    const Action a = action_rng.categorical(policy.at(s).probs());
    const double r = stateful ? sim.dynamics->reward(s, a) : (*config.environment.bandit)[a];
    learner.update(s, a, r, policy);
    if (learner.last_estimate()) sim.learner_estimates.push_back(*learner.last_estimate());
    sim.learner_policies.push_back(std::move(policy));
    sim.history.record(s, a, r);
    if (stateful) s = sample_transition(*sim.dynamics, s, a, env_rng);
  }
  return sim;
}

}  // namespace prefwatch
