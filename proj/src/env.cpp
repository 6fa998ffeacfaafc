#include "prefwatch/env.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prefwatch/errors.hpp"

namespace prefwatch {

PolicyDist boltzmann_policy(std::span<const double> values, double beta) {
  if (values.empty()) throw InvalidArgument("boltzmann_policy: no actions");
  if (!std::isfinite(beta) || beta < 0.0) throw InvalidArgument("boltzmann_policy: beta must be finite and >= 0");
  require_finite(values, "boltzmann_policy");
  const double top = *std::max_element(values.begin(), values.end());
  std::vector<double> p(values.size());
  double z = 0.0;
  for (std::size_t a = 0; a < values.size(); ++a) {
    p[a] = std::exp(beta * (values[a] - top));
    z += p[a];
  }
  for (double& v : p) v /= z;
  return PolicyDist(std::move(p));
}

PolicyTable boltzmann_policy(const QTable& q, double beta) {
  PolicyTable out;
  out.reserve(q.num_states());
  for (State s = 0; s < q.num_states(); ++s) out.push_back(boltzmann_policy(q.row(s), beta));
  return out;
}

PolicyTable greedy_policy(const QTable& q) {
  PolicyTable out;
  out.reserve(q.num_states());
  for (State s = 0; s < q.num_states(); ++s) {
    out.push_back(PolicyDist::point_mass(q.num_actions(), argmax(q.row(s))));
  }
  return out;
}

namespace {

// One Bellman optimality backup: out = R + P * max_a' next.
void bellman_backup(const Mdp& mdp, std::span<const double> next_value, QTable& out) {
  for (State s = 0; s < mdp.num_states(); ++s) {
    for (Action a = 0; a < mdp.num_actions(); ++a) {
      if (mdp.is_terminal(s)) {
        out.at(s, a) = 0.0;
        continue;
      }
      const auto row = mdp.transition(s, a);
      double expected = 0.0;
      for (State n = 0; n < mdp.num_states(); ++n) expected += row[n] * next_value[n];
      out.at(s, a) = mdp.reward(s, a) + expected;
    }
  }
}

std::vector<double> state_values(const QTable& q) {
  std::vector<double> v(q.num_states());
  for (State s = 0; s < q.num_states(); ++s) {
    const auto r = q.row(s);
    v[s] = *std::max_element(r.begin(), r.end());
  }
  return v;
}

}  // namespace

QTable solve_q_star(const Mdp& mdp, const QSolveOptions& options) {
  QTable q(mdp.num_states(), mdp.num_actions(), 0.0);
  QTable next(mdp.num_states(), mdp.num_actions(), 0.0);
  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    bellman_backup(mdp, state_values(q), next);
    double residual = 0.0;
    double magnitude = 0.0;
    for (std::size_t i = 0; i < next.values().size(); ++i) {
      residual = std::max(residual, std::abs(next.values()[i] - q.values()[i]));
      magnitude = std::max(magnitude, std::abs(next.values()[i]));
    }
    std::swap(q, next);
    if (magnitude > options.divergence_threshold) {
      throw DivergentMdp("solve_q_star: values exceeded " + std::to_string(options.divergence_threshold) +
                         " after " + std::to_string(iter + 1) + " iterations (MDP is not proper)");
    }
    if (residual <= options.tol) return q;
  }
  throw DivergentMdp("solve_q_star: no fixed point within " + std::to_string(options.max_iter) +
                     " iterations (MDP is not proper)");
}

std::vector<QTable> backward_induction(const Mdp& mdp, std::size_t horizon) {
  if (horizon == 0) throw InvalidArgument("backward_induction: horizon must be >= 1");
  std::vector<QTable> q(horizon, QTable(mdp.num_states(), mdp.num_actions(), 0.0));
  std::vector<double> next_value(mdp.num_states(), 0.0);
  for (std::size_t k = horizon; k-- > 0;) {
    bellman_backup(mdp, next_value, q[k]);
    next_value = state_values(q[k]);
  }
  return q;
}

QTable solve_q_star(const Mdp& mdp, std::size_t horizon) { return backward_induction(mdp, horizon).front(); }

double finite_horizon_optimal_return(const Mdp& mdp, std::size_t horizon) {
  const auto values = state_values(solve_q_star(mdp, horizon));
  double total = 0.0;
  for (State s = 0; s < mdp.num_states(); ++s) total += mdp.initial_dist()[s] * values[s];
  return total;
}

std::vector<double> expected_step_rewards(const Mdp& mdp, std::span<const PolicyTable> policies) {
  const std::size_t n_states = mdp.num_states();
  const std::size_t n_actions = mdp.num_actions();
  std::vector<double> dist(mdp.initial_dist().begin(), mdp.initial_dist().end());
  std::vector<double> next(n_states);
  std::vector<double> rewards;
  rewards.reserve(policies.size());
  for (const auto& policy : policies) {
    if (policy.size() != n_states) throw InvalidArgument("expected_step_rewards: policy has wrong state count");
    std::fill(next.begin(), next.end(), 0.0);
    double step_reward = 0.0;
    for (State s = 0; s < n_states; ++s) {
      if (dist[s] == 0.0) continue;
      if (policy[s].size() != n_actions) throw InvalidArgument("expected_step_rewards: policy has wrong action count");
      for (Action a = 0; a < n_actions; ++a) {
        const double w = dist[s] * policy[s][a];
        if (w == 0.0) continue;
        step_reward += w * mdp.reward(s, a);
        const auto row = mdp.transition(s, a);
        for (State n = 0; n < n_states; ++n) next[n] += w * row[n];
      }
    }
    rewards.push_back(step_reward);
    std::swap(dist, next);
  }
  return rewards;
}

std::vector<double> optimal_step_rewards(const Mdp& mdp, std::size_t horizon) {
  const auto q = backward_induction(mdp, horizon);
  std::vector<PolicyTable> policies;
  policies.reserve(horizon);
  for (const auto& slice : q) policies.push_back(greedy_policy(slice));
  return expected_step_rewards(mdp, policies);
}

State sample_transition(const Mdp& mdp, State s, Action a, Rng& rng) {
  if (s >= mdp.num_states() || a >= mdp.num_actions()) throw InvalidArgument("sample_transition: index out of range");
  return rng.categorical(mdp.transition(s, a));
}

State sample_initial(const Mdp& mdp, Rng& rng) { return rng.categorical(mdp.initial_dist()); }

}  // namespace prefwatch
