#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "prefwatch/mdp.hpp"
#include "prefwatch/rng.hpp"
#include "prefwatch/tables.hpp"

namespace prefwatch {

/// Softmax of beta * values, computed with max-subtraction.
PolicyDist boltzmann_policy(std::span<const double> values, double beta);

/// Boltzmann policy of every row of a Q table.
PolicyTable boltzmann_policy(const QTable& q, double beta);

/// Greedy (lowest-index tie-break) deterministic policy of every row.
PolicyTable greedy_policy(const QTable& q);

struct QSolveOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  /// Values larger than this (in sup norm) are reported as divergence.
  double divergence_threshold = 1e12;
};

/// Fixed point of Q(s,a) = R(s,a) + E[max_a' Q(s',a')] on a proper MDP.
/// Throws DivergentMdp if the iteration fails to converge.
QTable solve_q_star(const Mdp& mdp, const QSolveOptions& options = {});

/// Time-indexed optimal values from backward induction over `horizon` steps.
/// Element t-1 holds the Q values with horizon - t + 1 steps to go.
std::vector<QTable> backward_induction(const Mdp& mdp, std::size_t horizon);

/// Finite-horizon alternative to the fixed point: the t = 1 slice of
/// backward induction over `horizon` steps.
QTable solve_q_star(const Mdp& mdp, std::size_t horizon);

/// Optimal expected cumulative reward over `horizon` steps from initial_dist.
double finite_horizon_optimal_return(const Mdp& mdp, std::size_t horizon);

/// Expected reward collected at each step by a time-indexed Markov policy
/// sequence, via forward propagation of the state distribution.
std::vector<double> expected_step_rewards(const Mdp& mdp, std::span<const PolicyTable> policies);

/// Expected per-step reward of the optimal time-indexed policy over `horizon`.
/// Sums to finite_horizon_optimal_return.
std::vector<double> optimal_step_rewards(const Mdp& mdp, std::size_t horizon);

/// Draws s' ~ mu(. | s, a).
State sample_transition(const Mdp& mdp, State s, Action a, Rng& rng);

/// Draws s_1 ~ initial_dist.
State sample_initial(const Mdp& mdp, Rng& rng);

}  // namespace prefwatch
