#pragma once

// Reference computations written independently of the main library: direct
// formulas and exhaustive enumeration over small instances. They share only
// the Mdp data type with the code they check.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "prefwatch/mdp.hpp"

namespace prefwatch::oracle {

using Vec = std::vector<double>;

Vec softmax(const Vec& values, double beta);
double kl(const Vec& p, const Vec& q);
/// Closed-form averaging table: (1/beta)(log p - mean log p) + sigma/m.
Vec averaging_closed_form(const std::vector<std::size_t>& counts, double beta, double sigma);
double radius(std::size_t t, std::size_t actions, std::size_t states, std::size_t horizon, double epsilon);
double kl_to_br(double delta, std::size_t actions, double beta);

/// sum_{t=1}^{n} t^(alpha-1).
double power_partial_sum(std::size_t n, double alpha);
/// sum_{t=1}^{n} f(t)/t with f(t) = sqrt(t).
double sqrt_over_t_partial_sum(std::size_t n);
/// Stateless l-infinity bound with constant kappa and f(n) = sqrt(n), summed
/// over t = 2..horizon.
double constant_kappa_bound(std::size_t horizon, std::size_t actions, double epsilon, double beta, double kappa);

/// Optimal expected return over `horizon` steps, maximizing over every
/// deterministic time-indexed policy. Each candidate is scored by walking all
/// state paths.
double enumerate_optimal_return(const Mdp& mdp, std::size_t horizon);

/// Per-step expected rewards of a time-indexed stochastic policy
/// (policies[t][s][a]) by summing over every state-action trajectory.
Vec enumerate_step_rewards(const Mdp& mdp, const std::vector<std::vector<Vec>>& policies);

/// Best-response distance of per-step value tables (tables[t][s][a]) by
/// enumeration: optimum minus the return of their greedy policies.
double enumerate_d_br(const Mdp& mdp, const std::vector<std::vector<Vec>>& tables);

/// Random MDP with |S| states and |A| actions; when `with_terminal`, the last
/// state is absorbing with zero reward.
Mdp random_mdp(std::size_t states, std::size_t actions, bool with_terminal, std::uint64_t seed);

}  // namespace prefwatch::oracle
