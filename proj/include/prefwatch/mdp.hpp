#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefwatch/tables.hpp"

namespace prefwatch {

/// Finite MDP with undiscounted returns.
///
/// Terminal states must be absorbing and reward-free in every action. The
/// transition tensor is stored row-major as [state][action][next_state].
class Mdp {
 public:
  Mdp(std::size_t num_states, std::size_t num_actions, std::vector<double> transition,
      std::vector<double> initial_dist, std::vector<State> terminals, QTable reward);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::span<const double> transition(State s, Action a) const {
    return std::span<const double>(transition_).subspan((s * num_actions_ + a) * num_states_, num_states_);
  }
  std::span<const double> initial_dist() const noexcept { return initial_dist_; }
  const std::vector<State>& terminals() const noexcept { return terminals_; }
  bool is_terminal(State s) const { return terminal_mask_[s]; }
  const QTable& reward() const noexcept { return reward_; }
  double reward(State s, Action a) const { return reward_.at(s, a); }

  /// Dynamics for a learner that keeps going after an episode ends: every
  /// transition into a terminal state is redirected to a fresh draw from the
  /// initial distribution. The result has no terminal states.
  Mdp with_restarts() const;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> transition_;
  std::vector<double> initial_dist_;
  std::vector<State> terminals_;
  std::vector<bool> terminal_mask_;
  QTable reward_;
};

/// Parses the JSON document form: keys `num_states`, `num_actions`,
/// `transition` ([s][a][s']), `initial_dist`, `terminals`, `reward` ([s][a]).
Mdp mdp_from_json(const nlohmann::json& doc);
nlohmann::json mdp_to_json(const Mdp& mdp);
Mdp load_mdp(const std::filesystem::path& path);

}  // namespace prefwatch
