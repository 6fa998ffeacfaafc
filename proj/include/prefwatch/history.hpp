#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "prefwatch/tables.hpp"

namespace prefwatch {

/// What a predictor is allowed to see: visited states and chosen actions,
/// never rewards or the learner's internals. Step t (1-based) is element t-1.
class BehaviorLog {
 public:
  BehaviorLog(std::size_t num_states, std::size_t num_actions);

  void record(State s, Action a);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::size_t size() const noexcept { return actions_.size(); }
  bool empty() const noexcept { return actions_.empty(); }
  State state(std::size_t t) const { return states_.at(t - 1); }
  Action action(std::size_t t) const { return actions_.at(t - 1); }
  std::span<const State> states() const noexcept { return states_; }
  std::span<const Action> actions() const noexcept { return actions_; }

  /// N_t(s) and N_t(s,a) for t = size().
  std::size_t state_visits(State s) const { return state_counts_.at(s); }
  std::size_t pair_visits(State s, Action a) const { return pair_counts_.at(s * num_actions_ + a); }
  std::span<const std::size_t> action_counts(State s) const {
    return std::span<const std::size_t>(pair_counts_).subspan(s * num_actions_, num_actions_);
  }

  /// Last action taken in state s, if any.
  std::optional<Action> last_action(State s) const { return last_action_.at(s); }

  /// t_e(s) = min(t : N_{t-1}(s,a) > 0 for all a); empty until every action
  /// has been seen in s.
  std::optional<std::size_t> exploration_time(State s = 0) const { return exploration_time_.at(s); }

  /// Log restricted to the first `steps` steps.
  BehaviorLog prefix(std::size_t steps) const;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<State> states_;
  std::vector<Action> actions_;
  std::vector<std::size_t> state_counts_;
  std::vector<std::size_t> pair_counts_;
  std::vector<std::size_t> distinct_actions_;
  std::vector<std::optional<Action>> last_action_;
  std::vector<std::optional<std::size_t>> exploration_time_;
};

/// Full record of an interaction, including the realized rewards the learner
/// observed. Only `behavior()` may be handed to predictors.
class InteractionHistory {
 public:
  InteractionHistory(std::size_t num_states, std::size_t num_actions) : behavior_(num_states, num_actions) {}

  void record(State s, Action a, double reward) {
    behavior_.record(s, a);
    rewards_.push_back(reward);
  }

  const BehaviorLog& behavior() const noexcept { return behavior_; }
  std::size_t size() const noexcept { return behavior_.size(); }
  std::span<const double> rewards() const noexcept { return rewards_; }
  double reward(std::size_t t) const { return rewards_.at(t - 1); }

 private:
  BehaviorLog behavior_;
  std::vector<double> rewards_;
};

}  // namespace prefwatch
