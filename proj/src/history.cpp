#include "prefwatch/history.hpp"

#include "prefwatch/errors.hpp"

namespace prefwatch {

BehaviorLog::BehaviorLog(std::size_t num_states, std::size_t num_actions)
    : num_states_(num_states),
      num_actions_(num_actions),
      state_counts_(num_states, 0),
      pair_counts_(num_states * num_actions, 0),
      distinct_actions_(num_states, 0),
      last_action_(num_states),
      exploration_time_(num_states) {
  if (num_states == 0 || num_actions == 0) throw InvalidArgument("BehaviorLog: empty state or action set");
}

void BehaviorLog::record(State s, Action a) {
  if (s >= num_states_ || a >= num_actions_) throw InvalidArgument("BehaviorLog::record: index out of range");
  states_.push_back(s);
  actions_.push_back(a);
  ++state_counts_[s];
  if (pair_counts_[s * num_actions_ + a]++ == 0) {
    if (++distinct_actions_[s] == num_actions_) {
      // Counts through step t cover every action, so t + 1 is the first step
      // whose prediction may use all of them.
      exploration_time_[s] = actions_.size() + 1;
    }
  }
  last_action_[s] = a;
}

BehaviorLog BehaviorLog::prefix(std::size_t steps) const {
  if (steps > size()) throw InvalidArgument("BehaviorLog::prefix: longer than log");
  BehaviorLog out(num_states_, num_actions_);
  for (std::size_t i = 0; i < steps; ++i) out.record(states_[i], actions_[i]);
  return out;
}

}  // namespace prefwatch
