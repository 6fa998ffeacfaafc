#include "prefwatch/mdp.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "prefwatch/errors.hpp"

namespace prefwatch {
namespace {

void check_probability_vector(std::span<double> p, const std::string& what) {
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < -kConstructionTolerance || v > 1.0 + kConstructionTolerance) {
      throw InvalidArgument(what + ": entry outside [0,1]");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kConstructionTolerance) {
    throw InvalidArgument(what + ": sums to " + std::to_string(sum));
  }
  for (double& v : p) v = std::max(v, 0.0) / sum;
}

}  // namespace

Mdp::Mdp(std::size_t num_states, std::size_t num_actions, std::vector<double> transition,
         std::vector<double> initial_dist, std::vector<State> terminals, QTable reward)
    : num_states_(num_states),
      num_actions_(num_actions),
      transition_(std::move(transition)),
      initial_dist_(std::move(initial_dist)),
      terminals_(std::move(terminals)),
      terminal_mask_(num_states, false),
      reward_(std::move(reward)) {
  if (num_states_ == 0 || num_actions_ == 0) throw InvalidArgument("Mdp: empty state or action set");
  if (transition_.size() != num_states_ * num_actions_ * num_states_) {
    throw InvalidArgument("Mdp: transition tensor has wrong size");
  }
  if (initial_dist_.size() != num_states_) throw InvalidArgument("Mdp: initial_dist has wrong size");
  if (reward_.num_states() != num_states_ || reward_.num_actions() != num_actions_) {
    throw InvalidArgument("Mdp: reward table shape mismatch");
  }
  for (State s = 0; s < num_states_; ++s) {
    for (Action a = 0; a < num_actions_; ++a) {
      auto row = std::span<double>(transition_).subspan((s * num_actions_ + a) * num_states_, num_states_);
      check_probability_vector(row, "Mdp: transition row (" + std::to_string(s) + "," + std::to_string(a) + ")");
    }
  }
  check_probability_vector(initial_dist_, "Mdp: initial_dist");
  for (State t : terminals_) {
    if (t >= num_states_) throw InvalidArgument("Mdp: terminal index out of range");
    terminal_mask_[t] = true;
    for (Action a = 0; a < num_actions_; ++a) {
      if (this->transition(t, a)[t] < 1.0 - kConstructionTolerance) {
        throw InvalidArgument("Mdp: terminal state " + std::to_string(t) + " must self-loop");
      }
      if (reward_.at(t, a) != 0.0) {
        throw InvalidArgument("Mdp: terminal state " + std::to_string(t) + " must have zero reward");
      }
    }
  }
}

Mdp Mdp::with_restarts() const {
  std::vector<double> transition(transition_.size(), 0.0);
  for (State s = 0; s < num_states_; ++s) {
    for (Action a = 0; a < num_actions_; ++a) {
      const auto src = this->transition(s, a);
      double* dst = transition.data() + (s * num_actions_ + a) * num_states_;
      if (is_terminal(s)) {
        for (State n = 0; n < num_states_; ++n) dst[n] = initial_dist_[n];
        continue;
      }
      double to_terminal = 0.0;
      for (State n = 0; n < num_states_; ++n) {
        if (is_terminal(n)) {
          to_terminal += src[n];
        } else {
          dst[n] += src[n];
        }
      }
      for (State n = 0; n < num_states_; ++n) dst[n] += to_terminal * initial_dist_[n];
    }
  }
  return Mdp(num_states_, num_actions_, std::move(transition), initial_dist_, {}, reward_);
}

Mdp mdp_from_json(const nlohmann::json& doc) {
  const auto num_states = doc.at("num_states").get<std::size_t>();
  const auto num_actions = doc.at("num_actions").get<std::size_t>();
  const auto& tr = doc.at("transition");
  if (!tr.is_array() || tr.size() != num_states) throw InvalidArgument("mdp json: transition must have num_states rows");
  std::vector<double> transition;
  transition.reserve(num_states * num_actions * num_states);
  for (const auto& per_state : tr) {
    if (per_state.size() != num_actions) throw InvalidArgument("mdp json: transition[s] must have num_actions rows");
    for (const auto& row : per_state) {
      if (row.size() != num_states) throw InvalidArgument("mdp json: transition[s][a] must have num_states entries");
      for (const auto& p : row) transition.push_back(p.get<double>());
    }
  }
  auto initial = doc.at("initial_dist").get<std::vector<double>>();
  auto terminals = doc.value("terminals", std::vector<State>{});
  const auto& rw = doc.at("reward");
  if (!rw.is_array() || rw.size() != num_states) throw InvalidArgument("mdp json: reward must have num_states rows");
  std::vector<double> reward;
  reward.reserve(num_states * num_actions);
  for (const auto& row : rw) {
    if (row.size() != num_actions) throw InvalidArgument("mdp json: reward[s] must have num_actions entries");
    for (const auto& r : row) reward.push_back(r.get<double>());
  }
  return Mdp(num_states, num_actions, std::move(transition), std::move(initial), std::move(terminals),
             QTable(num_states, num_actions, std::move(reward)));
}

nlohmann::json mdp_to_json(const Mdp& mdp) {
  nlohmann::json doc;
  doc["num_states"] = mdp.num_states();
  doc["num_actions"] = mdp.num_actions();
  auto transition = nlohmann::json::array();
  auto reward = nlohmann::json::array();
  for (State s = 0; s < mdp.num_states(); ++s) {
    auto per_state = nlohmann::json::array();
    for (Action a = 0; a < mdp.num_actions(); ++a) {
      const auto row = mdp.transition(s, a);
      per_state.push_back(std::vector<double>(row.begin(), row.end()));
    }
    transition.push_back(per_state);
    const auto r = mdp.reward().row(s);
    reward.push_back(std::vector<double>(r.begin(), r.end()));
  }
  doc["transition"] = transition;
  doc["initial_dist"] = std::vector<double>(mdp.initial_dist().begin(), mdp.initial_dist().end());
  doc["terminals"] = mdp.terminals();
  doc["reward"] = reward;
  return doc;
}

Mdp load_mdp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open MDP file " + path.string());
  return mdp_from_json(nlohmann::json::parse(in));
}

}  // namespace prefwatch
