#include "prefwatch/learners.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prefwatch/env.hpp"
#include "prefwatch/errors.hpp"

namespace prefwatch {

void EstimateSchedule::validate() const {
  if (!std::isfinite(c) || c < 0.0) throw InvalidArgument("EstimateSchedule: c must be >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("EstimateSchedule: alpha must lie in (0,1)");
}

double EstimateSchedule::error_at(std::size_t n) const {
  if (n == 0) throw InvalidArgument("EstimateSchedule::error_at: count must be >= 1");
  return c * std::pow(static_cast<double>(n), alpha - 1.0);
}

double EstimateSchedule::cumulative_bound(double n) const {
  if (n <= 0.0) return 0.0;
  return c * (1.0 + (std::pow(n, alpha) - 1.0) / alpha);
}

std::string_view to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kConstantAction: return "constant-action";
    case LearnerKind::kExploreThenCommit: return "explore-then-commit";
    case LearnerKind::kExponentialWeights: return "exponential-weights";
    case LearnerKind::kBoltzmannSynthesized: return "boltzmann-synthesized";
    case LearnerKind::kEpsilonMixedOptimal: return "epsilon-mixed-optimal";
  }
  return "unknown";
}

std::string_view to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::kFixedDirection: return "fixed-direction";
    case NoiseMode::kRandomDirection: return "random-direction";
    case NoiseMode::kAdversarialSign: return "adversarial-sign";
  }
  return "unknown";
}

std::optional<LearnerKind> parse_learner_kind(std::string_view name) {
  for (auto kind : {LearnerKind::kConstantAction, LearnerKind::kExploreThenCommit, LearnerKind::kExponentialWeights,
                    LearnerKind::kBoltzmannSynthesized, LearnerKind::kEpsilonMixedOptimal}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::optional<NoiseMode> parse_noise_mode(std::string_view name) {
  for (auto mode : {NoiseMode::kFixedDirection, NoiseMode::kRandomDirection, NoiseMode::kAdversarialSign}) {
    if (to_string(mode) == name) return mode;
  }
  return std::nullopt;
}

LearnerModel LearnerModel::constant_action(Action a) {
  LearnerModel m;
  m.kind = LearnerKind::kConstantAction;
  m.fixed_action = a;
  return m;
}

LearnerModel LearnerModel::explore_then_commit() {
  LearnerModel m;
  m.kind = LearnerKind::kExploreThenCommit;
  return m;
}

LearnerModel LearnerModel::exponential_weights(std::optional<double> learning_rate) {
  LearnerModel m;
  m.kind = LearnerKind::kExponentialWeights;
  m.learning_rate = learning_rate;
  return m;
}

LearnerModel LearnerModel::boltzmann_synthesized(double beta, EstimateSchedule schedule) {
  LearnerModel m;
  m.kind = LearnerKind::kBoltzmannSynthesized;
  m.beta = beta;
  m.schedule = schedule;
  return m;
}

LearnerModel LearnerModel::epsilon_mixed_optimal(EstimateSchedule schedule) {
  LearnerModel m;
  m.kind = LearnerKind::kEpsilonMixedOptimal;
  m.schedule = schedule;
  return m;
}

void LearnerModel::validate() const {
  const bool needs_schedule = kind == LearnerKind::kBoltzmannSynthesized || kind == LearnerKind::kEpsilonMixedOptimal;
  const bool needs_action = kind == LearnerKind::kConstantAction;
  if (needs_schedule != schedule.has_value()) {
    throw InvalidArgument(std::string(to_string(kind)) + (needs_schedule ? ": requires" : ": does not take") +
                          " an estimate schedule");
  }
  if (needs_action != fixed_action.has_value()) {
    throw InvalidArgument(std::string(to_string(kind)) + (needs_action ? ": requires" : ": does not take") +
                          " fixed_action");
  }
  if (learning_rate && kind != LearnerKind::kExponentialWeights) {
    throw InvalidArgument(std::string(to_string(kind)) + ": does not take a learning rate");
  }
  if (learning_rate && (!std::isfinite(*learning_rate) || *learning_rate < 0.0)) {
    throw InvalidArgument("exponential-weights: learning rate must be >= 0");
  }
  if (!std::isfinite(beta) || beta < 0.0) throw InvalidArgument("learner beta must be finite and >= 0");
  if (beta != 0.0 && kind != LearnerKind::kBoltzmannSynthesized) {
    throw InvalidArgument(std::string(to_string(kind)) + ": does not take beta");
  }
  if (schedule) schedule->validate();
}

namespace {

void perturb_row(std::span<const double> truth, std::span<double> out, double magnitude, NoiseMode mode, Rng& rng) {
  const std::size_t m = truth.size();
  const Action best = argmax(truth);
  switch (mode) {
    case NoiseMode::kFixedDirection:
      for (Action a = 0; a < m; ++a) out[a] = truth[a] + magnitude * (a == best ? -1.0 : 1.0);
      return;
    case NoiseMode::kRandomDirection:
      for (Action a = 0; a < m; ++a) out[a] = truth[a] + magnitude * rng.sign();
      return;
    case NoiseMode::kAdversarialSign: {
      std::vector<double> direction(m);
      for (double& d : direction) d = rng.sign();
      for (Action a = 0; a < m; ++a) out[a] = truth[a] + magnitude * direction[a];
      const Action top = argmax(std::span<const double>(out.data(), m));
      out[top] = truth[top] - magnitude;
      return;
    }
  }
}

}  // namespace

RewardTable synthesize_estimate(const RewardTable& truth, std::size_t count, const EstimateSchedule& schedule,
                                Rng& rng) {
  std::vector<double> out(truth.size());
  perturb_row(truth.values(), out, schedule.error_at(std::max<std::size_t>(count, 1)), schedule.noise_mode, rng);
  return RewardTable(std::move(out));
}

QTable synthesize_estimate(const QTable& truth, std::span<const std::size_t> counts,
                           const EstimateSchedule& schedule, Rng& rng) {
  if (counts.size() != truth.num_states()) throw InvalidArgument("synthesize_estimate: one count per state required");
  QTable out(truth.num_states(), truth.num_actions(), 0.0);
  for (State s = 0; s < truth.num_states(); ++s) {
    perturb_row(truth.row(s), out.row(s), schedule.error_at(std::max<std::size_t>(counts[s], 1)),
                schedule.noise_mode, rng);
  }
  return out;
}

Learner::Learner(LearnerModel model, QTable truth, std::size_t horizon)
    : model_(std::move(model)),
      truth_(std::move(truth)),
      cumulative_(truth_.num_states(), truth_.num_actions(), 0.0),
      observed_(truth_.num_states(), truth_.num_actions(), 0.0),
      seen_(truth_.num_states() * truth_.num_actions(), false) {
  model_.validate();
  if (model_.fixed_action && *model_.fixed_action >= truth_.num_actions()) {
    throw InvalidArgument("constant-action: fixed_action out of range");
  }
  for (State s = 0; s < truth_.num_states(); ++s) optimal_.push_back(argmax(truth_.row(s)));
  const double m = static_cast<double>(truth_.num_actions());
  learning_rate_ = model_.learning_rate.value_or(
      std::sqrt(8.0 * std::log(m) / static_cast<double>(std::max<std::size_t>(horizon, 1))));
}

PolicyTable Learner::policy(const InteractionHistory& history, Rng& noise_rng) {
  const std::size_t n_states = truth_.num_states();
  const std::size_t n_actions = truth_.num_actions();
  const std::size_t t = history.size() + 1;
  const BehaviorLog& log = history.behavior();
  PolicyTable out;
  out.reserve(n_states);
  switch (model_.kind) {
    case LearnerKind::kConstantAction:
      for (State s = 0; s < n_states; ++s) out.push_back(PolicyDist::point_mass(n_actions, *model_.fixed_action));
      break;
    case LearnerKind::kExploreThenCommit:
      for (State s = 0; s < n_states; ++s) {
        const auto counts = log.action_counts(s);
        const auto unplayed = std::find(counts.begin(), counts.end(), std::size_t{0});
        const Action a = unplayed != counts.end() ? static_cast<Action>(unplayed - counts.begin())
                                                  : argmax(observed_.row(s));
        out.push_back(PolicyDist::point_mass(n_actions, a));
      }
      break;
    case LearnerKind::kExponentialWeights:
      for (State s = 0; s < n_states; ++s) out.push_back(boltzmann_policy(cumulative_.row(s), learning_rate_));
      break;
    case LearnerKind::kBoltzmannSynthesized: {
      std::vector<std::size_t> counts(n_states);
      if (n_states == 1) {
        counts[0] = t;
      } else {
        for (State s = 0; s < n_states; ++s) counts[s] = log.state_visits(s) + 1;
      }
      last_estimate_ = synthesize_estimate(truth_, counts, *model_.schedule, noise_rng);
      for (State s = 0; s < n_states; ++s) out.push_back(boltzmann_policy(last_estimate_->row(s), model_.beta));
      break;
    }
    case LearnerKind::kEpsilonMixedOptimal: {
      const double eps = std::pow(static_cast<double>(t), model_.schedule->alpha - 1.0);
      for (State s = 0; s < n_states; ++s) {
        std::vector<double> p(n_actions, eps / static_cast<double>(n_actions));
        p[optimal_[s]] += 1.0 - eps;
        out.push_back(PolicyDist(std::move(p)));
      }
      break;
    }
  }
  return out;
}

void Learner::update(State s, Action a, double reward, const PolicyTable& /*played*/) {
  switch (model_.kind) {
    case LearnerKind::kExploreThenCommit:
      observed_.at(s, a) = reward;
      break;
    case LearnerKind::kExponentialWeights: {
      observed_.at(s, a) = reward;
      seen_[s * truth_.num_actions() + a] = true;
      double best_seen = reward;
      for (Action b = 0; b < truth_.num_actions(); ++b) {
        if (seen_[s * truth_.num_actions() + b]) best_seen = std::max(best_seen, observed_.at(s, b));
      }
      for (Action b = 0; b < truth_.num_actions(); ++b) {
        cumulative_.at(s, b) += seen_[s * truth_.num_actions() + b] ? observed_.at(s, b) : best_seen;
      }
      break;
    }
    default:
      break;
  }
}

Action learner_step(const LearnerModel& model, const InteractionHistory& history, State current_state,
                    const QTable& truth, Rng& rng, std::size_t horizon) {
  Learner learner(model, truth, horizon);
  if (model.kind == LearnerKind::kExponentialWeights || model.kind == LearnerKind::kExploreThenCommit) {
    InteractionHistory replay(history.behavior().num_states(), history.behavior().num_actions());
    Rng unused(0);
    for (std::size_t t = 1; t <= history.size(); ++t) {
      const State s = history.behavior().state(t);
      const Action a = history.behavior().action(t);
      const auto played = learner.policy(replay, unused);
      learner.update(s, a, history.reward(t), played);
      replay.record(s, a, history.reward(t));
    }
  }
  const auto policy = learner.policy(history, rng);
  return rng.categorical(policy.at(current_state).probs());
}

double measured_regret_stateless(const InteractionHistory& history, const RewardTable& truth) {
  if (history.size() == 0) throw InvalidArgument("measured_regret_stateless: empty history");
  const double best = truth[argmax(truth.values())];
  double regret = 0.0;
  for (Action a : history.behavior().actions()) regret += best - truth[a];
  return regret;
}

double measured_policy_regret(std::span<const PolicyTable> policy_seq, const Mdp& mdp, std::size_t horizon) {
  if (policy_seq.size() != horizon) {
    throw InvalidArgument("measured_policy_regret: expected " + std::to_string(horizon) + " policies, got " +
                          std::to_string(policy_seq.size()));
  }
  const auto rewards = expected_step_rewards(mdp, policy_seq);
  double achieved = 0.0;
  for (double r : rewards) achieved += r;
  return finite_horizon_optimal_return(mdp, horizon) - achieved;
}

}  // namespace prefwatch
