#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefwatch/history.hpp"
#include "prefwatch/mdp.hpp"
#include "prefwatch/rng.hpp"
#include "prefwatch/tables.hpp"

namespace prefwatch {

enum class NoiseMode {
  kFixedDirection,   ///< -1 on the true argmax action, +1 elsewhere
  kRandomDirection,  ///< independent random signs
  kAdversarialSign,  ///< random signs, then the estimate's argmax is pushed down
};

/// Convergence profile of a synthesized learner: the estimate used at visit
/// count n is off by exactly c * n^(alpha - 1) in sup norm.
struct EstimateSchedule {
  double c = 1.0;
  double alpha = 0.5;
  NoiseMode noise_mode = NoiseMode::kFixedDirection;

  void validate() const;
  /// Sup-norm estimation error at visit count n >= 1.
  double error_at(std::size_t n) const;
  /// f(n) = c * (1 + (n^alpha - 1) / alpha), which upper-bounds
  /// sum_{k<=n} error_at(k); f(0) = 0.
  double cumulative_bound(double n) const;
};

enum class LearnerKind {
  kConstantAction,
  kExploreThenCommit,
  kExponentialWeights,
  kBoltzmannSynthesized,
  kEpsilonMixedOptimal,
};

std::string_view to_string(LearnerKind kind);
std::string_view to_string(NoiseMode mode);
std::optional<LearnerKind> parse_learner_kind(std::string_view name);
std::optional<NoiseMode> parse_noise_mode(std::string_view name);

struct LearnerModel {
  LearnerKind kind = LearnerKind::kConstantAction;
  double beta = 0.0;
  std::optional<EstimateSchedule> schedule;
  std::optional<Action> fixed_action;
  /// Exponential-weights step size; defaults to sqrt(8 ln|A| / T).
  std::optional<double> learning_rate;

  static LearnerModel constant_action(Action a);
  static LearnerModel explore_then_commit();
  static LearnerModel exponential_weights(std::optional<double> learning_rate = std::nullopt);
  static LearnerModel boltzmann_synthesized(double beta, EstimateSchedule schedule);
  static LearnerModel epsilon_mixed_optimal(EstimateSchedule schedule);

  /// Throws InvalidArgument when parameters do not match the kind.
  void validate() const;
};

/// Perturbs `truth` by error_at(count) in a direction chosen by the schedule.
RewardTable synthesize_estimate(const RewardTable& truth, std::size_t count, const EstimateSchedule& schedule,
                                Rng& rng);

/// Row-wise version; row s uses visit count counts[s] (values below 1 are
/// treated as 1).
QTable synthesize_estimate(const QTable& truth, std::span<const std::size_t> counts,
                           const EstimateSchedule& schedule, Rng& rng);

/// A learner whose state is owned by one simulation loop.
///
/// `truth` is R* as a one-row table (single state) or Q* (stateful). Only the
/// synthesized kinds read it; the others learn from observed rewards.
class Learner {
 public:
  Learner(LearnerModel model, QTable truth, std::size_t horizon);

  /// Policy p_t for every state at step t = history.size() + 1.
  PolicyTable policy(const InteractionHistory& history, Rng& noise_rng);

  /// Incorporates the outcome of the step just played under `played`.
  void update(State s, Action a, double reward, const PolicyTable& played);

  /// The estimate behind the most recent Boltzmann policy, if any.
  const std::optional<QTable>& last_estimate() const noexcept { return last_estimate_; }
  const LearnerModel& model() const noexcept { return model_; }

 private:
  LearnerModel model_;
  QTable truth_;
  std::vector<Action> optimal_;
  double learning_rate_ = 0.0;
  QTable cumulative_;  // exponential weights: summed per-round reward estimates
  QTable observed_;    // last observed reward per pair
  std::vector<bool> seen_;
  std::optional<QTable> last_estimate_;
};

/// Chooses a_t for the learner given the full interaction so far. Replays the
/// learner from the history, then draws estimate noise and the action from `rng`.
Action learner_step(const LearnerModel& model, const InteractionHistory& history, State current_state,
                    const QTable& truth, Rng& rng, std::size_t horizon);

/// max_a sum_t R*(a) - sum_t R*(a_t) over the realized actions.
double measured_regret_stateless(const InteractionHistory& history, const RewardTable& truth);

/// Optimal finite-horizon return minus the exact expected return of the
/// time-indexed policy sequence (one PolicyTable per step).
double measured_policy_regret(std::span<const PolicyTable> policy_seq, const Mdp& mdp, std::size_t horizon);

}  // namespace prefwatch
