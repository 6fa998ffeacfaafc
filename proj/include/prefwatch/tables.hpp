#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace prefwatch {

using Action = std::size_t;
using State = std::size_t;

/// Tolerance used when validating sums and probability vectors at construction.
inline constexpr double kConstructionTolerance = 1e-9;

/// Reward vector over actions for the single-state setting.
///
/// When `sigma` is present the coordinates sum to it (checked at construction).
class RewardTable {
 public:
  RewardTable() = default;
  explicit RewardTable(std::vector<double> values, std::optional<double> sigma = std::nullopt);

  /// Translates `values` so the coordinates sum to `sigma`.
  static RewardTable normalized(std::span<const double> values, double sigma);
  static RewardTable zeros(std::size_t action_count);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](Action a) const { return values_[a]; }
  std::span<const double> values() const noexcept { return values_; }
  std::optional<double> sigma() const noexcept { return sigma_; }

  friend bool operator==(const RewardTable&, const RewardTable&) = default;

 private:
  std::vector<double> values_;
  std::optional<double> sigma_;
};

/// Row-major table over (state, action); rows may carry a per-state sum target.
class QTable {
 public:
  QTable() = default;
  QTable(std::size_t num_states, std::size_t num_actions, double fill = 0.0);
  QTable(std::size_t num_states, std::size_t num_actions, std::vector<double> values,
         std::optional<std::vector<double>> sigma = std::nullopt);

  /// Translates every row so that row s sums to sigma[s].
  static QTable normalized(const QTable& table, std::span<const double> sigma);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  double at(State s, Action a) const { return values_[s * num_actions_ + a]; }
  double& at(State s, Action a) { return values_[s * num_actions_ + a]; }
  std::span<const double> row(State s) const {
    return std::span<const double>(values_).subspan(s * num_actions_, num_actions_);
  }
  std::span<double> row(State s) {
    return std::span<double>(values_).subspan(s * num_actions_, num_actions_);
  }
  std::span<const double> values() const noexcept { return values_; }
  const std::optional<std::vector<double>>& sigma() const noexcept { return sigma_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> values_;
  std::optional<std::vector<double>> sigma_;
};

/// Probability vector over actions. Entries are validated to within
/// kConstructionTolerance and then renormalized once.
class PolicyDist {
 public:
  PolicyDist() = default;
  explicit PolicyDist(std::vector<double> probs);

  static PolicyDist uniform(std::size_t action_count);
  static PolicyDist point_mass(std::size_t action_count, Action a);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](Action a) const { return probs_[a]; }
  std::span<const double> probs() const noexcept { return probs_; }

 private:
  std::vector<double> probs_;
};

/// One action distribution per state; the single-state setting uses one row.
using PolicyTable = std::vector<PolicyDist>;

/// Index of the largest entry; ties go to the lowest index.
Action argmax(std::span<const double> values);

/// Reward-free estimates of a reward table may be built from arbitrary
/// vectors; this checks finiteness and throws InvalidArgument otherwise.
void require_finite(std::span<const double> values, const char* what);

}  // namespace prefwatch
