#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "prefwatch/history.hpp"
#include "prefwatch/tables.hpp"

namespace prefwatch {

struct ExperimentConfig;

/// Azuma-Hoeffding radius for the empirical action frequencies at step t:
/// sqrt(2 log(2 |S| |A| (T-1) / eps) / n), where n = t - 1 in the single-state
/// case and n = N_{t-1}(s) when `visit_count` is given.
double concentration_radius(std::size_t t, std::size_t action_count, std::size_t state_count, std::size_t horizon,
                            double epsilon, std::optional<std::size_t> visit_count = std::nullopt);

/// min_a min(p_t(a), p*(a)) with p_t the empirical frequencies; NaN when no
/// action has been observed.
double kappa(std::span<const std::size_t> counts, const PolicyDist& target);

/// Inputs to the cumulative l-infinity bound of the averaging strategy.
/// Single-state bounds use state_count = 1 and leave prior_visits empty.
struct BoundInputs {
  std::size_t horizon = 0;
  double epsilon = 0.1;
  double beta = 1.0;
  std::size_t action_count = 0;
  std::size_t state_count = 1;
  /// kappa[s][t-1] = kappa_t(s); NaN where undefined.
  std::vector<std::vector<double>> kappa;
  /// prior_visits[s][t-1] = N_{t-1}(s). Stateful bounds only.
  std::vector<std::vector<std::size_t>> prior_visits;
  /// t_e(s); states that were never fully explored contribute nothing.
  std::vector<std::optional<std::size_t>> exploration_time;
  /// Learner convergence profile f.
  std::function<double(double)> f;
};

struct BoundTerms {
  double concentration = 0.0;  ///< predictor-learner term
  double learner = 0.0;        ///< learner-oracle term
  double total() const noexcept { return concentration + learner; }
};

/// Right-hand side contributions of each step t = 1..T.
std::vector<BoundTerms> linfty_bound_increments(const BoundInputs& inputs, bool stateful);

/// Right-hand side of the cumulative l-infinity guarantee, summed over
/// t >= t_e (per state in the stateful form).
BoundTerms linfty_bound(const BoundInputs& inputs, bool stateful);

/// True iff |p_t(a|s) - pbar_t(a|s)| < scale * radius for every visited state,
/// action and t in [2, T], where pbar averages the learner's actual policies
/// at the earlier visits. `policies[t-1]` is the learner's policy table at step t.
bool azuma_covered(const BehaviorLog& log, std::span<const PolicyTable> policies, double epsilon,
                   double radius_scale = 1.0);

struct CoverageResult {
  std::size_t covered = 0;
  std::size_t seeds = 0;
  double fraction() const noexcept { return seeds == 0 ? 0.0 : static_cast<double>(covered) / seeds; }
};

/// Fraction of seeds 0..num_seeds-1 whose run satisfies azuma_covered at the
/// scenario's epsilon. Requires a Boltzmann learner.
CoverageResult azuma_coverage(const ExperimentConfig& scenario, std::size_t num_seeds, double radius_scale = 1.0,
                              std::size_t parallelism = 1);

/// The two rewards a constant learner on action 0 is optimal for:
/// (1/|A|)(1,...,1) and (1,0,...,0).
std::pair<RewardTable, RewardTable> adversarial_pair(std::size_t action_count);

/// (T/2) * ||R1 - R2||_2 for the adversarial pair.
double impossibility_lower_bound(std::size_t action_count, std::size_t horizon);

struct ImpossibilityCertificate {
  double distance_first = 0.0;   ///< D_l2(R1, trace)
  double distance_second = 0.0;  ///< D_l2(R2, trace)
  double lower_bound = 0.0;
  double worst() const noexcept { return std::max(distance_first, distance_second); }
  bool holds() const noexcept { return worst() >= lower_bound; }
};

/// Evaluates both members of the adversarial pair against a trace produced
/// while watching the constant learner.
ImpossibilityCertificate certify_impossibility(std::span<const RewardTable> trace);

/// (1/beta) log((1 + m delta) / (1 - m delta)); empty when m delta >= 1.
std::optional<double> kl_to_br_perstep_bound(double delta, std::size_t action_count, double beta);

}  // namespace prefwatch
