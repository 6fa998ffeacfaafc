#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "prefwatch/history.hpp"
#include "prefwatch/mdp.hpp"
#include "prefwatch/predictors.hpp"
#include "prefwatch/tables.hpp"

namespace prefwatch {

/// Returned by kl_divergence when p puts mass where q has none.
inline constexpr double kInfiniteDivergence = std::numeric_limits<double>::infinity();

/// KL(p || q) in nats, with 0 log 0 = 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const PolicyDist& p, const PolicyDist& q);
/// Half the l1 distance.
double tv_distance(std::span<const double> p, std::span<const double> q);
double tv_distance(const PolicyDist& p, const PolicyDist& q);

double l1_distance(std::span<const double> x, std::span<const double> y);
double l2_distance(std::span<const double> x, std::span<const double> y);
double linf_distance(std::span<const double> x, std::span<const double> y);

enum class WeightRule { kSqrtVisitFrequency, kUniform, kCustom };

/// State weights v_t(s) for stateful measures.
struct WeightingScheme {
  WeightRule rule = WeightRule::kSqrtVisitFrequency;
  std::vector<double> custom;

  /// v_t(s) given N_{t-1}(s). The visit-frequency rule is sqrt(N_{t-1}(s) / (t-1))
  /// and is 0 at t = 1.
  double weight(State s, std::size_t t, std::size_t prior_visits) const;
};

enum class MeasureKind { kBr, kKlbp, kL2, kLinf };
std::string_view to_string(MeasureKind kind);
std::optional<MeasureKind> parse_measure_kind(std::string_view name);

enum class Norm { kL2, kLinf };

/// max_a R*(a) - R*(argmax R_t).
double br_gap(const RewardTable& truth, const RewardTable& prediction);
double d_br_stateless(const RewardTable& truth, std::span<const RewardTable> trace);

/// Per-step contributions to the stateful best-response distance: expected
/// reward of the optimal time-indexed policy minus that of the greedy
/// policies of the predictions (absent rows act with action 0).
std::vector<double> br_stateful_increments(const Mdp& mdp, std::span<const StatefulPrediction> trace);
double d_br_stateful(const Mdp& mdp, std::span<const StatefulPrediction> trace, std::size_t horizon);

std::vector<double> klbp_increments(const RewardTable& truth, std::span<const RewardTable> trace, double beta);
double d_klbp(const RewardTable& truth, std::span<const RewardTable> trace, double beta);

/// Visit-weighted KL between Boltzmann policies; absent rows contribute 0.
/// `log` must cover at least the first trace.size() - 1 steps.
std::vector<double> klbp_increments(const QTable& truth, std::span<const StatefulPrediction> trace, double beta,
                                    const WeightingScheme& weights, const BehaviorLog& log);
double d_klbp(const QTable& truth, std::span<const StatefulPrediction> trace, double beta,
              const WeightingScheme& weights, const BehaviorLog& log);

std::vector<double> norm_increments(const RewardTable& truth, std::span<const RewardTable> trace, Norm which);
double norm_distance(const RewardTable& truth, std::span<const RewardTable> trace, Norm which);

/// Visit-weighted norm, counting state s only from t_e(s) onward and only
/// where the prediction row is present.
std::vector<double> norm_increments(const QTable& truth, std::span<const StatefulPrediction> trace, Norm which,
                                    const WeightingScheme& weights, const BehaviorLog& log);
double norm_distance(const QTable& truth, std::span<const StatefulPrediction> trace, Norm which,
                     const WeightingScheme& weights, const BehaviorLog& log);

}  // namespace prefwatch
