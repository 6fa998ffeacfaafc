#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "prefwatch/history.hpp"
#include "prefwatch/rng.hpp"
#include "prefwatch/tables.hpp"

namespace prefwatch {

enum class PredictorKind { kBestResponse, kAveraging, kConstantZero };

std::string_view to_string(PredictorKind kind);
std::optional<PredictorKind> parse_predictor_kind(std::string_view name);

/// Stateful prediction at one step. Rows whose state has not been explored
/// yet are marked absent and excluded from weighted measures.
struct StatefulPrediction {
  QTable values;
  std::vector<bool> present;
};

/// Per-step predictions R_1..R_T (single state) or Q_1..Q_T. The entry for
/// step t depends only on behavior strictly before t.
struct PredictionTrace {
  PredictorKind kind = PredictorKind::kBestResponse;
  std::vector<RewardTable> rewards;
  std::vector<StatefulPrediction> tables;

  bool stateful() const noexcept { return !tables.empty(); }
  std::size_t size() const noexcept { return stateful() ? tables.size() : rewards.size(); }
};

/// Indicator reward on the previous action (action 0 at t = 1).
RewardTable best_response_predictor(const BehaviorLog& before_t);

/// Per-state indicator on the last action taken in that state; action 0 in
/// states never visited. All rows are present.
StatefulPrediction best_response_predictor_stateful(const BehaviorLog& before_t);

/// sigma-normalized inverse of the Boltzmann map at the empirical action
/// frequencies. Throws NotYetExplored if any count is zero.
RewardTable averaging_predictor_stateless(std::span<const std::size_t> counts, double beta, double sigma);

/// Row-wise averaging prediction from per-state action counts (row-major
/// [state][action]). Rows with a zero count are absent and filled with
/// sigma[s] / |A|.
StatefulPrediction averaging_predictor_stateful(std::span<const std::size_t> counts, std::size_t num_actions,
                                                double beta, std::span<const double> sigma);

/// Prediction strategy applied step by step by the simulation loop.
class Predictor {
 public:
  Predictor(PredictorKind kind, double beta, double sigma);

  PredictorKind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  double sigma() const noexcept { return sigma_; }

  /// Single-state prediction for step before_t.size() + 1. The averaging
  /// strategy emits the uniform sigma-normalized table until every action has
  /// been seen.
  RewardTable predict(const BehaviorLog& before_t) const;
  StatefulPrediction predict_stateful(const BehaviorLog& before_t) const;

 private:
  PredictorKind kind_;
  double beta_;
  double sigma_;
};

/// Runs a predictor over every prefix of a behavior log.
PredictionTrace predict_trace(const Predictor& predictor, const BehaviorLog& log, bool stateful);

enum class FinalReduction { kAverage, kSample, kBrMajority };

/// Collapses per-step predictions into one final reward table.
RewardTable reduce_perstep_to_final(std::span<const RewardTable> trace, FinalReduction mode, Rng& rng);

using FinalPredictor = std::function<RewardTable(const BehaviorLog& prefix)>;

/// Step t of the result is `final_predictor` applied to the strict prefix before t.
std::vector<RewardTable> reduce_final_to_perstep(const FinalPredictor& final_predictor, const BehaviorLog& history);

}  // namespace prefwatch
