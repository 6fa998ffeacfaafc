#include "prefwatch/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prefwatch/errors.hpp"

namespace prefwatch {

std::string_view to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::kBestResponse: return "best-response";
    case PredictorKind::kAveraging: return "averaging";
    case PredictorKind::kConstantZero: return "constant-zero";
  }
  return "unknown";
}

std::optional<PredictorKind> parse_predictor_kind(std::string_view name) {
  for (auto kind : {PredictorKind::kBestResponse, PredictorKind::kAveraging, PredictorKind::kConstantZero}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

RewardTable best_response_predictor(const BehaviorLog& before_t) {
  std::vector<double> r(before_t.num_actions(), 0.0);
  r[before_t.empty() ? 0 : before_t.actions().back()] = 1.0;
  return RewardTable(std::move(r));
}

StatefulPrediction best_response_predictor_stateful(const BehaviorLog& before_t) {
  QTable q(before_t.num_states(), before_t.num_actions(), 0.0);
  for (State s = 0; s < before_t.num_states(); ++s) q.at(s, before_t.last_action(s).value_or(0)) = 1.0;
  return {std::move(q), std::vector<bool>(before_t.num_states(), true)};
}

namespace {

// (1/beta) * (log p(a) - mean log p) + sigma / m, with p = counts / total.
void averaging_row(std::span<const std::size_t> counts, double beta, double sigma, std::span<double> out) {
  const double m = static_cast<double>(counts.size());
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  double mean_log = 0.0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    out[a] = std::log(static_cast<double>(counts[a]) / total);
    mean_log += out[a];
  }
  mean_log /= m;
  for (double& v : out) v = (v - mean_log) / beta + sigma / m;
}

void require_beta(double beta) {
  if (!std::isfinite(beta) || beta <= 0.0) throw InvalidArgument("averaging predictor: beta must be > 0");
}

}  // namespace

RewardTable averaging_predictor_stateless(std::span<const std::size_t> counts, double beta, double sigma) {
  require_beta(beta);
  if (counts.empty()) throw InvalidArgument("averaging predictor: no actions");
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a] == 0) throw NotYetExplored("averaging predictor: action " + std::to_string(a) + " never observed");
  }
  std::vector<double> r(counts.size());
  averaging_row(counts, beta, sigma, r);
  // Exact sigma-normalization absorbs the rounding in the closed form.
  return RewardTable::normalized(r, sigma);
}

StatefulPrediction averaging_predictor_stateful(std::span<const std::size_t> counts, std::size_t num_actions,
                                                double beta, std::span<const double> sigma) {
  require_beta(beta);
  if (num_actions == 0 || counts.size() % num_actions != 0) throw InvalidArgument("averaging predictor: bad count shape");
  const std::size_t n_states = counts.size() / num_actions;
  if (sigma.size() != n_states) throw InvalidArgument("averaging predictor: one sigma per state required");
  QTable q(n_states, num_actions, 0.0);
  std::vector<bool> present(n_states, false);
  for (State s = 0; s < n_states; ++s) {
    const auto row = counts.subspan(s * num_actions, num_actions);
    const bool explored = std::all_of(row.begin(), row.end(), [](std::size_t c) { return c > 0; });
    if (explored) {
      averaging_row(row, beta, sigma[s], q.row(s));
      present[s] = true;
    } else {
      for (double& v : q.row(s)) v = sigma[s] / static_cast<double>(num_actions);
    }
  }
  return {QTable::normalized(q, sigma), std::move(present)};
}

Predictor::Predictor(PredictorKind kind, double beta, double sigma) : kind_(kind), beta_(beta), sigma_(sigma) {
  if (kind_ == PredictorKind::kAveraging) require_beta(beta_);
  if (!std::isfinite(sigma_)) throw InvalidArgument("predictor sigma must be finite");
}

RewardTable Predictor::predict(const BehaviorLog& before_t) const {
  switch (kind_) {
    case PredictorKind::kBestResponse:
      return best_response_predictor(before_t);
    case PredictorKind::kConstantZero:
      return RewardTable::zeros(before_t.num_actions());
    case PredictorKind::kAveraging: {
      const auto counts = before_t.action_counts(0);
      if (!before_t.exploration_time(0)) {
        return RewardTable(std::vector<double>(before_t.num_actions(),
                                               sigma_ / static_cast<double>(before_t.num_actions())));
      }
      return averaging_predictor_stateless(counts, beta_, sigma_);
    }
  }
  throw InvalidArgument("unknown predictor kind");
}

StatefulPrediction Predictor::predict_stateful(const BehaviorLog& before_t) const {
  const std::size_t n_states = before_t.num_states();
  switch (kind_) {
    case PredictorKind::kBestResponse:
      return best_response_predictor_stateful(before_t);
    case PredictorKind::kConstantZero:
      return {QTable(n_states, before_t.num_actions(), 0.0), std::vector<bool>(n_states, true)};
    case PredictorKind::kAveraging: {
      std::vector<std::size_t> counts;
      counts.reserve(n_states * before_t.num_actions());
      for (State s = 0; s < n_states; ++s) {
        const auto row = before_t.action_counts(s);
        counts.insert(counts.end(), row.begin(), row.end());
      }
      return averaging_predictor_stateful(counts, before_t.num_actions(), beta_,
                                          std::vector<double>(n_states, sigma_));
    }
  }
  throw InvalidArgument("unknown predictor kind");
}

PredictionTrace predict_trace(const Predictor& predictor, const BehaviorLog& log, bool stateful) {
  PredictionTrace trace;
  trace.kind = predictor.kind();
  BehaviorLog prefix(log.num_states(), log.num_actions());
  for (std::size_t t = 1; t <= log.size(); ++t) {
    if (stateful) {
      trace.tables.push_back(predictor.predict_stateful(prefix));
    } else {
      trace.rewards.push_back(predictor.predict(prefix));
    }
    prefix.record(log.state(t), log.action(t));
  }
  return trace;
}

RewardTable reduce_perstep_to_final(std::span<const RewardTable> trace, FinalReduction mode, Rng& rng) {
  if (trace.empty()) throw InvalidArgument("reduce_perstep_to_final: empty trace");
  const std::size_t m = trace.front().size();
  switch (mode) {
    case FinalReduction::kAverage: {
      std::vector<double> mean(m, 0.0);
      for (const auto& r : trace) {
        if (r.size() != m) throw InvalidArgument("reduce_perstep_to_final: inconsistent action count");
        for (Action a = 0; a < m; ++a) mean[a] += r[a];
      }
      for (double& v : mean) v /= static_cast<double>(trace.size());
      return RewardTable(std::move(mean));
    }
    case FinalReduction::kSample:
      return trace[rng.below(trace.size())];
    case FinalReduction::kBrMajority: {
      std::vector<std::size_t> votes(m, 0);
      for (const auto& r : trace) ++votes.at(argmax(r.values()));
      std::vector<double> as_double(votes.begin(), votes.end());
      std::vector<double> indicator(m, 0.0);
      indicator[argmax(as_double)] = 1.0;
      return RewardTable(std::move(indicator));
    }
  }
  throw InvalidArgument("unknown reduction mode");
}

std::vector<RewardTable> reduce_final_to_perstep(const FinalPredictor& final_predictor, const BehaviorLog& history) {
  std::vector<RewardTable> out;
  out.reserve(history.size());
  BehaviorLog prefix(history.num_states(), history.num_actions());
  for (std::size_t t = 1; t <= history.size(); ++t) {
    out.push_back(final_predictor(prefix));
    prefix.record(history.state(t), history.action(t));
  }
  return out;
}

}  // namespace prefwatch
