#include "prefwatch/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "prefwatch/env.hpp"
#include "prefwatch/errors.hpp"

namespace prefwatch {
namespace {

void require_same_size(std::span<const double> x, std::span<const double> y, const char* what) {
  if (x.size() != y.size()) throw InvalidArgument(std::string(what) + ": dimension mismatch");
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Walks the log alongside the trace, handing each step its prior visit counts.
template <typename Fn>
void for_each_step_with_counts(std::size_t steps, std::size_t num_states, const BehaviorLog& log, Fn&& fn) {
  if (steps > 0 && log.size() + 1 < steps) throw InvalidArgument("stateful measure: behavior log too short");
  std::vector<std::size_t> prior(num_states, 0);
  for (std::size_t t = 1; t <= steps; ++t) {
    fn(t, std::span<const std::size_t>(prior));
    if (t <= log.size()) ++prior.at(log.state(t));
  }
}

}  // namespace

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  require_same_size(p, q, "kl_divergence");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInfiniteDivergence;
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(kl, 0.0);
}

double kl_divergence(const PolicyDist& p, const PolicyDist& q) { return kl_divergence(p.probs(), q.probs()); }

double tv_distance(std::span<const double> p, std::span<const double> q) { return 0.5 * l1_distance(p, q); }

double tv_distance(const PolicyDist& p, const PolicyDist& q) { return tv_distance(p.probs(), q.probs()); }

double l1_distance(std::span<const double> x, std::span<const double> y) {
  require_same_size(x, y, "l1_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d += std::abs(x[i] - y[i]);
  return d;
}

double l2_distance(std::span<const double> x, std::span<const double> y) {
  require_same_size(x, y, "l2_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(d);
}

double linf_distance(std::span<const double> x, std::span<const double> y) {
  require_same_size(x, y, "linf_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

double WeightingScheme::weight(State s, std::size_t t, std::size_t prior_visits) const {
  switch (rule) {
    case WeightRule::kSqrtVisitFrequency:
      if (t <= 1) return 0.0;
      return std::sqrt(static_cast<double>(prior_visits) / static_cast<double>(t - 1));
    case WeightRule::kUniform:
      return 1.0;
    case WeightRule::kCustom:
      if (s >= custom.size()) throw InvalidArgument("WeightingScheme: no custom weight for state " + std::to_string(s));
      if (custom[s] < 0.0) throw InvalidArgument("WeightingScheme: weights must be >= 0");
      return custom[s];
  }
  return 0.0;
}

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::kBr: return "br";
    case MeasureKind::kKlbp: return "klbp";
    case MeasureKind::kL2: return "l2";
    case MeasureKind::kLinf: return "linf";
  }
  return "unknown";
}

std::optional<MeasureKind> parse_measure_kind(std::string_view name) {
  for (auto kind : {MeasureKind::kBr, MeasureKind::kKlbp, MeasureKind::kL2, MeasureKind::kLinf}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

double br_gap(const RewardTable& truth, const RewardTable& prediction) {
  require_same_size(truth.values(), prediction.values(), "br_gap");
  return truth[argmax(truth.values())] - truth[argmax(prediction.values())];
}

double d_br_stateless(const RewardTable& truth, std::span<const RewardTable> trace) {
  if (trace.empty()) throw InvalidArgument("d_br_stateless: empty trace");
  double d = 0.0;
  for (const auto& r : trace) d += br_gap(truth, r);
  return d;
}

std::vector<double> br_stateful_increments(const Mdp& mdp, std::span<const StatefulPrediction> trace) {
  if (trace.empty()) throw InvalidArgument("d_br_stateful: empty trace");
  std::vector<PolicyTable> greedy;
  greedy.reserve(trace.size());
  for (const auto& p : trace) {
    if (p.values.num_states() != mdp.num_states() || p.values.num_actions() != mdp.num_actions()) {
      throw InvalidArgument("d_br_stateful: prediction shape does not match the MDP");
    }
    PolicyTable policy;
    policy.reserve(mdp.num_states());
    for (State s = 0; s < mdp.num_states(); ++s) {
      const Action a = p.present.at(s) ? argmax(p.values.row(s)) : 0;
      policy.push_back(PolicyDist::point_mass(mdp.num_actions(), a));
    }
    greedy.push_back(std::move(policy));
  }
  const auto achieved = expected_step_rewards(mdp, greedy);
  auto out = optimal_step_rewards(mdp, trace.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] -= achieved[t];
  return out;
}

double d_br_stateful(const Mdp& mdp, std::span<const StatefulPrediction> trace, std::size_t horizon) {
  if (trace.size() != horizon) throw InvalidArgument("d_br_stateful: trace length must equal horizon");
  return sum(br_stateful_increments(mdp, trace));
}

std::vector<double> klbp_increments(const RewardTable& truth, std::span<const RewardTable> trace, double beta) {
  const auto target = boltzmann_policy(truth.values(), beta);
  std::vector<double> out;
  out.reserve(trace.size());
  for (const auto& r : trace) out.push_back(kl_divergence(boltzmann_policy(r.values(), beta), target));
  return out;
}

double d_klbp(const RewardTable& truth, std::span<const RewardTable> trace, double beta) {
  return sum(klbp_increments(truth, trace, beta));
}

std::vector<double> klbp_increments(const QTable& truth, std::span<const StatefulPrediction> trace, double beta,
                                    const WeightingScheme& weights, const BehaviorLog& log) {
  const auto target = boltzmann_policy(truth, beta);
  std::vector<double> out(trace.size(), 0.0);
  for_each_step_with_counts(trace.size(), truth.num_states(), log,
                            [&](std::size_t t, std::span<const std::size_t> prior) {
                              const auto& p = trace[t - 1];
                              double step = 0.0;
                              for (State s = 0; s < truth.num_states(); ++s) {
                                if (!p.present.at(s)) continue;
                                const double v = weights.weight(s, t, prior[s]);
                                if (v == 0.0) continue;
                                step += v * kl_divergence(boltzmann_policy(p.values.row(s), beta), target[s]);
                              }
                              out[t - 1] = step;
                            });
  return out;
}

double d_klbp(const QTable& truth, std::span<const StatefulPrediction> trace, double beta,
              const WeightingScheme& weights, const BehaviorLog& log) {
  return sum(klbp_increments(truth, trace, beta, weights, log));
}

std::vector<double> norm_increments(const RewardTable& truth, std::span<const RewardTable> trace, Norm which) {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const auto& r : trace) {
    out.push_back(which == Norm::kL2 ? l2_distance(truth.values(), r.values())
                                     : linf_distance(truth.values(), r.values()));
  }
  return out;
}

double norm_distance(const RewardTable& truth, std::span<const RewardTable> trace, Norm which) {
  return sum(norm_increments(truth, trace, which));
}

std::vector<double> norm_increments(const QTable& truth, std::span<const StatefulPrediction> trace, Norm which,
                                    const WeightingScheme& weights, const BehaviorLog& log) {
  std::vector<double> out(trace.size(), 0.0);
  for_each_step_with_counts(trace.size(), truth.num_states(), log,
                            [&](std::size_t t, std::span<const std::size_t> prior) {
                              const auto& p = trace[t - 1];
                              double step = 0.0;
                              for (State s = 0; s < truth.num_states(); ++s) {
                                const auto te = log.exploration_time(s);
                                if (!p.present.at(s) || !te || t < *te) continue;
                                const double v = weights.weight(s, t, prior[s]);
                                if (v == 0.0) continue;
                                const double d = which == Norm::kL2 ? l2_distance(truth.row(s), p.values.row(s))
                                                                    : linf_distance(truth.row(s), p.values.row(s));
                                step += v * d;
                              }
                              out[t - 1] = step;
                            });
  return out;
}

double norm_distance(const QTable& truth, std::span<const StatefulPrediction> trace, Norm which,
                     const WeightingScheme& weights, const BehaviorLog& log) {
  return sum(norm_increments(truth, trace, which, weights, log));
}

}  // namespace prefwatch
