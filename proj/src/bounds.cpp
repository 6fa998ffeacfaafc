#include "prefwatch/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "prefwatch/errors.hpp"
#include "prefwatch/measures.hpp"

namespace prefwatch {

double concentration_radius(std::size_t t, std::size_t action_count, std::size_t state_count, std::size_t horizon,
                            double epsilon, std::optional<std::size_t> visit_count) {
  if (t < 2) throw InvalidArgument("concentration_radius: t must be >= 2");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("concentration_radius: epsilon must lie in (0,1)");
  if (horizon < 2 || action_count == 0 || state_count == 0) throw InvalidArgument("concentration_radius: bad sizes");
  const double n = static_cast<double>(visit_count.value_or(t - 1));
  if (n <= 0.0) throw InvalidArgument("concentration_radius: visit count must be positive");
  const double union_size = 2.0 * static_cast<double>(state_count) * static_cast<double>(action_count) *
                            static_cast<double>(horizon - 1);
  return std::sqrt(2.0 * std::log(union_size / epsilon) / n);
}

double kappa(std::span<const std::size_t> counts, const PolicyDist& target) {
  if (counts.size() != target.size()) throw InvalidArgument("kappa: dimension mismatch");
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  if (total == 0.0) return std::numeric_limits<double>::quiet_NaN();
  double k = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < counts.size(); ++a) {
    k = std::min(k, std::min(static_cast<double>(counts[a]) / total, target[a]));
  }
  return k;
}

std::vector<BoundTerms> linfty_bound_increments(const BoundInputs& in, bool stateful) {
  if (!in.f) throw InvalidArgument("linfty_bound: learner profile f is required");
  if (!(in.beta > 0.0)) throw InvalidArgument("linfty_bound: beta must be > 0");
  if (!stateful && in.state_count != 1) throw InvalidArgument("linfty_bound: single-state form needs state_count = 1");
  if (in.kappa.size() != in.state_count || in.exploration_time.size() != in.state_count) {
    throw InvalidArgument("linfty_bound: per-state inputs have wrong length");
  }
  if (stateful && in.prior_visits.size() != in.state_count) {
    throw InvalidArgument("linfty_bound: stateful form needs prior visit counts");
  }
  std::vector<BoundTerms> out(in.horizon);
  for (State s = 0; s < in.state_count; ++s) {
    const auto te = in.exploration_time[s];
    if (!te) continue;
    if (*te > in.horizon + 1) throw InvalidArgument("linfty_bound: exploration time beyond horizon");
    for (std::size_t t = std::max<std::size_t>(*te, 2); t <= in.horizon; ++t) {
      const double k = in.kappa[s].at(t - 1);
      if (!(k > 0.0)) {
        throw InvalidArgument("linfty_bound: kappa undefined at t=" + std::to_string(t) + ", s=" + std::to_string(s));
      }
      const double elapsed = static_cast<double>(t - 1);
      const double visits = stateful ? static_cast<double>(in.prior_visits[s].at(t - 1)) : elapsed;
      // sqrt(N / (t-1)) times the per-visit radius collapses to the (t-1) form.
      const double radius = concentration_radius(t, in.action_count, in.state_count, in.horizon, in.epsilon);
      out[t - 1].concentration += (2.0 / in.beta) * radius / k;
      out[t - 1].learner += in.f(visits) / std::sqrt(elapsed * visits) / k;
    }
  }
  return out;
}

BoundTerms linfty_bound(const BoundInputs& inputs, bool stateful) {
  BoundTerms total;
  for (const auto& step : linfty_bound_increments(inputs, stateful)) {
    total.concentration += step.concentration;
    total.learner += step.learner;
  }
  return total;
}

bool azuma_covered(const BehaviorLog& log, std::span<const PolicyTable> policies, double epsilon,
                   double radius_scale) {
  const std::size_t horizon = log.size();
  const std::size_t n_states = log.num_states();
  const std::size_t n_actions = log.num_actions();
  if (policies.size() < horizon) throw InvalidArgument("azuma_covered: one policy per step required");
  if (horizon < 2) return true;
  // Running sums of the learner's own probabilities at each visit.
  std::vector<double> policy_sum(n_states * n_actions, 0.0);
  std::vector<std::size_t> hits(n_states * n_actions, 0);
  std::vector<std::size_t> visits(n_states, 0);
  for (std::size_t t = 2; t <= horizon; ++t) {
    const State prev_s = log.state(t - 1);
    const Action prev_a = log.action(t - 1);
    const auto& prev_policy = policies[t - 2].at(prev_s);
    ++visits[prev_s];
    ++hits[prev_s * n_actions + prev_a];
    for (Action a = 0; a < n_actions; ++a) policy_sum[prev_s * n_actions + a] += prev_policy[a];
    for (State s = 0; s < n_states; ++s) {
      if (visits[s] == 0) continue;
      const double n = static_cast<double>(visits[s]);
      const double radius =
          radius_scale * concentration_radius(t, n_actions, n_states, horizon, epsilon,
                                              n_states == 1 ? std::nullopt : std::optional<std::size_t>(visits[s]));
      for (Action a = 0; a < n_actions; ++a) {
        const double deviation =
            std::abs(static_cast<double>(hits[s * n_actions + a]) - policy_sum[s * n_actions + a]) / n;
        if (!(deviation < radius)) return false;
      }
    }
  }
  return true;
}

std::pair<RewardTable, RewardTable> adversarial_pair(std::size_t action_count) {
  if (action_count < 2) throw InvalidArgument("adversarial_pair: need at least two actions");
  std::vector<double> flat(action_count, 1.0 / static_cast<double>(action_count));
  std::vector<double> spike(action_count, 0.0);
  spike[0] = 1.0;
  return {RewardTable(std::move(flat)), RewardTable(std::move(spike))};
}

double impossibility_lower_bound(std::size_t action_count, std::size_t horizon) {
  const auto [first, second] = adversarial_pair(action_count);
  return 0.5 * static_cast<double>(horizon) * l2_distance(first.values(), second.values());
}

ImpossibilityCertificate certify_impossibility(std::span<const RewardTable> trace) {
  if (trace.empty()) throw InvalidArgument("certify_impossibility: empty trace");
  const std::size_t m = trace.front().size();
  const auto [first, second] = adversarial_pair(m);
  ImpossibilityCertificate cert;
  cert.distance_first = norm_distance(first, trace, Norm::kL2);
  cert.distance_second = norm_distance(second, trace, Norm::kL2);
  cert.lower_bound = impossibility_lower_bound(m, trace.size());
  return cert;
}

std::optional<double> kl_to_br_perstep_bound(double delta, std::size_t action_count, double beta) {
  if (!(delta >= 0.0) || action_count == 0) throw InvalidArgument("kl_to_br_perstep_bound: bad arguments");
  if (!(beta > 0.0)) throw InvalidArgument("kl_to_br_perstep_bound: beta must be > 0");
  const double md = static_cast<double>(action_count) * delta;
  if (md >= 1.0) return std::nullopt;
  return std::log((1.0 + md) / (1.0 - md)) / beta;
}

}  // namespace prefwatch
