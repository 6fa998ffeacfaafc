#include "prefwatch/tables.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "prefwatch/errors.hpp"

namespace prefwatch {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InvalidArgument(std::string(what) + ": non-finite entry");
    }
  }
}

Action argmax(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("argmax of empty vector");
  Action best = 0;
  for (Action a = 1; a < values.size(); ++a) {
    if (values[a] > values[best]) best = a;
  }
  return best;
}

RewardTable::RewardTable(std::vector<double> values, std::optional<double> sigma)
    : values_(std::move(values)), sigma_(sigma) {
  if (values_.empty()) throw InvalidArgument("RewardTable: no actions");
  require_finite(values_, "RewardTable");
  if (sigma_) {
    const double sum = std::accumulate(values_.begin(), values_.end(), 0.0);
    if (!std::isfinite(*sigma_) || std::abs(sum - *sigma_) > kConstructionTolerance) {
      throw InvalidArgument("RewardTable: values sum to " + std::to_string(sum) +
                            ", expected sigma " + std::to_string(*sigma_));
    }
  }
}

RewardTable RewardTable::normalized(std::span<const double> values, double sigma) {
  require_finite(values, "RewardTable::normalized");
  const double n = static_cast<double>(values.size());
  const double shift = sigma / n - std::accumulate(values.begin(), values.end(), 0.0) / n;
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v += shift;
  return RewardTable(std::move(out), sigma);
}

RewardTable RewardTable::zeros(std::size_t action_count) {
  return RewardTable(std::vector<double>(action_count, 0.0));
}

QTable::QTable(std::size_t num_states, std::size_t num_actions, double fill)
    : num_states_(num_states),
      num_actions_(num_actions),
      values_(num_states * num_actions, fill) {}

QTable::QTable(std::size_t num_states, std::size_t num_actions, std::vector<double> values,
               std::optional<std::vector<double>> sigma)
    : num_states_(num_states),
      num_actions_(num_actions),
      values_(std::move(values)),
      sigma_(std::move(sigma)) {
  if (num_states_ == 0 || num_actions_ == 0) throw InvalidArgument("QTable: empty shape");
  if (values_.size() != num_states_ * num_actions_) {
    throw InvalidArgument("QTable: expected " + std::to_string(num_states_ * num_actions_) +
                          " values, got " + std::to_string(values_.size()));
  }
  require_finite(values_, "QTable");
  if (sigma_) {
    if (sigma_->size() != num_states_) throw InvalidArgument("QTable: sigma length mismatch");
    for (State s = 0; s < num_states_; ++s) {
      const auto r = row(s);
      const double sum = std::accumulate(r.begin(), r.end(), 0.0);
      if (std::abs(sum - (*sigma_)[s]) > kConstructionTolerance) {
        throw InvalidArgument("QTable: row " + std::to_string(s) + " is not sigma-normalized");
      }
    }
  }
}

QTable QTable::normalized(const QTable& table, std::span<const double> sigma) {
  if (sigma.size() != table.num_states()) throw InvalidArgument("QTable::normalized: sigma length");
  std::vector<double> values(table.values().begin(), table.values().end());
  const std::size_t m = table.num_actions();
  for (State s = 0; s < table.num_states(); ++s) {
    const auto r = table.row(s);
    const double shift =
        sigma[s] / static_cast<double>(m) - std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(m);
    for (Action a = 0; a < m; ++a) values[s * m + a] += shift;
  }
  return QTable(table.num_states(), m, std::move(values),
                std::vector<double>(sigma.begin(), sigma.end()));
}

PolicyDist::PolicyDist(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidArgument("PolicyDist: no actions");
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < -kConstructionTolerance || p > 1.0 + kConstructionTolerance) {
      throw InvalidArgument("PolicyDist: entry outside [0,1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kConstructionTolerance) {
    throw InvalidArgument("PolicyDist: entries sum to " + std::to_string(sum));
  }
  for (double& p : probs_) p = std::max(p, 0.0) / sum;
}

PolicyDist PolicyDist::uniform(std::size_t action_count) {
  return PolicyDist(std::vector<double>(action_count, 1.0 / static_cast<double>(action_count)));
}

PolicyDist PolicyDist::point_mass(std::size_t action_count, Action a) {
  std::vector<double> p(action_count, 0.0);
  p.at(a) = 1.0;
  return PolicyDist(std::move(p));
}

}  // namespace prefwatch
