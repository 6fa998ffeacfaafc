#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "prefwatch/config.hpp"
#include "prefwatch/history.hpp"
#include "prefwatch/mdp.hpp"
#include "prefwatch/predictors.hpp"
#include "prefwatch/tables.hpp"

namespace prefwatch {

/// Everything one run produces before measurement.
struct Simulation {
  InteractionHistory history;
  /// The learner's policy table at each step (white-box, for verification only).
  std::vector<PolicyTable> learner_policies;
  /// The learner's internal estimate at each step, when it keeps one.
  std::vector<QTable> learner_estimates;
  PredictionTrace predictions;
  /// R* as a one-row table, or Q* of the configured MDP.
  QTable truth;
  /// Dynamics the learner actually moved through (stateful runs only).
  std::optional<Mdp> dynamics;
};

/// Ground-truth values for a config: R* or Q*. Throws ConfigError when the
/// MDP has no undiscounted fixed point.
QTable ground_truth(const ExperimentConfig& config);

/// Dynamics used for stateful runs (restarting after terminals by default).
Mdp run_dynamics(const ExperimentConfig& config);

/// Simulates config.horizon steps. At each step the predictor sees only the
/// behavior log before the step, then the learner acts, observes its reward,
/// and the environment moves on.
Simulation simulate(const ExperimentConfig& config, std::uint64_t seed);

}  // namespace prefwatch
