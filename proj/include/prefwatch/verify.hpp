#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefwatch/config.hpp"
#include "prefwatch/mdp.hpp"

namespace prefwatch {

enum class CheckStatus { kPass, kFail, kNotApplicable };
std::string_view to_string(CheckStatus status);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kNotApplicable;
  /// The measured quantity and the value it was compared against.
  double measured = 0.0;
  double bound = 0.0;
  std::size_t seeds = 0;
  double epsilon = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  double epsilon = 0.1;
  /// Replaces the default seed count of every stochastic check.
  std::optional<std::size_t> seeds;
  std::size_t parallelism = 1;
};

/// Named suites accepted by run_suite, in display order.
std::vector<std::string> suite_names();

/// Runs a suite. Throws InvalidArgument naming the available suites when
/// `suite` is unknown.
std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& options = {});

bool all_passed(const std::vector<CheckResult>& results);
nlohmann::json report_to_json(std::string_view suite, const VerifyOptions& options,
                              const std::vector<CheckResult>& results);

/// A recomputed reference value: `independent` comes from the oracle
/// formulas, `library` (when present) from the production code path.
struct OracleCase {
  enum class Compare { kNear, kAtMost, kAtLeast };
  std::string name;
  std::string description;
  double expected = 0.0;
  double tolerance = 0.0;
  Compare compare = Compare::kNear;
  std::function<double()> independent;
  std::function<double()> library;
};

struct OracleOutcome {
  std::string name;
  double independent = 0.0;
  std::optional<double> library;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

std::vector<OracleCase> oracle_cases();
OracleOutcome evaluate_oracle(const OracleCase& c);

// Instances used by the built-in checks; exposed for tests and examples.
namespace scenarios {

/// Reward vector in [0,1] used for the stateless best-response checks.
RewardTable br_bandit();
/// The three proper MDPs used for the stateful best-response check.
std::vector<Mdp> br_mdps();
/// Four-state layered MDP for the stateful l-infinity check.
Mdp layered_mdp();
/// Synthesized Boltzmann learner watched by the averaging predictor.
ExperimentConfig linf_stateless(std::size_t horizon, double epsilon);
ExperimentConfig linf_stateful(std::size_t horizon, double epsilon);
/// Every learner kind, configured for an environment with `actions` actions.
std::vector<LearnerModel> all_learners(std::size_t actions);

}  // namespace scenarios

}  // namespace prefwatch
