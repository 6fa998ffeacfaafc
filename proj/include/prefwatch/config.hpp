#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefwatch/learners.hpp"
#include "prefwatch/mdp.hpp"
#include "prefwatch/measures.hpp"
#include "prefwatch/predictors.hpp"
#include "prefwatch/tables.hpp"

namespace prefwatch {

/// Either a single-state reward vector or an MDP.
struct EnvironmentSpec {
  std::optional<RewardTable> bandit;
  std::optional<Mdp> mdp;
  /// Stateful only: a learner entering a terminal state restarts from the
  /// initial distribution instead of idling there.
  bool episode_reset = true;

  bool stateful() const noexcept { return mdp.has_value(); }
  std::size_t num_states() const { return stateful() ? mdp->num_states() : 1; }
  std::size_t num_actions() const { return stateful() ? mdp->num_actions() : bandit->size(); }
};

struct PredictorSpec {
  PredictorKind kind = PredictorKind::kBestResponse;
  double beta = 1.0;
  double sigma = 0.0;
  /// Whether the config set sigma explicitly. Norm measures compare against
  /// the sigma-normalized truth when it did or when the predictor is averaging.
  bool sigma_given = false;
};

struct ExperimentConfig {
  std::string name;
  EnvironmentSpec environment;
  LearnerModel learner;
  PredictorSpec predictor;
  std::vector<MeasureKind> measures;
  /// Inverse temperature used by the KL measure.
  double measure_beta = 1.0;
  WeightingScheme weighting;
  std::size_t horizon = 1;
  std::vector<std::uint64_t> seeds{0};
  double epsilon = 0.1;
  std::string output_dir;

  bool stateful() const noexcept { return environment.stateful(); }
  /// FNV-1a hash of the canonical JSON form, excluding seeds and output_dir.
  std::uint64_t hash() const;
};

/// Validates and builds a config. Relative file paths resolve against
/// `base_dir`. Throws ConfigError listing every problem with its field path.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// A config file holding one config, an array of configs, or {"grid": [...]}.
std::vector<ExperimentConfig> load_config_grid(const std::filesystem::path& path);

/// Canonical JSON form (environment inlined).
nlohmann::json to_json(const ExperimentConfig& config);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace prefwatch
