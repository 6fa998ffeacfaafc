#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prefwatch/config.hpp"
#include "prefwatch/record.hpp"
#include "prefwatch/simulation.hpp"

namespace prefwatch {

/// Environment variable that relocates every relative output directory.
inline constexpr const char* kOutputRootVariable = "PREFWATCH_OUTPUT_ROOT";

/// Whether the l-infinity guarantee applies: averaging predictor watching a
/// synthesized Boltzmann learner with the same beta (and, when stateful, the
/// visit-frequency weighting).
bool bound_applies(const ExperimentConfig& config);

/// Measures a finished simulation. Deterministic in (config, sim); the summary
/// wall time is left at zero.
RunRecord build_record(const ExperimentConfig& config, const Simulation& sim, std::uint64_t seed);

/// Simulates and measures one seed.
RunRecord run_experiment(const ExperimentConfig& config, std::uint64_t seed);

struct SweepEntry {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string config_name;
  std::optional<RunRecord> record;
  /// Failure message when the run threw; the record is then empty.
  std::string error;
};

/// Runs every (config, seed) pair of the grid on `parallelism` worker threads.
/// Results are ordered by (config hash, seed); failures are captured per entry.
std::vector<SweepEntry> sweep(const std::vector<ExperimentConfig>& grid, std::size_t parallelism = 1);

/// `requested` placed under $PREFWATCH_OUTPUT_ROOT when that is set and
/// `requested` is relative.
std::filesystem::path resolve_output_dir(const std::filesystem::path& requested);

/// Lower-case hexadecimal form used for per-config output directories.
std::string hash_hex(std::uint64_t hash);

}  // namespace prefwatch
