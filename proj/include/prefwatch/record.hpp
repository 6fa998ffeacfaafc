#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefwatch/bounds.hpp"

namespace prefwatch {

inline constexpr const char* kCsvVersionLine = "# prefwatch-v1";

/// One row of steps.csv. Undefined values are NaN and serialize as empty fields.
struct StepRow {
  std::size_t t = 0;
  std::size_t state = 0;
  std::size_t action = 0;
  double reward = 0.0;
  double regret_inc = 0.0;
  double regret_cum = 0.0;
  std::vector<double> measure_inc;
  std::vector<double> measure_cum;
  double kappa = 0.0;
  double bound_concentration_inc = 0.0;
  double bound_learner_inc = 0.0;
  double bound_cum = 0.0;
};

struct RunSummary {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::string config_name;
  std::string learner;
  std::string predictor;
  std::size_t horizon = 0;
  std::vector<std::string> measure_names;
  std::vector<double> final_measures;
  double measured_regret = 0.0;
  /// t_e per state; empty entries were never fully explored.
  std::vector<std::optional<std::size_t>> exploration_time;
  /// l-infinity error summed from exploration onward (visit-weighted when stateful).
  std::optional<double> linf_from_exploration;
  /// Right-hand side of the l-infinity guarantee; empty when it does not apply.
  std::optional<BoundTerms> bound;
  double wall_time_seconds = 0.0;
};

struct RunRecord {
  std::vector<std::string> measure_names;
  std::vector<StepRow> steps;
  RunSummary summary;
};

std::vector<std::string> csv_columns(const std::vector<std::string>& measure_names);
void write_steps_csv(std::ostream& out, const RunRecord& record);
/// Parses steps.csv back; measure names come from the header.
RunRecord read_steps_csv(std::istream& in);

nlohmann::json summary_to_json(const RunSummary& summary);
RunSummary summary_from_json(const nlohmann::json& doc);

/// Writes steps.csv and summary.json into `dir`, creating it if needed.
void write_outputs(const RunRecord& record, const std::filesystem::path& dir);
RunRecord read_outputs(const std::filesystem::path& dir);

}  // namespace prefwatch
