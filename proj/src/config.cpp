#include "prefwatch/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "prefwatch/errors.hpp"

namespace prefwatch {
namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::ostringstream out;
  out << "invalid experiment config:";
  for (const auto& p : problems) out << "\n  " << p;
  return out.str();
}

/// Accumulates validation problems as "path: message".
class Problems {
 public:
  void add(const std::string& path, const std::string& message) { list_.push_back(path + ": " + message); }
  bool empty() const { return list_.empty(); }
  [[noreturn]] void raise() { throw ConfigError(std::move(list_)); }

  std::optional<double> number(const nlohmann::json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_number()) {
      add(path + "." + key, "expected a number");
      return std::nullopt;
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      add(path + "." + key, "must be finite");
      return std::nullopt;
    }
    return d;
  }

  std::optional<std::uint64_t> count(const nlohmann::json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      add(path + "." + key, "expected a non-negative integer");
      return std::nullopt;
    }
    return v.get<std::uint64_t>();
  }

  std::optional<std::string> text(const nlohmann::json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    if (!obj.at(key).is_string()) {
      add(path + "." + key, "expected a string");
      return std::nullopt;
    }
    return obj.at(key).get<std::string>();
  }

 private:
  std::vector<std::string> list_;
};

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return nlohmann::json::parse(in);
}

void parse_environment(const nlohmann::json& doc, const std::filesystem::path& base_dir, EnvironmentSpec& env,
                       Problems& problems) {
  const std::string path = "environment";
  if (!doc.is_object()) {
    problems.add(path, "expected an object");
    return;
  }
  nlohmann::json body = doc;
  if (doc.contains("file")) {
    if (!doc.at("file").is_string()) {
      problems.add(path + ".file", "expected a string");
      return;
    }
    const auto file = base_dir / doc.at("file").get<std::string>();
    if (!std::filesystem::exists(file)) {
      problems.add(path + ".file", "file does not exist: " + file.string());
      return;
    }
    try {
      body = read_json_file(file);
    } catch (const std::exception& e) {
      problems.add(path + ".file", e.what());
      return;
    }
    if (doc.contains("episode_reset")) body["episode_reset"] = doc.at("episode_reset");
  }
  if (body.contains("episode_reset")) {
    if (!body.at("episode_reset").is_boolean()) {
      problems.add(path + ".episode_reset", "expected a boolean");
    } else {
      env.episode_reset = body.at("episode_reset").get<bool>();
    }
  }
  try {
    if (body.contains("num_states")) {
      env.mdp = mdp_from_json(body);
    } else if (body.contains("reward")) {
      env.bandit = RewardTable(body.at("reward").get<std::vector<double>>());
    } else {
      problems.add(path, "needs either an MDP definition (num_states, ...) or a reward vector");
    }
  } catch (const std::exception& e) {
    problems.add(path, e.what());
  }
}

void parse_learner(const nlohmann::json& doc, std::size_t num_actions, LearnerModel& learner, Problems& problems) {
  const std::string path = "learner";
  if (!doc.is_object()) {
    problems.add(path, "expected an object");
    return;
  }
  const auto kind_name = problems.text(doc, "kind", path);
  if (!kind_name) {
    if (!doc.contains("kind")) problems.add(path + ".kind", "missing");
    return;
  }
  const auto kind = parse_learner_kind(*kind_name);
  if (!kind) {
    problems.add(path + ".kind", "unknown learner kind '" + *kind_name + "'");
    return;
  }
  learner = LearnerModel{};
  learner.kind = *kind;
  if (auto beta = problems.number(doc, "beta", path)) learner.beta = *beta;
  if (auto action = problems.count(doc, "fixed_action", path)) {
    learner.fixed_action = *action;
    if (*action >= num_actions) problems.add(path + ".fixed_action", "out of range");
  }
  if (auto eta = problems.number(doc, "learning_rate", path)) learner.learning_rate = *eta;
  const bool wants_schedule = *kind == LearnerKind::kBoltzmannSynthesized || *kind == LearnerKind::kEpsilonMixedOptimal;
  if (wants_schedule) {
    EstimateSchedule schedule;
    if (auto c = problems.number(doc, "c", path)) schedule.c = *c;
    if (auto alpha = problems.number(doc, "alpha", path)) schedule.alpha = *alpha;
    if (auto mode = problems.text(doc, "noise_mode", path)) {
      if (auto parsed = parse_noise_mode(*mode)) {
        schedule.noise_mode = *parsed;
      } else {
        problems.add(path + ".noise_mode", "unknown noise mode '" + *mode + "'");
      }
    }
    learner.schedule = schedule;
  }
  if (*kind == LearnerKind::kBoltzmannSynthesized && !doc.contains("beta")) problems.add(path + ".beta", "missing");
  if (*kind == LearnerKind::kConstantAction && !doc.contains("fixed_action")) {
    problems.add(path + ".fixed_action", "missing");
  }
  try {
    if (!(*kind == LearnerKind::kConstantAction && !learner.fixed_action)) learner.validate();
  } catch (const std::exception& e) {
    problems.add(path, e.what());
  }
}

void parse_predictor(const nlohmann::json& doc, PredictorSpec& predictor, Problems& problems) {
  const std::string path = "predictor";
  nlohmann::json body = doc.is_string() ? nlohmann::json{{"predictor", doc}} : doc;
  if (!body.is_object()) {
    problems.add(path, "expected a string or an object");
    return;
  }
  const auto name = problems.text(body, "predictor", path);
  if (!name) {
    if (!body.contains("predictor")) problems.add(path + ".predictor", "missing");
    return;
  }
  if (auto kind = parse_predictor_kind(*name)) {
    predictor.kind = *kind;
  } else {
    problems.add(path + ".predictor", "unknown predictor '" + *name + "'");
  }
  if (auto beta = problems.number(body, "beta", path)) {
    predictor.beta = *beta;
    if (predictor.beta <= 0.0) problems.add(path + ".beta", "must be > 0");
  }
  if (auto sigma = problems.number(body, "sigma", path)) {
    predictor.sigma = *sigma;
    predictor.sigma_given = true;
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  Problems problems;
  ExperimentConfig config;
  if (!doc.is_object()) {
    problems.add("$", "config must be a JSON object");
    problems.raise();
  }
  if (auto name = problems.text(doc, "name", "$")) config.name = *name;

  if (doc.contains("environment")) {
    parse_environment(doc.at("environment"), base_dir, config.environment, problems);
  } else {
    problems.add("environment", "missing");
  }
  const bool have_env = config.environment.bandit || config.environment.mdp;
  const std::size_t num_actions = have_env ? config.environment.num_actions() : 0;

  if (doc.contains("learner")) {
    parse_learner(doc.at("learner"), have_env ? num_actions : SIZE_MAX, config.learner, problems);
  } else {
    problems.add("learner", "missing");
  }
  if (doc.contains("predictor")) {
    parse_predictor(doc.at("predictor"), config.predictor, problems);
  } else {
    problems.add("predictor", "missing");
  }

  if (doc.contains("measures")) {
    const auto& m = doc.at("measures");
    if (!m.is_array()) {
      problems.add("measures", "expected an array");
    } else {
      for (std::size_t i = 0; i < m.size(); ++i) {
        const auto kind = m[i].is_string() ? parse_measure_kind(m[i].get<std::string>()) : std::nullopt;
        if (!kind) {
          problems.add("measures[" + std::to_string(i) + "]", "expected one of br, klbp, l2, linf");
        } else {
          config.measures.push_back(*kind);
        }
      }
    }
  } else {
    config.measures = {MeasureKind::kBr, MeasureKind::kKlbp, MeasureKind::kL2, MeasureKind::kLinf};
  }

  config.measure_beta = config.learner.kind == LearnerKind::kBoltzmannSynthesized && config.learner.beta > 0.0
                            ? config.learner.beta
                            : config.predictor.beta;
  if (auto beta = problems.number(doc, "measure_beta", "$")) {
    if (*beta < 0.0) problems.add("measure_beta", "must be >= 0");
    config.measure_beta = *beta;
  }

  if (doc.contains("weighting")) {
    const auto& w = doc.at("weighting");
    if (w.is_string() && w.get<std::string>() == "sqrt-visit-frequency") {
      config.weighting.rule = WeightRule::kSqrtVisitFrequency;
    } else if (w.is_string() && w.get<std::string>() == "uniform") {
      config.weighting.rule = WeightRule::kUniform;
    } else if (w.is_array()) {
      config.weighting.rule = WeightRule::kCustom;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (!w[i].is_number() || w[i].get<double>() < 0.0) {
          problems.add("weighting[" + std::to_string(i) + "]", "expected a non-negative number");
        } else {
          config.weighting.custom.push_back(w[i].get<double>());
        }
      }
      if (have_env && config.weighting.custom.size() != config.environment.num_states()) {
        problems.add("weighting", "custom weights need one entry per state");
      }
    } else {
      problems.add("weighting", "expected sqrt-visit-frequency, uniform, or an array of weights");
    }
  }

  if (doc.contains("horizon")) {
    const auto& h = doc.at("horizon");
    if (!h.is_number_integer() || h.get<std::int64_t>() < 1) {
      problems.add("horizon", "must be an integer >= 1");
    } else {
      config.horizon = h.get<std::size_t>();
    }
  } else {
    problems.add("horizon", "missing");
  }

  if (doc.contains("seeds")) {
    const auto& s = doc.at("seeds");
    config.seeds.clear();
    if (s.is_array()) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s[i].is_number_integer() || s[i].get<std::int64_t>() < 0) {
          problems.add("seeds[" + std::to_string(i) + "]", "expected a non-negative integer");
        } else {
          config.seeds.push_back(s[i].get<std::uint64_t>());
        }
      }
    } else if (s.is_object()) {
      const auto count = problems.count(s, "count", "seeds").value_or(0);
      const auto base = problems.count(s, "base", "seeds").value_or(0);
      for (std::uint64_t i = 0; i < count; ++i) config.seeds.push_back(base + i);
    } else {
      problems.add("seeds", "expected an array or {count, base}");
    }
    if (config.seeds.empty()) problems.add("seeds", "must not be empty");
  }

  if (auto eps = problems.number(doc, "epsilon", "$")) {
    if (!(*eps > 0.0 && *eps < 1.0)) problems.add("epsilon", "must lie in (0,1)");
    config.epsilon = *eps;
  }
  if (auto out = problems.text(doc, "output_dir", "$")) config.output_dir = *out;

  if (config.environment.mdp) {
    for (MeasureKind m : config.measures) {
      if (m == MeasureKind::kL2 && config.weighting.rule == WeightRule::kCustom && config.weighting.custom.empty()) {
        problems.add("weighting", "custom weighting without weights");
      }
    }
  }
  if (!problems.empty()) problems.raise();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = read_json_file(path);
  } catch (const std::exception& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
  return parse_config(doc, path.parent_path().empty() ? "." : path.parent_path());
}

std::vector<ExperimentConfig> load_config_grid(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = read_json_file(path);
  } catch (const std::exception& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
  const auto base = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  std::vector<ExperimentConfig> grid;
  const nlohmann::json* list = nullptr;
  if (doc.is_array()) {
    list = &doc;
  } else if (doc.is_object() && doc.contains("grid")) {
    list = &doc.at("grid");
  }
  if (list == nullptr) {
    grid.push_back(parse_config(doc, base));
    return grid;
  }
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < list->size(); ++i) {
    try {
      grid.push_back(parse_config((*list)[i], base));
    } catch (const ConfigError& e) {
      for (const auto& p : e.problems()) problems.push_back("grid[" + std::to_string(i) + "]." + p);
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  if (grid.empty()) throw ConfigError({"grid: must not be empty"});
  return grid;
}

nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json doc;
  doc["name"] = config.name;
  nlohmann::json env;
  if (config.environment.mdp) {
    env = mdp_to_json(*config.environment.mdp);
    env["episode_reset"] = config.environment.episode_reset;
  } else if (config.environment.bandit) {
    const auto v = config.environment.bandit->values();
    env["reward"] = std::vector<double>(v.begin(), v.end());
  }
  doc["environment"] = env;
  nlohmann::json learner;
  learner["kind"] = std::string(to_string(config.learner.kind));
  if (config.learner.kind == LearnerKind::kBoltzmannSynthesized) learner["beta"] = config.learner.beta;
  if (config.learner.fixed_action) learner["fixed_action"] = *config.learner.fixed_action;
  if (config.learner.learning_rate) learner["learning_rate"] = *config.learner.learning_rate;
  if (config.learner.schedule) {
    learner["c"] = config.learner.schedule->c;
    learner["alpha"] = config.learner.schedule->alpha;
    learner["noise_mode"] = std::string(to_string(config.learner.schedule->noise_mode));
  }
  doc["learner"] = learner;
  nlohmann::json predictor;
  predictor["predictor"] = std::string(to_string(config.predictor.kind));
  predictor["beta"] = config.predictor.beta;
  if (config.predictor.sigma_given) predictor["sigma"] = config.predictor.sigma;
  doc["predictor"] = predictor;
  auto measures = nlohmann::json::array();
  for (auto m : config.measures) measures.push_back(std::string(to_string(m)));
  doc["measures"] = measures;
  doc["measure_beta"] = config.measure_beta;
  switch (config.weighting.rule) {
    case WeightRule::kSqrtVisitFrequency: doc["weighting"] = "sqrt-visit-frequency"; break;
    case WeightRule::kUniform: doc["weighting"] = "uniform"; break;
    case WeightRule::kCustom: doc["weighting"] = config.weighting.custom; break;
  }
  doc["horizon"] = config.horizon;
  doc["epsilon"] = config.epsilon;
  doc["seeds"] = config.seeds;
  if (!config.output_dir.empty()) doc["output_dir"] = config.output_dir;
  return doc;
}

std::uint64_t ExperimentConfig::hash() const {
  auto doc = to_json(*this);
  doc.erase("seeds");
  doc.erase("output_dir");
  return fnv1a64(doc.dump());
}

}  // namespace prefwatch
