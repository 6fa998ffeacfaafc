#include "prefwatch/record.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "prefwatch/errors.hpp"

namespace prefwatch {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_real(double x) {
  if (std::isnan(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_real(const std::string& field) {
  if (field.empty()) return kNaN;
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size()) throw InvalidArgument("steps.csv: bad number '" + field + "'");
  return v;
}

std::size_t parse_index(const std::string& field) {
  std::size_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw InvalidArgument("steps.csv: bad index '" + field + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  std::istringstream in(line);
  while (std::getline(in, current, ',')) fields.push_back(current);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

nlohmann::json real_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

std::vector<std::string> csv_columns(const std::vector<std::string>& measure_names) {
  std::vector<std::string> cols{"t", "state", "action", "reward", "regret_inc", "regret_cum"};
  for (const auto& m : measure_names) {
    cols.push_back(m + "_inc");
    cols.push_back(m + "_cum");
  }
  for (const char* c : {"kappa", "bound_concentration_inc", "bound_learner_inc", "bound_cum"}) cols.emplace_back(c);
  return cols;
}

void write_steps_csv(std::ostream& out, const RunRecord& record) {
  out << kCsvVersionLine << '\n';
  const auto cols = csv_columns(record.measure_names);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& row : record.steps) {
    out << row.t << ',' << row.state << ',' << row.action << ',' << format_real(row.reward) << ','
        << format_real(row.regret_inc) << ',' << format_real(row.regret_cum);
    for (std::size_t m = 0; m < record.measure_names.size(); ++m) {
      out << ',' << format_real(row.measure_inc[m]) << ',' << format_real(row.measure_cum[m]);
    }
    out << ',' << format_real(row.kappa) << ',' << format_real(row.bound_concentration_inc) << ','
        << format_real(row.bound_learner_inc) << ',' << format_real(row.bound_cum) << '\n';
  }
}

RunRecord read_steps_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvVersionLine) {
    throw InvalidArgument("steps.csv: missing version line");
  }
  if (!std::getline(in, line)) throw InvalidArgument("steps.csv: missing header");
  const auto header = split(line);
  if (header.size() < 10 || (header.size() - 10) % 2 != 0) throw InvalidArgument("steps.csv: malformed header");
  RunRecord record;
  for (std::size_t i = 6; i + 4 < header.size(); i += 2) {
    const auto& name = header[i];
    if (name.size() < 5 || name.substr(name.size() - 4) != "_inc") {
      throw InvalidArgument("steps.csv: unexpected column " + name);
    }
    record.measure_names.push_back(name.substr(0, name.size() - 4));
  }
  if (csv_columns(record.measure_names) != header) throw InvalidArgument("steps.csv: unexpected column order");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size()) throw InvalidArgument("steps.csv: wrong field count");
    StepRow row;
    row.t = parse_index(f[0]);
    row.state = parse_index(f[1]);
    row.action = parse_index(f[2]);
    row.reward = parse_real(f[3]);
    row.regret_inc = parse_real(f[4]);
    row.regret_cum = parse_real(f[5]);
    std::size_t i = 6;
    for (std::size_t m = 0; m < record.measure_names.size(); ++m) {
      row.measure_inc.push_back(parse_real(f[i++]));
      row.measure_cum.push_back(parse_real(f[i++]));
    }
    row.kappa = parse_real(f[i++]);
    row.bound_concentration_inc = parse_real(f[i++]);
    row.bound_learner_inc = parse_real(f[i++]);
    row.bound_cum = parse_real(f[i++]);
    record.steps.push_back(std::move(row));
  }
  return record;
}

nlohmann::json summary_to_json(const RunSummary& s) {
  nlohmann::json doc;
  doc["seed"] = s.seed;
  doc["config_hash"] = s.config_hash;
  doc["config_name"] = s.config_name;
  doc["learner"] = s.learner;
  doc["predictor"] = s.predictor;
  doc["horizon"] = s.horizon;
  nlohmann::json measures = nlohmann::json::object();
  for (std::size_t i = 0; i < s.measure_names.size(); ++i) measures[s.measure_names[i]] = real_or_null(s.final_measures[i]);
  doc["measures"] = s.measure_names;
  doc["final_measures"] = measures;
  doc["measured_regret"] = real_or_null(s.measured_regret);
  auto te = nlohmann::json::array();
  for (const auto& t : s.exploration_time) te.push_back(t ? nlohmann::json(*t) : nlohmann::json(nullptr));
  doc["exploration_time"] = te;
  doc["linf_from_exploration"] =
      s.linf_from_exploration ? real_or_null(*s.linf_from_exploration) : nlohmann::json(nullptr);
  if (s.bound) {
    doc["bound"] = {{"concentration", s.bound->concentration},
                    {"learner", s.bound->learner},
                    {"total", s.bound->total()}};
  } else {
    doc["bound"] = "not-applicable";
  }
  doc["wall_time_seconds"] = s.wall_time_seconds;
  return doc;
}

RunSummary summary_from_json(const nlohmann::json& doc) {
  RunSummary s;
  auto real = [](const nlohmann::json& v) { return v.is_null() ? kNaN : v.get<double>(); };
  s.seed = doc.at("seed").get<std::uint64_t>();
  s.config_hash = doc.at("config_hash").get<std::uint64_t>();
  s.config_name = doc.at("config_name").get<std::string>();
  s.learner = doc.at("learner").get<std::string>();
  s.predictor = doc.at("predictor").get<std::string>();
  s.horizon = doc.at("horizon").get<std::size_t>();
  s.measure_names = doc.at("measures").get<std::vector<std::string>>();
  for (const auto& name : s.measure_names) s.final_measures.push_back(real(doc.at("final_measures").at(name)));
  s.measured_regret = real(doc.at("measured_regret"));
  for (const auto& t : doc.at("exploration_time")) {
    s.exploration_time.push_back(t.is_null() ? std::nullopt : std::optional<std::size_t>(t.get<std::size_t>()));
  }
  if (!doc.at("linf_from_exploration").is_null()) s.linf_from_exploration = doc.at("linf_from_exploration").get<double>();
  if (doc.at("bound").is_object()) {
    s.bound = BoundTerms{doc.at("bound").at("concentration").get<double>(), doc.at("bound").at("learner").get<double>()};
  }
  s.wall_time_seconds = doc.at("wall_time_seconds").get<double>();
  return s;
}

void write_outputs(const RunRecord& record, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "steps.csv");
    if (!csv) throw InvalidArgument("cannot write " + (dir / "steps.csv").string());
    write_steps_csv(csv, record);
  }
  std::ofstream json(dir / "summary.json");
  if (!json) throw InvalidArgument("cannot write " + (dir / "summary.json").string());
  json << summary_to_json(record.summary).dump(2) << '\n';
}

RunRecord read_outputs(const std::filesystem::path& dir) {
  std::ifstream csv(dir / "steps.csv");
  if (!csv) throw InvalidArgument("cannot read " + (dir / "steps.csv").string());
  RunRecord record = read_steps_csv(csv);
  std::ifstream json(dir / "summary.json");
  if (!json) throw InvalidArgument("cannot read " + (dir / "summary.json").string());
  record.summary = summary_from_json(nlohmann::json::parse(json));
  return record;
}

}  // namespace prefwatch
