#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "prefwatch/config.hpp"
#include "prefwatch/errors.hpp"
#include "prefwatch/harness.hpp"
#include "prefwatch/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailure = 1;
constexpr int kConfigError = 2;

int do_run(const std::string& config_path, std::uint64_t seed, const std::string& out) {
  const auto config = prefwatch::load_config(config_path);
  const auto record = prefwatch::run_experiment(config, seed);
  const auto dir = prefwatch::resolve_output_dir(out.empty() ? config.output_dir : out);
  prefwatch::write_outputs(record, dir);
  std::cout << "wrote " << (dir / "steps.csv").string() << " and summary.json\n";
  return kOk;
}

int do_sweep(const std::string& config_path, std::optional<std::size_t> seeds, std::size_t jobs,
             const std::string& out) {
  auto grid = prefwatch::load_config_grid(config_path);
  if (seeds) {
    if (*seeds == 0) throw prefwatch::ConfigError({"--seeds: must be positive"});
    for (auto& c : grid) {
      c.seeds.clear();
      for (std::uint64_t s = 0; s < *seeds; ++s) c.seeds.push_back(s);
    }
  }
  const auto entries = prefwatch::sweep(grid, jobs);
  const auto root = prefwatch::resolve_output_dir(out.empty() ? grid.front().output_dir : out);
  std::size_t failures = 0;
  nlohmann::json index = nlohmann::json::array();
  for (const auto& e : entries) {
    const auto dir = root / prefwatch::hash_hex(e.config_hash) / ("seed-" + std::to_string(e.seed));
    nlohmann::json item{{"config_hash", prefwatch::hash_hex(e.config_hash)},
                        {"config_name", e.config_name},
                        {"seed", e.seed}};
    if (e.record) {
      prefwatch::write_outputs(*e.record, dir);
      item["dir"] = std::filesystem::relative(dir, root).string();
    } else {
      ++failures;
      item["error"] = e.error;
      std::cerr << "run " << e.config_name << " seed " << e.seed << " failed: " << e.error << '\n';
    }
    index.push_back(std::move(item));
  }
  std::filesystem::create_directories(root);
  std::ofstream(root / "sweep.json") << index.dump(2) << '\n';
  std::cout << entries.size() - failures << " of " << entries.size() << " runs written under " << root.string()
            << '\n';
  return failures == 0 ? kOk : kCheckFailure;
}

int do_verify(const std::string& suite, double epsilon, std::optional<std::size_t> seeds, std::size_t jobs,
              const std::string& out) {
  prefwatch::VerifyOptions options;
  options.epsilon = epsilon;
  options.seeds = seeds;
  options.parallelism = jobs;
  std::vector<prefwatch::CheckResult> results;
  try {
    results = prefwatch::run_suite(suite, options);
  } catch (const prefwatch::InvalidArgument& e) {
    throw std::invalid_argument(e.what());
  }
  for (const auto& r : results) {
    std::printf("%-36s %-5s measured=%.6g bound=%.6g (%s)\n", r.name.c_str(),
                std::string(prefwatch::to_string(r.status)).c_str(), r.measured, r.bound, r.detail.c_str());
  }
  const auto dir = prefwatch::resolve_output_dir(out);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "verify_report.json") << prefwatch::report_to_json(suite, options, results).dump(2) << '\n';
  return prefwatch::all_passed(results) ? kOk : kCheckFailure;
}

int do_oracle(const std::string& name) {
  bool found = false;
  bool ok = true;
  for (const auto& c : prefwatch::oracle_cases()) {
    if (name != "all" && c.name != name) continue;
    found = true;
    const auto o = prefwatch::evaluate_oracle(c);
    ok = ok && o.passed;
    std::printf("%-30s %s oracle=%.10g", o.name.c_str(), o.passed ? "ok  " : "FAIL", o.independent);
    if (o.library) std::printf(" library=%.10g", *o.library);
    if (!std::isnan(o.expected)) std::printf(" expected=%.10g tol=%.3g", o.expected, o.tolerance);
    std::printf("  # %s\n", c.description.c_str());
  }
  if (!found) {
    std::string message = "unknown oracle '" + name + "'; available: all";
    for (const auto& c : prefwatch::oracle_cases()) message += " " + c.name;
    throw prefwatch::InvalidArgument(message);
  }
  return ok ? kOk : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate learners, predict their rewards, and check the guarantees."};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Simulate one config for one seed");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed, "Run seed");
  run->add_option("--out", out, "Output directory");

  std::optional<std::size_t> seeds;
  std::size_t jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run every config in a grid over many seeds");
  sweep->add_option("--config", config_path, "Config or grid file (JSON)")->required();
  sweep->add_option("--seeds", seeds, "Use seeds 0..k-1 for every config");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out, "Output root");

  std::string suite = "all";
  double epsilon = 0.1;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "Suite name");
  verify->add_option("--epsilon", epsilon, "Confidence parameter in (0,1)");
  verify->add_option("--seeds", seeds, "Seed count for stochastic checks");
  verify->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--out", out, "Directory for verify_report.json");

  std::string oracle_name = "all";
  auto* oracle = app.add_subcommand("oracle", "Recompute reference values");
  oracle->add_option("name", oracle_name, "Reference value name, or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return do_run(config_path, seed, out);
    if (*sweep) return do_sweep(config_path, seeds, jobs, out);
    if (*verify) return do_verify(suite, epsilon, seeds, jobs, out);
    if (*oracle) return do_oracle(oracle_name);
  } catch (const prefwatch::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
