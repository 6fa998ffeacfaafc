#include "prefwatch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>

#include "prefwatch/bounds.hpp"
#include "prefwatch/env.hpp"
#include "prefwatch/errors.hpp"
#include "prefwatch/learners.hpp"
#include "prefwatch/measures.hpp"

namespace prefwatch {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool compare_against_normalized(const ExperimentConfig& config) {
  return config.predictor.kind == PredictorKind::kAveraging || config.predictor.sigma_given;
}

double rationality(const ExperimentConfig& config) {
  return config.learner.kind == LearnerKind::kBoltzmannSynthesized ? config.learner.beta : config.measure_beta;
}

struct MeasureColumns {
  std::vector<std::vector<double>> increments;  // [measure][t-1]
  std::vector<double> linf;                     // always computed, for the exploration-time sum
};

MeasureColumns stateless_measures(const ExperimentConfig& config, const Simulation& sim) {
  const auto values = config.environment.bandit->values();
  const RewardTable truth(std::vector<double>(values.begin(), values.end()));
  const RewardTable norm_truth =
      compare_against_normalized(config) ? RewardTable::normalized(values, config.predictor.sigma) : truth;
  const auto& trace = sim.predictions.rewards;
  MeasureColumns cols;
  for (MeasureKind m : config.measures) {
    switch (m) {
      case MeasureKind::kBr: {
        std::vector<double> inc;
        inc.reserve(trace.size());
        for (const auto& r : trace) inc.push_back(br_gap(truth, r));
        cols.increments.push_back(std::move(inc));
        break;
      }
      case MeasureKind::kKlbp: cols.increments.push_back(klbp_increments(truth, trace, config.measure_beta)); break;
      case MeasureKind::kL2: cols.increments.push_back(norm_increments(norm_truth, trace, Norm::kL2)); break;
      case MeasureKind::kLinf: cols.increments.push_back(norm_increments(norm_truth, trace, Norm::kLinf)); break;
    }
  }
  cols.linf = norm_increments(norm_truth, trace, Norm::kLinf);
  return cols;
}

MeasureColumns stateful_measures(const ExperimentConfig& config, const Simulation& sim) {
  const QTable& truth = sim.truth;
  const QTable norm_truth =
      compare_against_normalized(config)
          ? QTable::normalized(truth, std::vector<double>(truth.num_states(), config.predictor.sigma))
          : truth;
  const auto& trace = sim.predictions.tables;
  const BehaviorLog& log = sim.history.behavior();
  MeasureColumns cols;
  for (MeasureKind m : config.measures) {
    switch (m) {
      case MeasureKind::kBr: cols.increments.push_back(br_stateful_increments(*sim.dynamics, trace)); break;
      case MeasureKind::kKlbp:
        cols.increments.push_back(klbp_increments(truth, trace, config.measure_beta, config.weighting, log));
        break;
      case MeasureKind::kL2:
        cols.increments.push_back(norm_increments(norm_truth, trace, Norm::kL2, config.weighting, log));
        break;
      case MeasureKind::kLinf:
        cols.increments.push_back(norm_increments(norm_truth, trace, Norm::kLinf, config.weighting, log));
        break;
    }
  }
  cols.linf = norm_increments(norm_truth, trace, Norm::kLinf, config.weighting, log);
  return cols;
}

}  // namespace

bool bound_applies(const ExperimentConfig& config) {
  if (config.predictor.kind != PredictorKind::kAveraging) return false;
  if (config.learner.kind != LearnerKind::kBoltzmannSynthesized || !config.learner.schedule) return false;
  if (!(config.learner.beta > 0.0) || std::abs(config.learner.beta - config.predictor.beta) > 1e-12) return false;
  if (config.horizon < 2) return false;
  if (config.stateful() && config.weighting.rule != WeightRule::kSqrtVisitFrequency) return false;
  return true;
}

RunRecord build_record(const ExperimentConfig& config, const Simulation& sim, std::uint64_t seed) {
  const std::size_t T = config.horizon;
  const std::size_t n_states = config.environment.num_states();
  const std::size_t n_actions = config.environment.num_actions();
  const BehaviorLog& log = sim.history.behavior();
  if (log.size() != T) throw InvalidArgument("build_record: simulation length does not match the horizon");

  RunRecord record;
  for (MeasureKind m : config.measures) record.measure_names.emplace_back(to_string(m));

  // Regret increments.
  std::vector<double> regret(T, 0.0);
  if (config.stateful()) {
    const auto best = optimal_step_rewards(*sim.dynamics, T);
    const auto achieved = expected_step_rewards(*sim.dynamics, sim.learner_policies);
    for (std::size_t t = 0; t < T; ++t) regret[t] = best[t] - achieved[t];
  } else {
    const auto& bandit = *config.environment.bandit;
    const double best = bandit[argmax(bandit.values())];
    for (std::size_t t = 0; t < T; ++t) regret[t] = best - bandit[log.action(t + 1)];
  }

  const MeasureColumns cols = config.stateful() ? stateful_measures(config, sim) : stateless_measures(config, sim);

  // kappa_t(s) from the counts before t, and the prior visit counts.
  const PolicyTable target = boltzmann_policy(sim.truth, rationality(config));
  std::vector<std::vector<double>> kappas(n_states, std::vector<double>(T, kNaN));
  std::vector<std::vector<std::size_t>> prior(n_states, std::vector<std::size_t>(T, 0));
  {
    BehaviorLog before(n_states, n_actions);
    for (std::size_t t = 1; t <= T; ++t) {
      for (State s = 0; s < n_states; ++s) {
        kappas[s][t - 1] = kappa(before.action_counts(s), target[s]);
        prior[s][t - 1] = before.state_visits(s);
      }
      before.record(log.state(t), log.action(t));
    }
  }

  std::vector<std::optional<std::size_t>> te(n_states);
  for (State s = 0; s < n_states; ++s) te[s] = log.exploration_time(s);

  std::optional<std::vector<BoundTerms>> bound_steps;
  if (bound_applies(config)) {
    BoundInputs in;
    in.horizon = T;
    in.epsilon = config.epsilon;
    in.beta = config.learner.beta;
    in.action_count = n_actions;
    in.state_count = n_states;
    in.kappa = kappas;
    if (config.stateful()) in.prior_visits = prior;
    in.exploration_time = te;
    const EstimateSchedule schedule = *config.learner.schedule;
    in.f = [schedule](double n) { return schedule.cumulative_bound(n); };
    bound_steps = linfty_bound_increments(in, config.stateful());
  }

  record.steps.reserve(T);
  double regret_cum = 0.0;
  std::vector<double> measure_cum(cols.increments.size(), 0.0);
  double bound_cum = 0.0;
  for (std::size_t t = 1; t <= T; ++t) {
    StepRow row;
    row.t = t;
    row.state = log.state(t);
    row.action = log.action(t);
    row.reward = sim.history.reward(t);
    row.regret_inc = regret[t - 1];
    regret_cum += row.regret_inc;
    row.regret_cum = regret_cum;
    for (std::size_t m = 0; m < cols.increments.size(); ++m) {
      row.measure_inc.push_back(cols.increments[m][t - 1]);
      measure_cum[m] += cols.increments[m][t - 1];
      row.measure_cum.push_back(measure_cum[m]);
    }
    row.kappa = kappas[row.state][t - 1];
    if (bound_steps) {
      const auto& b = (*bound_steps)[t - 1];
      row.bound_concentration_inc = b.concentration;
      row.bound_learner_inc = b.learner;
      bound_cum += b.total();
      row.bound_cum = bound_cum;
    } else {
      row.bound_concentration_inc = row.bound_learner_inc = row.bound_cum = kNaN;
    }
    record.steps.push_back(std::move(row));
  }

  RunSummary& s = record.summary;
  s.seed = seed;
  s.config_hash = config.hash();
  s.config_name = config.name;
  s.learner = std::string(to_string(config.learner.kind));
  s.predictor = std::string(to_string(config.predictor.kind));
  s.horizon = T;
  s.measure_names = record.measure_names;
  s.final_measures = measure_cum;
  s.measured_regret = regret_cum;
  s.exploration_time = te;
  if (config.stateful()) {
    double total = 0.0;
    for (double v : cols.linf) total += v;
    s.linf_from_exploration = total;
  } else if (te[0]) {
    double total = 0.0;
    for (std::size_t t = *te[0]; t <= T; ++t) total += cols.linf[t - 1];
    s.linf_from_exploration = total;
  }
  if (bound_steps) {
    BoundTerms total;
    for (const auto& b : *bound_steps) {
      total.concentration += b.concentration;
      total.learner += b.learner;
    }
    s.bound = total;
  }
  return record;
}

RunRecord run_experiment(const ExperimentConfig& config, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const Simulation sim = simulate(config, seed);
  RunRecord record = build_record(config, sim, seed);
  record.summary.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

std::vector<SweepEntry> sweep(const std::vector<ExperimentConfig>& grid, std::size_t parallelism) {
  if (grid.empty()) throw InvalidArgument("sweep: empty grid");
  struct Job {
    const ExperimentConfig* config;
    std::uint64_t hash;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& config : grid) {
    const auto hash = config.hash();
    for (auto seed : config.seeds) jobs.push_back({&config, hash, seed});
  }
  std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    return a.hash != b.hash ? a.hash < b.hash : a.seed < b.seed;
  });

  std::vector<SweepEntry> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      SweepEntry& entry = results[i];
      entry.config_hash = job.hash;
      entry.seed = job.seed;
      entry.config_name = job.config->name;
      try {
        entry.record = run_experiment(*job.config, job.seed);
      } catch (const std::exception& e) {
        entry.error = e.what();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return results;
}

std::filesystem::path resolve_output_dir(const std::filesystem::path& requested) {
  const char* root = std::getenv(kOutputRootVariable);
  if (root == nullptr || *root == '\0') return requested.empty() ? std::filesystem::path("prefwatch-out") : requested;
  if (requested.empty()) return std::filesystem::path(root);
  return requested.is_absolute() ? requested : std::filesystem::path(root) / requested;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

CoverageResult azuma_coverage(const ExperimentConfig& scenario, std::size_t num_seeds, double radius_scale,
                              std::size_t parallelism) {
  std::vector<char> covered(num_seeds, 0);
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < num_seeds; i = next++) {
      try {
        const Simulation sim = simulate(scenario, i);
        covered[i] = azuma_covered(sim.history.behavior(), sim.learner_policies, scenario.epsilon, radius_scale);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(num_seeds, 1));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  CoverageResult result;
  result.seeds = num_seeds;
  result.covered = static_cast<std::size_t>(std::count(covered.begin(), covered.end(), 1));
  return result;
}

}  // namespace prefwatch
