#include "prefwatch/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "prefwatch/bounds.hpp"
#include "prefwatch/env.hpp"
#include "prefwatch/errors.hpp"
#include "prefwatch/harness.hpp"
#include "prefwatch/learners.hpp"
#include "prefwatch/measures.hpp"
#include "prefwatch/oracle.hpp"
#include "prefwatch/predictors.hpp"
#include "prefwatch/rng.hpp"
#include "prefwatch/simulation.hpp"

namespace prefwatch {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kPropertySeed = 0x5eed5eedULL;

using Clock = std::chrono::steady_clock;


ExperimentConfig base_config(std::string name, std::size_t horizon) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.horizon = horizon;
  return c;
}

void use_seeds(ExperimentConfig& c, std::size_t n) {
  c.seeds.resize(n);
  std::iota(c.seeds.begin(), c.seeds.end(), std::uint64_t{0});
}

std::vector<RunRecord> run_all(const std::vector<ExperimentConfig>& grid, std::size_t parallelism) {
  std::vector<RunRecord> out;
  for (auto& entry : sweep(grid, parallelism)) {
    if (!entry.record) throw InvalidArgument("run " + entry.config_name + " failed: " + entry.error);
    out.push_back(std::move(*entry.record));
  }
  return out;
}

CheckResult finish(CheckResult r, bool ok, Clock::time_point start) {
  r.status = ok ? CheckStatus::kPass : CheckStatus::kFail;
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

std::size_t seeds_or(const VerifyOptions& o, std::size_t fallback) { return o.seeds.value_or(fallback); }

double final_measure(const RunRecord& r, std::string_view name) {
  for (std::size_t i = 0; i < r.summary.measure_names.size(); ++i) {
    if (r.summary.measure_names[i] == name) return r.summary.final_measures[i];
  }
  throw InvalidArgument("measure not recorded: " + std::string(name));
}

std::vector<double> random_simplex(Rng& rng, std::size_t m) {
  std::vector<double> p(m);
  double z = 0.0;
  for (double& v : p) z += (v = -std::log(1.0 - rng.uniform()));
  for (double& v : p) v /= z;
  return p;
}

std::vector<double> random_vector(Rng& rng, std::size_t m, double scale) {
  std::vector<double> v(m);
  for (double& x : v) x = scale * (2.0 * rng.uniform() - 1.0);
  return v;
}

// ---------------------------------------------------------------------------
// Best-response guarantees.

CheckResult check_br_stateless(const VerifyOptions& o) {
  const auto start = Clock::now();
  const std::size_t seeds = seeds_or(o, 100);
  const RewardTable bandit = scenarios::br_bandit();
  std::vector<ExperimentConfig> grid;
  for (const auto& learner : scenarios::all_learners(bandit.size())) {
    auto c = base_config(std::string("br-stateless/") + std::string(to_string(learner.kind)), 1000);
    c.environment.bandit = bandit;
    c.learner = learner;
    c.predictor.kind = PredictorKind::kBestResponse;
    c.measures = {MeasureKind::kBr};
    use_seeds(c, seeds);
    grid.push_back(std::move(c));
  }
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  for (const auto& r : run_all(grid, o.parallelism)) {
    const double excess = final_measure(r, "br") - (1.0 + r.summary.measured_regret);
    worst = std::max(worst, excess);
    violations += excess > 0.0;
  }
  CheckResult res{"br-stateless", {}, worst, 0.0, seeds, o.epsilon, {}, 0.0};
  res.detail = "max of D_BR - (1 + regret) over " + std::to_string(grid.size()) + " learners; " +
               std::to_string(violations) + " violations";
  return finish(res, violations == 0, start);
}

CheckResult check_br_stateful(const VerifyOptions& o) {
  const auto start = Clock::now();
  const std::size_t seeds = seeds_or(o, 100);
  std::vector<ExperimentConfig> grid;
  std::size_t index = 0;
  for (const auto& mdp : scenarios::br_mdps()) {
    for (const auto& learner : scenarios::all_learners(mdp.num_actions())) {
      auto c = base_config("br-stateful/mdp" + std::to_string(index) + "/" + std::string(to_string(learner.kind)),
                           2000);
      c.environment.mdp = mdp;
      c.learner = learner;
      c.predictor.kind = PredictorKind::kBestResponse;
      c.measures = {MeasureKind::kBr};
      use_seeds(c, seeds);
      grid.push_back(std::move(c));
    }
    ++index;
  }
  double worst = -std::numeric_limits<double>::infinity();
  std::map<std::string, std::size_t> violations;
  std::size_t total_violations = 0;
  const auto records = run_all(grid, o.parallelism);
  for (const auto& r : records) {
    const auto& config = *std::find_if(grid.begin(), grid.end(),
                                       [&](const ExperimentConfig& c) { return c.name == r.summary.config_name; });
    const double S = static_cast<double>(config.environment.num_states());
    const double excess = final_measure(r, "br") - (S + r.summary.measured_regret);
    worst = std::max(worst, excess);
    if (excess > 0.0) {
      ++violations[r.summary.config_name];
      ++total_violations;
    }
  }
  CheckResult res{"br-stateful", {}, worst, 0.0, seeds, o.epsilon, {}, 0.0};
  std::ostringstream detail;
  detail << "max of D_BR - (|S| + policy regret) over " << grid.size() << " MDP/learner pairs; " << total_violations
         << " violations";
  for (const auto& [name, n] : violations) detail << "; " << name << ": " << n;
  res.detail = detail.str();
  return finish(res, total_violations == 0, start);
}

// ---------------------------------------------------------------------------
// l-infinity guarantees.

CheckResult coverage_of_bound(std::string name, ExperimentConfig config, std::size_t seeds, const VerifyOptions& o) {
  const auto start = Clock::now();
  use_seeds(config, seeds);
  std::size_t held = 0;
  double worst_ratio = 0.0;
  for (const auto& r : run_all({config}, o.parallelism)) {
    if (!r.summary.bound || !r.summary.linf_from_exploration) continue;
    const double lhs = *r.summary.linf_from_exploration;
    const double rhs = r.summary.bound->total();
    held += lhs <= rhs;
    worst_ratio = std::max(worst_ratio, lhs / rhs);
  }
  const double fraction = static_cast<double>(held) / static_cast<double>(seeds);
  CheckResult res{std::move(name), {}, fraction, 1.0 - config.epsilon, seeds, config.epsilon, {}, 0.0};
  std::ostringstream detail;
  detail << "fraction of seeds with LHS <= RHS; largest LHS/RHS = " << worst_ratio;
  res.detail = detail.str();
  return finish(res, fraction >= 1.0 - config.epsilon, start);
}

CheckResult check_linf_stateless(const VerifyOptions& o) {
  return coverage_of_bound("linf-stateless", scenarios::linf_stateless(5000, o.epsilon), seeds_or(o, 200), o);
}

CheckResult check_linf_stateful(const VerifyOptions& o) {
  return coverage_of_bound("linf-stateful", scenarios::linf_stateful(5000, o.epsilon), seeds_or(o, 200), o);
}

CheckResult check_linf_rate(const VerifyOptions& o) {
  const auto start = Clock::now();
  const std::size_t seeds = seeds_or(o, 50);
  std::vector<double> xs;
  std::vector<double> ys;
  std::ostringstream detail;
  for (std::size_t T : {100, 1000, 10000}) {
    auto c = scenarios::linf_stateless(T, o.epsilon);
    use_seeds(c, seeds);
    double total = 0.0;
    for (const auto& r : run_all({c}, o.parallelism)) total += r.summary.linf_from_exploration.value_or(kNaN);
    const double mean = total / static_cast<double>(seeds);
    xs.push_back(std::log(static_cast<double>(T)));
    ys.push_back(std::log(mean));
    detail << "T=" << T << ": " << mean << "; ";
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  detail << "least-squares log-log slope";
  CheckResult res{"linf-rate", {}, slope, 0.65, seeds, o.epsilon, detail.str(), 0.0};
  return finish(res, std::isfinite(slope) && slope <= 0.65, start);
}

// ---------------------------------------------------------------------------
// Impossibility.

CheckResult check_impossibility(const VerifyOptions& o) {
  const auto start = Clock::now();
  const std::size_t T = 1000;
  bool all_hold = true;
  double ratio_two = std::numeric_limits<double>::infinity();
  std::ostringstream detail;
  for (std::size_t m : {2, 4}) {
    for (auto kind : {PredictorKind::kBestResponse, PredictorKind::kAveraging, PredictorKind::kConstantZero}) {
      auto c = base_config("impossibility", T);
      c.environment.bandit = adversarial_pair(m).second;
      c.learner = LearnerModel::constant_action(0);
      c.predictor.kind = kind;
      c.predictor.sigma = 1.0;
      c.predictor.sigma_given = kind == PredictorKind::kAveraging;
      c.measures = {MeasureKind::kL2};
      const auto sim = simulate(c, 0);
      const auto cert = certify_impossibility(sim.predictions.rewards);
      all_hold = all_hold && cert.holds();
      if (m == 2) ratio_two = std::min(ratio_two, cert.worst() / static_cast<double>(T));
      detail << "|A|=" << m << " " << to_string(kind) << ": " << cert.worst() << " >= " << cert.lower_bound << "; ";
    }
  }
  detail << "measured = min worst/T at |A|=2";
  CheckResult res{"impossibility", {}, ratio_two, 0.3535, 1, o.epsilon, detail.str(), 0.0};
  return finish(res, all_hold && ratio_two >= 0.3535, start);
}

// ---------------------------------------------------------------------------
// Proof-machinery properties.

template <typename Fn>
CheckResult count_failures(std::string name, std::size_t trials, const VerifyOptions& o, Fn&& trial) {
  const auto start = Clock::now();
  Rng rng(kPropertySeed);
  std::size_t failures = 0;
  std::size_t applicable = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trials; ++i) {
    const std::optional<double> slack = trial(rng);  // negative means violated
    if (!slack) continue;
    ++applicable;
    worst = std::max(worst, -*slack);
    failures += !(*slack >= 0.0);
  }
  CheckResult res{std::move(name), {}, static_cast<double>(failures), 0.0, trials, o.epsilon, {}, 0.0};
  std::ostringstream detail;
  detail << "failures out of " << applicable << " applicable trials (" << trials << " drawn); largest violation "
         << worst;
  res.detail = detail.str();
  return finish(res, failures == 0, start);
}

std::vector<CheckResult> check_properties(const VerifyOptions& o) {
  constexpr std::size_t kTrials = 10000;
  std::vector<CheckResult> out;
  out.push_back(count_failures("properties.pinsker-chain", kTrials, o, [](Rng& rng) {
    const std::size_t m = 2 + rng.below(5);
    const auto p = random_simplex(rng, m);
    const auto q = random_simplex(rng, m);
    const double kl = kl_divergence(p, q);
    const double tv = tv_distance(p, q);
    const double l2 = l2_distance(p, q);
    return std::min(kl - 2.0 * tv * tv, 2.0 * tv * tv - 0.5 * l2 * l2);
  }));
  out.push_back(count_failures("properties.softmax-lipschitz", kTrials, o, [](Rng& rng) {
    const std::size_t m = 2 + rng.below(5);
    const double beta = 10.0 * rng.uniform();
    const auto r = random_vector(rng, m, 5.0);
    const auto r2 = random_vector(rng, m, 5.0);
    const auto p = boltzmann_policy(r, beta);
    const auto q = boltzmann_policy(r2, beta);
    return 0.5 * beta * linf_distance(r, r2) - linf_distance(p.probs(), q.probs());
  }));
  out.push_back(count_failures("properties.translation-invariance", kTrials, o, [](Rng& rng) {
    const std::size_t m = 2 + rng.below(5);
    const double beta = 10.0 * rng.uniform();
    const auto r = random_vector(rng, m, 5.0);
    auto shifted = r;
    const double c = 100.0 * (2.0 * rng.uniform() - 1.0);
    for (double& v : shifted) v += c;
    return 1e-12 - linf_distance(boltzmann_policy(r, beta).probs(), boltzmann_policy(shifted, beta).probs());
  }));
  out.push_back(count_failures("properties.averaging-round-trip", kTrials, o, [](Rng& rng) {
    const std::size_t m = 2 + rng.below(5);
    const double beta = 0.1 + 9.9 * rng.uniform();
    const double sigma = 4.0 * rng.uniform() - 2.0;
    std::vector<std::size_t> counts(m);
    double total = 0.0;
    for (auto& c : counts) total += static_cast<double>(c = 1 + rng.below(1000));
    const auto table = averaging_predictor_stateless(counts, beta, sigma);
    const auto p = boltzmann_policy(table.values(), beta);
    double err = 0.0;
    for (std::size_t a = 0; a < m; ++a) err = std::max(err, std::abs(p[a] - static_cast<double>(counts[a]) / total));
    return 1e-12 - err;
  }));
  out.push_back(count_failures("properties.sigma-shift", kTrials, o, [](Rng& rng) {
    const std::size_t m = 2 + rng.below(5);
    const double beta = 0.1 + 9.9 * rng.uniform();
    const double s1 = 4.0 * rng.uniform() - 2.0;
    const double s2 = 4.0 * rng.uniform() - 2.0;
    std::vector<std::size_t> counts(m);
    for (auto& c : counts) c = 1 + rng.below(1000);
    const auto a = averaging_predictor_stateless(counts, beta, s1);
    const auto b = averaging_predictor_stateless(counts, beta, s2);
    double err = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      err = std::max(err, std::abs((a[i] - b[i]) - (s1 - s2) / static_cast<double>(m)));
    }
    return 1e-9 - err;
  }));
  out.push_back(count_failures("properties.kl-to-br", kTrials, o, [](Rng& rng) {
    const std::size_t m = 2 + rng.below(3);
    const double beta = 0.5 + 4.5 * rng.uniform();
    const RewardTable truth(random_vector(rng, m, 1.0));
    std::vector<double> pred(truth.values().begin(), truth.values().end());
    const double scale = 0.3 * rng.uniform();
    for (double& v : pred) v += scale * (2.0 * rng.uniform() - 1.0);
    const RewardTable prediction(pred);
    const double kl =
        kl_divergence(boltzmann_policy(prediction.values(), beta), boltzmann_policy(truth.values(), beta));
    const auto bound = kl_to_br_perstep_bound(std::sqrt(kl / 2.0), m, beta);
    if (!bound) return std::optional<double>();
    return std::optional<double>(*bound - br_gap(truth, prediction));
  }));
  return out;
}

// ---------------------------------------------------------------------------
// Reductions.

std::vector<CheckResult> check_reductions(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  out.push_back(count_failures("reductions.average-jensen", 1000, o, [](Rng& rng) {
    const std::size_t m = 2 + rng.below(4);
    const std::size_t T = 1 + rng.below(50);
    const RewardTable truth(random_vector(rng, m, 1.0));
    std::vector<RewardTable> trace;
    for (std::size_t t = 0; t < T; ++t) trace.emplace_back(random_vector(rng, m, 2.0));
    Rng unused(0);
    const auto mean = reduce_perstep_to_final(trace, FinalReduction::kAverage, unused);
    const double lhs = static_cast<double>(T) * l2_distance(mean.values(), truth.values());
    const double rhs = norm_distance(truth, trace, Norm::kL2);
    return rhs - lhs + 1e-12 * rhs;
  }));
  out.push_back(count_failures("reductions.br-majority", 1000, o, [](Rng& rng) {
    const std::size_t m = 2 + rng.below(4);
    const std::size_t T = 1 + rng.below(50);
    const RewardTable truth(random_vector(rng, m, 1.0));
    std::vector<RewardTable> trace;
    for (std::size_t t = 0; t < T; ++t) trace.emplace_back(random_vector(rng, m, 1.0));
    Rng unused(0);
    const auto final_table = reduce_perstep_to_final(trace, FinalReduction::kBrMajority, unused);
    const double rhs = static_cast<double>(m) * d_br_stateless(truth, trace);
    return rhs - static_cast<double>(T) * br_gap(truth, final_table) + 1e-12 * rhs;
  }));
  {
    const auto start = Clock::now();
    const std::size_t T = 10000;
    const EstimateSchedule sqrt_profile{1.0, 0.5, NoiseMode::kFixedDirection};
    double lhs = 0.0;
    for (std::size_t t = 1; t <= T; ++t) lhs += std::sqrt(static_cast<double>(t)) / static_cast<double>(t);
    const double f_T = std::sqrt(static_cast<double>(T));
    const double rhs = f_T * std::log(static_cast<double>(T)) + f_T;
    CheckResult res{"reductions.log-factor", {}, lhs, rhs, 1, o.epsilon, "sum f(t)/t vs f(T)(ln T + 1), f = sqrt", 0.0};
    out.push_back(finish(res, lhs <= rhs, start));
    double power_sum = 0.0;
    for (std::size_t t = 1; t <= T; ++t) power_sum += sqrt_profile.error_at(t);
    const double refined = sqrt_profile.cumulative_bound(static_cast<double>(T));
    CheckResult poly{"reductions.polynomial-refinement", {}, power_sum, refined, 1, o.epsilon,
                     "sum t^(alpha-1) vs 1 + (T^alpha - 1)/alpha, alpha = 0.5", 0.0};
    out.push_back(finish(poly, power_sum <= refined, start));
  }
  {
    // A final predictor whose answer after n observations is off by exactly
    // 0.9 f(n+1)/(n+1); the per-step trace must inherit the f(t)/t rate.
    const auto start = Clock::now();
    const RewardTable truth({0.7, 0.1, 0.4});
    const EstimateSchedule profile{1.0, 0.5, NoiseMode::kFixedDirection};
    const FinalPredictor final_predictor = [&](const BehaviorLog& prefix) {
      const double n = static_cast<double>(prefix.size() + 1);
      std::vector<double> r(truth.values().begin(), truth.values().end());
      const double off = 0.9 * profile.cumulative_bound(n) / n;
      for (std::size_t a = 0; a < r.size(); ++a) r[a] += (a % 2 == 0 ? off : -off);
      return RewardTable(std::move(r));
    };
    BehaviorLog log(1, 3);
    for (std::size_t t = 0; t < 10000; ++t) log.record(0, t % 3);
    const auto trace = reduce_final_to_perstep(final_predictor, log);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t <= trace.size(); ++t) {
      const double d = linf_distance(trace[t - 1].values(), truth.values());
      worst = std::max(worst, d - profile.cumulative_bound(static_cast<double>(t)) / static_cast<double>(t));
    }
    CheckResult res{"reductions.final-to-perstep", {}, worst, 0.0, 1, o.epsilon,
                    "max over t of d(R_t, R*) - f(t)/t", 0.0};
    out.push_back(finish(res, worst <= 0.0, start));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coverage.

std::vector<CheckResult> check_coverage(const VerifyOptions& o) {
  const auto start = Clock::now();
  const std::size_t seeds = seeds_or(o, 500);
  const auto scenario = scenarios::linf_stateless(1000, o.epsilon);
  const auto full = azuma_coverage(scenario, seeds, 1.0, o.parallelism);
  CheckResult res{"coverage", {}, full.fraction(), 1.0 - o.epsilon, seeds, o.epsilon,
                  "joint coverage of the concentration radius over all actions and t", 0.0};
  std::vector<CheckResult> out{finish(res, full.fraction() >= 1.0 - o.epsilon, start)};
  const auto half_start = Clock::now();
  const auto half = azuma_coverage(scenario, seeds, 0.5, o.parallelism);
  CheckResult shrink{"coverage.half-radius", {}, half.fraction(), full.fraction(), seeds, o.epsilon,
                     "coverage with the radius halved must not exceed full coverage", 0.0};
  out.push_back(finish(shrink, half.fraction() <= full.fraction(), half_start));
  return out;
}

// ---------------------------------------------------------------------------
// Oracle equivalence and exhaustive enumeration.

std::vector<PolicyTable> to_tables(const std::vector<std::vector<oracle::Vec>>& raw) {
  std::vector<PolicyTable> out;
  for (const auto& step : raw) {
    PolicyTable table;
    for (const auto& row : step) table.emplace_back(row);
    out.push_back(std::move(table));
  }
  return out;
}

std::vector<CheckResult> check_oracle(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  {
    const auto start = Clock::now();
    std::size_t failed = 0;
    std::ostringstream detail;
    const auto cases = oracle_cases();
    for (const auto& c : cases) {
      const auto outcome = evaluate_oracle(c);
      if (!outcome.passed) {
        ++failed;
        detail << c.name << " ";
      }
    }
    CheckResult res{"oracle.values", {}, static_cast<double>(failed), 0.0, 1, o.epsilon,
                    std::to_string(cases.size()) + " reference values; failing: " + detail.str(), 0.0};
    out.push_back(finish(res, failed == 0, start));
  }
  {
    const auto start = Clock::now();
    Rng rng(kPropertySeed);
    double worst = 0.0;
    std::size_t instances = 0;
    for (std::size_t S = 1; S <= 3; ++S) {
      for (std::size_t A = 1; A <= 3; ++A) {
        for (bool terminal : {false, true}) {
          const Mdp mdp = oracle::random_mdp(S, A, terminal, rng.next());
          for (std::size_t H = 1; H <= 4; ++H) {
            ++instances;
            worst = std::max(worst, std::abs(finite_horizon_optimal_return(mdp, H) -
                                             oracle::enumerate_optimal_return(mdp, H)));
            std::vector<std::vector<oracle::Vec>> policies(H);
            std::vector<std::vector<oracle::Vec>> tables(H);
            std::vector<StatefulPrediction> trace;
            for (std::size_t t = 0; t < H; ++t) {
              QTable q(S, A, 0.0);
              for (std::size_t s = 0; s < S; ++s) {
                policies[t].push_back(random_simplex(rng, A));
                tables[t].push_back(random_vector(rng, A, 1.0));
                for (std::size_t a = 0; a < A; ++a) q.at(s, a) = tables[t][s][a];
              }
              trace.push_back({q, std::vector<bool>(S, true)});
            }
            const auto steps = expected_step_rewards(mdp, to_tables(policies));
            const auto brute = oracle::enumerate_step_rewards(mdp, policies);
            for (std::size_t t = 0; t < H; ++t) worst = std::max(worst, std::abs(steps[t] - brute[t]));
            worst = std::max(worst, std::abs(d_br_stateful(mdp, trace, H) - oracle::enumerate_d_br(mdp, tables)));
          }
        }
      }
    }
    CheckResult res{"oracle.enumeration", {}, worst, 1e-9, instances, o.epsilon,
                    "largest gap between propagation and exhaustive enumeration (|S|,|A| <= 3, H <= 4)", 0.0};
    out.push_back(finish(res, worst <= 1e-9, start));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Seed-free checks.

std::vector<CheckResult> check_deterministic(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  {
    const auto start = Clock::now();
    bool ok = true;
    for (std::size_t m = 1; m <= 5 && ok; ++m) {
      BehaviorLog log(1, m);
      ok = argmax(best_response_predictor(log).values()) == 0;
      for (std::size_t t = 0; t < 3 * m && ok; ++t) {
        log.record(0, (t * 7) % m);
        ok = argmax(best_response_predictor(log).values()) == log.actions().back();
      }
    }
    out.push_back(finish({"deterministic.indicator", {}, ok ? 1.0 : 0.0, 1.0, 0, o.epsilon,
                          "best-response argmax equals the previous action", 0.0},
                         ok, start));
  }
  {
    const auto start = Clock::now();
    double worst = 0.0;
    for (std::size_t a = 1; a <= 6; ++a) {
      for (std::size_t b = 1; b <= 6; ++b) {
        for (std::size_t c = 1; c <= 6; ++c) {
          const std::vector<std::size_t> counts{a, b, c};
          const double n = static_cast<double>(a + b + c);
          for (double beta : {0.25, 1.0, 4.0}) {
            const auto p = boltzmann_policy(averaging_predictor_stateless(counts, beta, 1.0).values(), beta);
            for (std::size_t i = 0; i < 3; ++i) {
              worst = std::max(worst, std::abs(p[i] - static_cast<double>(counts[i]) / n));
            }
          }
        }
      }
    }
    out.push_back(finish({"deterministic.round-trip", {}, worst, 1e-12, 0, o.epsilon,
                          "averaging round-trip error over a grid of counts", 0.0},
                         worst <= 1e-12, start));
  }
  {
    const auto start = Clock::now();
    // Triangle inequality on structured traces: D(R*, A) <= D(R*, B) + sum ||A_t - B_t||.
    double worst = -std::numeric_limits<double>::infinity();
    const RewardTable truth({0.3, -0.2, 0.9});
    for (Norm which : {Norm::kL2, Norm::kLinf}) {
      for (std::size_t k = 1; k <= 20; ++k) {
        std::vector<RewardTable> a;
        std::vector<RewardTable> b;
        double between = 0.0;
        for (std::size_t t = 1; t <= 25; ++t) {
          const double x = static_cast<double>(t * k);
          a.emplace_back(std::vector<double>{std::sin(x), std::cos(x), std::sin(2 * x)});
          b.emplace_back(std::vector<double>{std::cos(x / 3), std::sin(x / 5), 0.5});
          between += which == Norm::kL2 ? l2_distance(a.back().values(), b.back().values())
                                        : linf_distance(a.back().values(), b.back().values());
        }
        const double lhs = norm_distance(truth, a, which);
        const double rhs = norm_distance(truth, b, which) + between;
        worst = std::max(worst, lhs - rhs - 1e-12 * rhs);
      }
    }
    out.push_back(finish({"deterministic.triangle", {}, worst, 0.0, 0, o.epsilon,
                          "largest triangle-inequality violation", 0.0},
                         worst <= 0.0, start));
  }
  out.push_back(check_impossibility(o));
  for (auto& r : check_reductions(o)) {
    if (r.name != "reductions.average-jensen" && r.name != "reductions.br-majority") out.push_back(std::move(r));
  }
  return out;
}

using SuiteFn = std::function<std::vector<CheckResult>(const VerifyOptions&)>;

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"br-stateless", [](const VerifyOptions& o) { return std::vector<CheckResult>{check_br_stateless(o)}; }},
      {"br-stateful", [](const VerifyOptions& o) { return std::vector<CheckResult>{check_br_stateful(o)}; }},
      {"linf-stateless", [](const VerifyOptions& o) { return std::vector<CheckResult>{check_linf_stateless(o)}; }},
      {"linf-rate", [](const VerifyOptions& o) { return std::vector<CheckResult>{check_linf_rate(o)}; }},
      {"linf-stateful", [](const VerifyOptions& o) { return std::vector<CheckResult>{check_linf_stateful(o)}; }},
      {"impossibility", [](const VerifyOptions& o) { return std::vector<CheckResult>{check_impossibility(o)}; }},
      {"properties", check_properties},
      {"reductions", check_reductions},
      {"coverage", check_coverage},
      {"oracle", check_oracle},
      {"deterministic", check_deterministic},
  };
  return table;
}

}  // namespace

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kNotApplicable: return "not-applicable";
  }
  return "unknown";
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : suites()) names.push_back(name);
  names.emplace_back("all");
  return names;
}

std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& options) {
  if (!(options.epsilon > 0.0 && options.epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  if (options.seeds && *options.seeds == 0) throw InvalidArgument("seed count must be positive");
  std::vector<CheckResult> results;
  bool found = false;
  for (const auto& [name, fn] : suites()) {
    if (suite == "all" ? name == "deterministic" : name != suite) continue;  // deterministic is a subset of all
    found = true;
    for (auto& r : fn(options)) results.push_back(std::move(r));
  }
  if (!found && suite != "all") {
    std::string message = "unknown suite '" + std::string(suite) + "'; available:";
    for (const auto& name : suite_names()) message += " " + name;
    throw InvalidArgument(message);
  }
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::none_of(results.begin(), results.end(),
                      [](const CheckResult& r) { return r.status == CheckStatus::kFail; });
}

nlohmann::json report_to_json(std::string_view suite, const VerifyOptions& options,
                              const std::vector<CheckResult>& results) {
  nlohmann::json doc;
  doc["suite"] = std::string(suite);
  doc["epsilon"] = options.epsilon;
  doc["passed"] = all_passed(results);
  auto checks = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json item;
    item["name"] = r.name;
    item["status"] = std::string(to_string(r.status));
    item["measured"] = std::isfinite(r.measured) ? nlohmann::json(r.measured) : nlohmann::json(nullptr);
    item["bound"] = std::isfinite(r.bound) ? nlohmann::json(r.bound) : nlohmann::json(nullptr);
    item["seeds"] = r.seeds;
    item["epsilon"] = r.epsilon;
    item["detail"] = r.detail;
    item["seconds"] = r.seconds;
    checks.push_back(std::move(item));
  }
  doc["checks"] = std::move(checks);
  return doc;
}

}  // namespace prefwatch
