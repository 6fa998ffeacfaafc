#include <algorithm>
#include <cmath>
#include <limits>

#include "prefwatch/bounds.hpp"
#include "prefwatch/env.hpp"
#include "prefwatch/harness.hpp"
#include "prefwatch/learners.hpp"
#include "prefwatch/measures.hpp"
#include "prefwatch/oracle.hpp"
#include "prefwatch/predictors.hpp"
#include "prefwatch/rng.hpp"
#include "prefwatch/simulation.hpp"
#include "prefwatch/verify.hpp"

namespace prefwatch {
namespace {

using Compare = OracleCase::Compare;
constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

Mdp two_step_chain() {
  // s0 -> s1 -> s2 (terminal) under every action.
  std::vector<double> p = {0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1};
  return Mdp(3, 2, p, {1, 0, 0}, {2}, QTable(3, 2, {0.3, 0.7, 0.5, 0.9, 0, 0}));
}

std::vector<std::vector<oracle::Vec>> uniform_policies(std::size_t S, std::size_t A, std::size_t H) {
  return std::vector<std::vector<oracle::Vec>>(H, std::vector<oracle::Vec>(S, oracle::Vec(A, 1.0 / A)));
}

ExperimentConfig bandit_run(std::vector<double> rewards, LearnerModel learner, PredictorKind predictor,
                            std::size_t horizon) {
  ExperimentConfig c;
  c.name = "oracle";
  c.environment.bandit = RewardTable(std::move(rewards));
  c.learner = std::move(learner);
  c.predictor.kind = predictor;
  c.measures = {MeasureKind::kBr};
  c.horizon = horizon;
  return c;
}

double uniform_coverage(double scale) {
  auto c = bandit_run({0.8, 0.5, 0.2}, LearnerModel::boltzmann_synthesized(0.0, {0.0, 0.5, NoiseMode::kFixedDirection}),
                      PredictorKind::kAveraging, 1000);
  c.predictor.beta = 1.0;
  return azuma_coverage(c, 500, scale).fraction();
}

}  // namespace

std::vector<OracleCase> oracle_cases() {
  std::vector<OracleCase> cases;
  auto add = [&](std::string name, std::string description, double expected, double tolerance, Compare compare,
                 std::function<double()> independent, std::function<double()> library = nullptr) {
    cases.push_back({std::move(name), std::move(description), expected, tolerance, compare, std::move(independent),
                     std::move(library)});
  };

  add("softmax-1-0", "boltzmann_policy((1,0), 1)[0]", 0.7311, 5e-5, Compare::kNear,
      [] { return oracle::softmax({1.0, 0.0}, 1.0)[0]; },
      [] { return boltzmann_policy(std::vector<double>{1.0, 0.0}, 1.0)[0]; });
  add("q-star-two-step-chain", "Q*(s0,a0) on s0 -> s1 -> terminal", 1.2, 1e-9, Compare::kNear,
      [] { return 0.3 + std::max(0.5, 0.9); }, [] { return solve_q_star(two_step_chain()).at(0, 0); });
  add("finite-horizon-enumeration", "optimal 3-step return on a 2-state MDP vs policy enumeration", kNone, 1e-9,
      Compare::kNear, [] { return oracle::enumerate_optimal_return(oracle::random_mdp(2, 2, false, 11), 3); },
      [] { return finite_horizon_optimal_return(oracle::random_mdp(2, 2, false, 11), 3); });
  add("sample-transition-frequency", "frequency of state 1 from row (0.5, 0.5) over 1e5 draws", 0.5, 0.01,
      Compare::kNear, [] {
        const Mdp mdp(2, 1, {0.5, 0.5, 0.5, 0.5}, {1, 0}, {}, QTable(2, 1, 0.0));
        Rng rng(7);
        std::size_t ones = 0;
        for (int i = 0; i < 100000; ++i) ones += sample_transition(mdp, 0, 0, rng);
        return ones / 1e5;
      });
  add("explore-then-commit-trace", "mismatches against actions (0, 1, 0, 0, ...) on R* = (1, 0.5)", 0.0, 0.0,
      Compare::kNear, [] {
        const auto sim = simulate(bandit_run({1.0, 0.5}, LearnerModel::explore_then_commit(),
                                             PredictorKind::kBestResponse, 20),
                                  0);
        double mismatches = 0;
        for (std::size_t t = 1; t <= 20; ++t) mismatches += sim.history.behavior().action(t) != (t == 2 ? 1u : 0u);
        return mismatches;
      });
  add("estimate-partial-sum", "sum_{t<=100} t^(-1/2)", 18.59, 0.005, Compare::kNear,
      [] { return oracle::power_partial_sum(100, 0.5); }, [] {
        const EstimateSchedule s{1.0, 0.5, NoiseMode::kFixedDirection};
        double total = 0.0;
        for (std::size_t t = 1; t <= 100; ++t) total += s.error_at(t);
        return total;
      });
  add("estimate-partial-sum-bound", "sum_{t<=100} t^(-1/2) <= 2 sqrt(100)", 20.0, 0.0, Compare::kAtMost,
      [] { return oracle::power_partial_sum(100, 0.5); });
  add("random-direction-magnitude", "max deviation of |R_hat - R*|_inf from c t^(alpha-1) over 1e3 draws", 0.0, 1e-12,
      Compare::kNear, [] {
        const EstimateSchedule s{1.0, 0.5, NoiseMode::kRandomDirection};
        const RewardTable truth({0.8, 0.5, 0.2});
        Rng rng(3);
        double worst = 0.0;
        for (std::size_t t = 1; t <= 1000; ++t) {
          const auto est = synthesize_estimate(truth, t, s, rng);
          worst = std::max(worst, std::abs(linf_distance(est.values(), truth.values()) - s.error_at(t)));
        }
        return worst;
      });
  add("regret-constant", "constant action 1 on R* = (1, 0), T = 7", 7.0, 1e-12, Compare::kNear,
      [] { return 7.0 * (1.0 - 0.0); }, [] {
        const auto sim = simulate(bandit_run({1.0, 0.0}, LearnerModel::constant_action(1),
                                             PredictorKind::kBestResponse, 7),
                                  0);
        return measured_regret_stateless(sim.history, RewardTable({1.0, 0.0}));
      });
  add("regret-explore-then-commit", "explore-then-commit on R* = (1, 0.5), T = 10", 0.5, 1e-12, Compare::kNear,
      [] { return 1.0 - 0.5; }, [] {
        const auto sim = simulate(bandit_run({1.0, 0.5}, LearnerModel::explore_then_commit(),
                                             PredictorKind::kBestResponse, 10),
                                  0);
        return measured_regret_stateless(sim.history, RewardTable({1.0, 0.5}));
      });
  add("policy-regret-enumeration", "uniform policies, 2 states, horizon 3, vs trajectory enumeration", kNone, 1e-9,
      Compare::kNear, [] {
        const Mdp mdp = oracle::random_mdp(2, 2, true, 5);
        double achieved = 0.0;
        for (double r : oracle::enumerate_step_rewards(mdp, uniform_policies(2, 2, 3))) achieved += r;
        return oracle::enumerate_optimal_return(mdp, 3) - achieved;
      },
      [] {
        const Mdp mdp = oracle::random_mdp(2, 2, true, 5);
        std::vector<PolicyTable> seq(3, PolicyTable(2, PolicyDist::uniform(2)));
        return measured_policy_regret(seq, mdp, 3);
      });
  const std::vector<std::size_t> counts{2, 1, 1};
  add("averaging-2-1-1-first", "averaging((2,1,1), beta 1, sigma 0)[0]", 0.4621, 5e-5, Compare::kNear,
      [=] { return oracle::averaging_closed_form(counts, 1.0, 0.0)[0]; },
      [=] { return averaging_predictor_stateless(counts, 1.0, 0.0)[0]; });
  add("averaging-2-1-1-second", "averaging((2,1,1), beta 1, sigma 0)[1]", -0.2310, 5e-5, Compare::kNear,
      [=] { return oracle::averaging_closed_form(counts, 1.0, 0.0)[1]; },
      [=] { return averaging_predictor_stateless(counts, 1.0, 0.0)[1]; });
  add("averaging-stateful-row", "stateful row with counts (2,1,1), entry 0", 0.4621, 5e-5, Compare::kNear,
      [=] { return oracle::averaging_closed_form(counts, 1.0, 0.0)[0]; }, [] {
        const std::vector<std::size_t> flat{3, 3, 3, 2, 1, 1};
        return averaging_predictor_stateful(flat, 3, 1.0, std::vector<double>{0.0, 0.0}).values.at(1, 0);
      });
  add("br-majority", "argmax of the majority indicator for argmaxes (a0, a0, a1)", 0.0, 0.0, Compare::kNear,
      [] { return 0.0; }, [] {
        std::vector<RewardTable> trace{RewardTable({1, 0}), RewardTable({1, 0}), RewardTable({0, 1})};
        Rng unused(0);
        return static_cast<double>(argmax(reduce_perstep_to_final(trace, FinalReduction::kBrMajority, unused).values()));
      });
  add("average-jensen", "min over 1e3 random traces of sum d(R_t,R*) - T d(mean,R*)", 0.0, 0.0, Compare::kAtLeast,
      [] {
        Rng rng(17);
        double worst = std::numeric_limits<double>::infinity();
        for (int trial = 0; trial < 1000; ++trial) {
          const std::size_t T = 1 + rng.below(30);
          oracle::Vec truth{rng.uniform(), rng.uniform(), rng.uniform()};
          oracle::Vec mean(3, 0.0);
          double sum = 0.0;
          for (std::size_t t = 0; t < T; ++t) {
            oracle::Vec r{rng.uniform(), rng.uniform(), rng.uniform()};
            double d = 0.0;
            for (int a = 0; a < 3; ++a) {
              d += (r[a] - truth[a]) * (r[a] - truth[a]);
              mean[a] += r[a] / T;
            }
            sum += std::sqrt(d);
          }
          double dm = 0.0;
          for (int a = 0; a < 3; ++a) dm += (mean[a] - truth[a]) * (mean[a] - truth[a]);
          worst = std::min(worst, sum - T * std::sqrt(dm) + 1e-12 * sum);
        }
        return worst;
      });
  add("log-factor-sum", "sum_{t<=1e4} sqrt(t)/t against f(T) ln T + f(T) = 1021.03", 100.0 * (std::log(1e4) + 1.0),
      0.0, Compare::kAtMost, [] { return oracle::sqrt_over_t_partial_sum(10000); });
  add("kl-example", "KL((0.2689, 0.7311) || (0.7311, 0.2689))", 0.4621, 5e-5, Compare::kNear,
      [] { return oracle::kl(oracle::softmax({0.0, 1.0}, 1.0), oracle::softmax({1.0, 0.0}, 1.0)); },
      [] {
        return kl_divergence(boltzmann_policy(std::vector<double>{0.0, 1.0}, 1.0),
                             boltzmann_policy(std::vector<double>{1.0, 0.0}, 1.0));
      });
  add("pinsker-chain", "min over 1e4 random pairs of min(KL - 2 TV^2, 2 TV^2 - l2^2/2)", 0.0, 0.0, Compare::kAtLeast,
      [] {
        Rng rng(23);
        double worst = std::numeric_limits<double>::infinity();
        for (int trial = 0; trial < 10000; ++trial) {
          oracle::Vec p(4);
          oracle::Vec q(4);
          double zp = 0.0;
          double zq = 0.0;
          for (int i = 0; i < 4; ++i) {
            zp += (p[i] = rng.uniform() + 1e-3);
            zq += (q[i] = rng.uniform() + 1e-3);
          }
          double l1 = 0.0;
          double l2 = 0.0;
          for (int i = 0; i < 4; ++i) {
            p[i] /= zp;
            q[i] /= zq;
            l1 += std::abs(p[i] - q[i]);
            l2 += (p[i] - q[i]) * (p[i] - q[i]);
          }
          const double tv = 0.5 * l1;
          worst = std::min({worst, oracle::kl(p, q) - 2 * tv * tv, 2 * tv * tv - 0.5 * l2});
        }
        return worst;
      });
  add("d-br-stateless-example", "R* = (1,0), every R_t argmaxing action 1, T = 5", 5.0, 1e-12, Compare::kNear,
      [] { return 5.0 * (1.0 - 0.0); },
      [] { return d_br_stateless(RewardTable({1, 0}), std::vector<RewardTable>(5, RewardTable({0, 1}))); });
  add("d-br-stateful-enumeration", "d_br_stateful on a 3-state MDP, horizon 4, vs enumeration", kNone, 1e-9,
      Compare::kNear, [] {
        const Mdp mdp = oracle::random_mdp(3, 2, true, 29);
        std::vector<std::vector<oracle::Vec>> tables(4, {{0.1, 0.9}, {0.8, 0.2}, {0.0, 0.0}});
        tables[2] = {{0.7, 0.3}, {0.4, 0.6}, {1.0, 0.0}};
        return oracle::enumerate_d_br(mdp, tables);
      },
      [] {
        const Mdp mdp = oracle::random_mdp(3, 2, true, 29);
        std::vector<StatefulPrediction> trace(
            4, {QTable(3, 2, {0.1, 0.9, 0.8, 0.2, 0.0, 0.0}), std::vector<bool>(3, true)});
        trace[2].values = QTable(3, 2, {0.7, 0.3, 0.4, 0.6, 1.0, 0.0});
        return d_br_stateful(mdp, trace, 4);
      });
  add("d-klbp-example", "T = 1, R* = (1,0), R_1 = (0,1), beta 1", 0.4621, 5e-5, Compare::kNear,
      [] { return oracle::kl(oracle::softmax({0.0, 1.0}, 1.0), oracle::softmax({1.0, 0.0}, 1.0)); },
      [] { return d_klbp(RewardTable({1, 0}), std::vector<RewardTable>{RewardTable({0, 1})}, 1.0); });
  add("norms-unit-l2", "R* = (1,0,0), R_t = 0, T = 10, l2", 10.0, 1e-12, Compare::kNear, [] { return 10.0; },
      [] {
        return norm_distance(RewardTable({1, 0, 0}), std::vector<RewardTable>(10, RewardTable::zeros(3)), Norm::kL2);
      });
  add("norms-unit-linf", "R* = (1,0,0), R_t = 0, T = 10, linf", 10.0, 1e-12, Compare::kNear, [] { return 10.0; },
      [] {
        return norm_distance(RewardTable({1, 0, 0}), std::vector<RewardTable>(10, RewardTable::zeros(3)),
                             Norm::kLinf);
      });
  add("concentration-radius", "|A| = 2, T = 101, eps = 0.1, t = 101", 0.4073, 5e-5, Compare::kNear,
      [] { return oracle::radius(101, 2, 1, 101, 0.1); }, [] { return concentration_radius(101, 2, 1, 101, 0.1); });
  add("linf-bound-partial-sum", "constant kappa 0.2, f = sqrt, T = 1e4", kNone, 1e-6, Compare::kNear,
      [] { return oracle::constant_kappa_bound(10000, 3, 0.1, 2.0, 0.2); }, [] {
        const std::size_t T = 10000;
        BoundInputs in;
        in.horizon = T;
        in.epsilon = 0.1;
        in.beta = 2.0;
        in.action_count = 3;
        in.kappa = {std::vector<double>(T, 0.2)};
        in.exploration_time = {std::size_t{2}};
        in.f = [](double n) { return std::sqrt(n); };
        return linfty_bound(in, false).total();
      });
  add("azuma-uniform", "coverage of a uniform learner, 500 seeds, T = 1000", 0.9, 0.0, Compare::kAtLeast,
      [] { return uniform_coverage(1.0); });
  add("azuma-half-radius", "coverage(radius/2) - coverage(radius)", 0.0, 0.0, Compare::kAtMost,
      [] { return uniform_coverage(0.5) - uniform_coverage(1.0); });
  add("adversarial-norm-2", "||R1 - R2||_2 for |A| = 2", 0.7071, 5e-5, Compare::kNear,
      [] { return std::sqrt(0.5); }, [] {
        const auto [a, b] = adversarial_pair(2);
        return l2_distance(a.values(), b.values());
      });
  add("adversarial-bound-2", "(T/2) ||R1 - R2||_2 for |A| = 2, T = 10", 3.5355, 5e-5, Compare::kNear,
      [] { return 5.0 * std::sqrt(0.5); }, [] { return impossibility_lower_bound(2, 10); });
  add("adversarial-norm-4", "||R1 - R2||_2 for |A| = 4", 0.8660, 5e-5, Compare::kNear,
      [] { return std::sqrt(0.75); }, [] {
        const auto [a, b] = adversarial_pair(4);
        return l2_distance(a.values(), b.values());
      });
  add("kl-to-br", "delta 0.1, |A| = 2, beta 1", 0.4055, 5e-5, Compare::kNear,
      [] { return oracle::kl_to_br(0.1, 2, 1.0); }, [] { return kl_to_br_perstep_bound(0.1, 2, 1.0).value(); });
  add("constant-br-run", "constant optimal learner with the best-response predictor, R* = (1,0)", 1.0, 0.0,
      Compare::kAtMost, [] {
        const auto c = bandit_run({1.0, 0.0}, LearnerModel::constant_action(0), PredictorKind::kBestResponse, 50);
        const auto record = run_experiment(c, 0);
        return record.summary.final_measures.at(0);
      });
  add("sweep-canonical", "4 configs x 50 seeds, canonical order (count, or -1 if unordered)", 200.0, 0.0,
      Compare::kNear, [] {
        std::vector<ExperimentConfig> grid;
        for (double top : {0.9, 0.8, 0.7, 0.6}) {
          auto c = bandit_run({top, 0.5, 0.1}, LearnerModel::explore_then_commit(), PredictorKind::kBestResponse, 20);
          c.seeds.clear();
          for (std::uint64_t s = 50; s-- > 0;) c.seeds.push_back(s);
          grid.push_back(c);
        }
        const auto entries = sweep(grid, 2);
        const bool ordered = std::is_sorted(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
          return a.config_hash != b.config_hash ? a.config_hash < b.config_hash : a.seed < b.seed;
        });
        return ordered ? static_cast<double>(entries.size()) : -1.0;
      });
  return cases;
}

OracleOutcome evaluate_oracle(const OracleCase& c) {
  OracleOutcome out;
  out.name = c.name;
  out.expected = c.expected;
  out.tolerance = c.tolerance;
  out.independent = c.independent();
  if (c.library) out.library = c.library();
  bool ok = true;
  if (!std::isnan(c.expected)) {
    switch (c.compare) {
      case Compare::kNear: ok = std::abs(out.independent - c.expected) <= c.tolerance; break;
      case Compare::kAtMost: ok = out.independent <= c.expected + c.tolerance; break;
      case Compare::kAtLeast: ok = out.independent >= c.expected - c.tolerance; break;
    }
  }
  if (out.library) {
    const double agree = std::isnan(c.expected) ? c.tolerance : 1e-9;
    ok = ok && std::abs(*out.library - out.independent) <= agree;
  }
  out.passed = ok;
  return out;
}

}  // namespace prefwatch
