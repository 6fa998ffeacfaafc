#include "prefwatch/oracle.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace prefwatch::oracle {

Vec softmax(const Vec& values, double beta) {
  double top = values[0];
  for (double v : values) top = v > top ? v : top;
  Vec out;
  double z = 0.0;
  for (double v : values) {
    out.push_back(std::exp(beta * (v - top)));
    z += out.back();
  }
  for (double& p : out) p /= z;
  return out;
}

double kl(const Vec& p, const Vec& q) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) total += p[i] * std::log(p[i] / q[i]);
  }
  return total;
}

Vec averaging_closed_form(const std::vector<std::size_t>& counts, double beta, double sigma) {
  double n = 0.0;
  for (auto c : counts) n += static_cast<double>(c);
  const double m = static_cast<double>(counts.size());
  double mean = 0.0;
  for (auto c : counts) mean += std::log(static_cast<double>(c) / n) / m;
  Vec out;
  for (auto c : counts) out.push_back((std::log(static_cast<double>(c) / n) - mean) / beta + sigma / m);
  return out;
}

double radius(std::size_t t, std::size_t actions, std::size_t states, std::size_t horizon, double epsilon) {
  const double inside = 2.0 * static_cast<double>(states * actions * (horizon - 1)) / epsilon;
  return std::sqrt(2.0 * std::log(inside) / static_cast<double>(t - 1));
}

double kl_to_br(double delta, std::size_t actions, double beta) {
  const double md = static_cast<double>(actions) * delta;
  return std::log((1.0 + md) / (1.0 - md)) / beta;
}

double power_partial_sum(std::size_t n, double alpha) {
  double total = 0.0;
  for (std::size_t t = 1; t <= n; ++t) total += std::pow(static_cast<double>(t), alpha - 1.0);
  return total;
}

double sqrt_over_t_partial_sum(std::size_t n) {
  double total = 0.0;
  for (std::size_t t = 1; t <= n; ++t) total += 1.0 / std::sqrt(static_cast<double>(t));
  return total;
}

double constant_kappa_bound(std::size_t horizon, std::size_t actions, double epsilon, double beta, double kappa) {
  double total = 0.0;
  for (std::size_t t = 2; t <= horizon; ++t) {
    const double k = static_cast<double>(t - 1);
    total += (2.0 / beta) * radius(t, actions, 1, horizon, epsilon) / kappa;
    total += std::sqrt(k) / k / kappa;
  }
  return total;
}

namespace {

struct Plain {
  std::size_t S, A;
  std::vector<std::vector<Vec>> P;  // P[s][a][s']
  Vec init;
  std::vector<Vec> R;
};

Plain flatten(const Mdp& mdp) {
  Plain p{mdp.num_states(), mdp.num_actions(), {}, {}, {}};
  p.P.assign(p.S, std::vector<Vec>(p.A));
  p.R.assign(p.S, Vec(p.A));
  for (std::size_t s = 0; s < p.S; ++s) {
    for (std::size_t a = 0; a < p.A; ++a) {
      const auto row = mdp.transition(s, a);
      p.P[s][a].assign(row.begin(), row.end());
      p.R[s][a] = mdp.reward(s, a);
    }
  }
  p.init.assign(mdp.initial_dist().begin(), mdp.initial_dist().end());
  return p;
}

// Expected return of a deterministic time-indexed policy, walking state paths.
double path_return(const Plain& m, const std::vector<std::size_t>& choice, std::size_t horizon) {
  std::function<double(std::size_t, std::size_t)> walk = [&](std::size_t t, std::size_t s) -> double {
    const std::size_t a = choice[t * m.S + s];
    double v = m.R[s][a];
    if (t + 1 == horizon) return v;
    for (std::size_t n = 0; n < m.S; ++n) {
      if (m.P[s][a][n] > 0.0) v += m.P[s][a][n] * walk(t + 1, n);
    }
    return v;
  };
  double total = 0.0;
  for (std::size_t s = 0; s < m.S; ++s) {
    if (m.init[s] > 0.0) total += m.init[s] * walk(0, s);
  }
  return total;
}

}  // namespace

double enumerate_optimal_return(const Mdp& mdp, std::size_t horizon) {
  const Plain m = flatten(mdp);
  std::vector<std::size_t> choice(horizon * m.S, 0);
  double best = -INFINITY;
  while (true) {
    const double v = path_return(m, choice, horizon);
    best = v > best ? v : best;
    std::size_t i = 0;
    while (i < choice.size() && ++choice[i] == m.A) choice[i++] = 0;
    if (i == choice.size()) break;
  }
  return best;
}

Vec enumerate_step_rewards(const Mdp& mdp, const std::vector<std::vector<Vec>>& policies) {
  const Plain m = flatten(mdp);
  const std::size_t horizon = policies.size();
  Vec out(horizon, 0.0);
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t t, std::size_t s, double prob) {
    for (std::size_t a = 0; a < m.A; ++a) {
      const double pa = prob * policies[t][s][a];
      if (pa == 0.0) continue;
      out[t] += pa * m.R[s][a];
      if (t + 1 == horizon) continue;
      for (std::size_t n = 0; n < m.S; ++n) {
        if (m.P[s][a][n] > 0.0) walk(t + 1, n, pa * m.P[s][a][n]);
      }
    }
  };
  for (std::size_t s = 0; s < m.S; ++s) {
    if (m.init[s] > 0.0 && horizon > 0) walk(0, s, m.init[s]);
  }
  return out;
}

double enumerate_d_br(const Mdp& mdp, const std::vector<std::vector<Vec>>& tables) {
  std::vector<std::vector<Vec>> greedy;
  for (const auto& table : tables) {
    std::vector<Vec> policy;
    for (const auto& row : table) {
      std::size_t best = 0;
      for (std::size_t a = 1; a < row.size(); ++a) {
        if (row[a] > row[best]) best = a;
      }
      Vec p(row.size(), 0.0);
      p[best] = 1.0;
      policy.push_back(p);
    }
    greedy.push_back(policy);
  }
  double achieved = 0.0;
  for (double r : enumerate_step_rewards(mdp, greedy)) achieved += r;
  return enumerate_optimal_return(mdp, tables.size()) - achieved;
}

Mdp random_mdp(std::size_t states, std::size_t actions, bool with_terminal, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t terminal = states - 1;
  std::vector<double> transition;
  std::vector<double> reward;
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t a = 0; a < actions; ++a) {
      Vec row(states);
      if (with_terminal && states > 1 && s == terminal) {
        row.assign(states, 0.0);
        row[terminal] = 1.0;
        reward.push_back(0.0);
      } else {
        double z = 0.0;
        for (double& p : row) z += (p = u(gen) < 0.3 ? 0.0 : u(gen));
        if (z == 0.0) {
          row[0] = 1.0;
          z = 1.0;
        }
        for (double& p : row) p /= z;
        reward.push_back(u(gen));
      }
      transition.insert(transition.end(), row.begin(), row.end());
    }
  }
  Vec init(states, 0.0);
  const std::size_t starts = with_terminal && states > 1 ? states - 1 : states;
  double z = 0.0;
  for (std::size_t s = 0; s < starts; ++s) z += (init[s] = u(gen) + 0.1);
  for (double& p : init) p /= z;
  std::vector<std::size_t> terminals;
  if (with_terminal && states > 1) terminals.push_back(terminal);
  return Mdp(states, actions, std::move(transition), std::move(init), std::move(terminals),
             QTable(states, actions, std::move(reward)));
}

}  // namespace prefwatch::oracle
