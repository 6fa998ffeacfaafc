#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "prefwatch/verify.hpp"

namespace {

using prefwatch::CheckResult;
using prefwatch::CheckStatus;

struct Criterion {
  int number;
  std::string title;
  std::vector<std::string> suites;
  std::optional<double> runtime_limit_seconds;
};

const std::vector<Criterion> kCriteria = {
    {1, "best-response guarantee, bandit", {"br-stateless"}, 10.0},
    {2, "best-response guarantee, MDPs", {"br-stateful"}, 60.0},
    {3, "l-infinity bound coverage, bandit", {"linf-stateless"}, 120.0},
    {4, "l-infinity growth rate", {"linf-rate"}, std::nullopt},
    {5, "l-infinity bound coverage, MDP", {"linf-stateful"}, std::nullopt},
    {6, "impossibility certificate", {"impossibility"}, std::nullopt},
    {7, "distribution and softmax properties", {"properties"}, std::nullopt},
    {8, "predictor reductions", {"reductions"}, std::nullopt},
    {9, "concentration coverage", {"coverage"}, std::nullopt},
    {10, "oracle equivalence", {"oracle"}, std::nullopt},
};

}  // namespace

int main() {
  bool all_ok = true;
  for (const auto& criterion : kCriteria) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<CheckResult> results;
    std::string error;
    try {
      for (const auto& suite : criterion.suites) {
        auto part = prefwatch::run_suite(suite);
        results.insert(results.end(), part.begin(), part.end());
      }
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = error.empty() && !results.empty();
    std::string detail;
    for (const auto& r : results) {
      if (r.status == CheckStatus::kFail) ok = false;
      if (!detail.empty()) detail += "; ";
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s %s measured=%.6g bound=%.6g", r.name.c_str(),
                    std::string(prefwatch::to_string(r.status)).c_str(), r.measured, r.bound);
      detail += buf;
    }
    if (!error.empty()) detail = "error: " + error;
    std::string timing;
    char tbuf[96];
    if (criterion.runtime_limit_seconds) {
      const bool in_time = seconds < *criterion.runtime_limit_seconds;
      ok = ok && in_time;
      std::snprintf(tbuf, sizeof tbuf, "%.2fs (limit %.0fs%s)", seconds, *criterion.runtime_limit_seconds,
                    in_time ? "" : ", exceeded");
    } else {
      std::snprintf(tbuf, sizeof tbuf, "%.2fs", seconds);
    }
    timing = tbuf;
    std::printf("%s criterion %d: %s [%s] %s\n", ok ? "PASS" : "FAIL", criterion.number, criterion.title.c_str(),
                timing.c_str(), detail.c_str());
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
