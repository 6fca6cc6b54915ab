// End-to-end acceptance run: one PASS/FAIL line per criterion.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "srp/checks.hpp"
#include "srp/convergence.hpp"
#include "srp/limit.hpp"
#include "srp/simulator.hpp"

namespace {

using Clock = std::chrono::steady_clock;

// Runtime budgets in seconds.
constexpr double kWorkedExampleBudget = 1.0;
constexpr double kOracleBudget = 10.0;
constexpr double kBoundaryBudget = 300.0;
constexpr double kStatisticBudget = 600.0;
constexpr double kAnalyticBudget = 5.0;
constexpr double kPdeBudget = 10.0;
constexpr double kPerformanceBudget = 120.0;

constexpr std::size_t kLargeN = 1'000'000;
constexpr std::size_t kMediumN = 100'000;
constexpr double kTargetEvents = 5e6;
constexpr double kCostGrowthLimit = 1.5;
constexpr int kTimingRuns = 3;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

srp::InitialProfile two_atom() {
  return srp::InitialProfile::factorized(srp::JumpRateLaw::discrete({{1.0, 0.5}, {2.0, 0.5}}));
}

int failures = 0;

void report(int criterion, bool passed, const std::string& detail) {
  if (!passed) ++failures;
  std::printf("criterion %d: %s  %s\n", criterion, passed ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, a, b, c, d);
  return buffer;
}

bool all_passed(const std::vector<srp::CheckResult>& checks, std::string& detail) {
  bool ok = true;
  for (const srp::CheckResult& c : checks) {
    detail += c.name + "=" + fmt("%.3g", c.value) + (c.passed ? " " : "(over) ");
    ok = ok && c.passed;
  }
  return ok;
}

// Wall time per processed jump while running a fresh system to `horizon`;
// the fastest of a few runs, which filters out interference from other load.
double per_event_seconds(std::size_t n, double horizon, std::size_t& events, double& elapsed) {
  double best = std::numeric_limits<double>::infinity();
  for (int run = 0; run < kTimingRuns; ++run) {
    srp::RankingSystem system = srp::RankingSystem::init(two_atom(), n, 11);
    const auto start = Clock::now();
    system.advance_to(horizon);
    const double seconds = seconds_since(start);
    events = system.events_processed();
    if (seconds < best) {
      best = seconds;
      elapsed = seconds;
    }
  }
  return best / static_cast<double>(events);
}

}  // namespace

int main() {
  const srp::LimitField field(two_atom());
  const srp::VerifySettings verify;

  {
    const auto start = Clock::now();
    const srp::CheckResult check = srp::check_worked_example();
    const double elapsed = seconds_since(start);
    report(1, check.passed && elapsed < kWorkedExampleBudget,
           fmt("mismatches=%g time=%.3fs", check.value, elapsed));
  }
  {
    const auto start = Clock::now();
    const srp::CheckResult check = srp::check_oracle_equivalence(field.profile(), verify);
    const double elapsed = seconds_since(start);
    report(2, check.passed && elapsed < kOracleBudget,
           fmt("mismatching tables=%g time=%.2fs", check.value, elapsed));
  }

  {
    const srp::ConvergenceSettings settings;
    const auto start = Clock::now();
    const srp::ConvergenceReport result = srp::convergence_study(field, settings, "two-atom");
    const double elapsed = seconds_since(start);
    const std::size_t last = result.sizes.size() - 1;

    const srp::ObservableSummary& boundary = result.observable("boundary");
    bool bands = true;
    for (std::size_t k = 0; k < result.sizes.size(); ++k) bands = bands && boundary.within(k);
    report(3, bands && boundary.slope_within && elapsed < kBoundaryBudget,
           fmt("rms(1e5)=%.3g tol=%.3g slope=%.3f time=%.1fs", boundary.rms[last],
               boundary.tolerance[last], boundary.slope, elapsed));

    bool statistic_ok = elapsed < kStatisticBudget;
    std::string detail;
    for (const srp::TestFunction& g : settings.test_functions) {
      const srp::ObservableSummary& o = result.observable("statistic[g=" + g.name + "]");
      const bool ok = o.within(last) && o.slope_within;
      statistic_ok = statistic_ok && ok;
      detail += "g=" + g.name + fmt(": rms=%.3g slope=%.3f", o.rms[last], o.slope) +
                (ok ? "; " : " (out of band); ");
    }
    report(4, statistic_ok, detail + fmt("time=%.1fs", elapsed));

    const srp::ObservableSummary& flow = result.observable("flow");
    report(5, flow.within(last) && flow.slope_within,
           fmt("rms(1e5)=%.3g tol=%.3g slope=%.3f", flow.rms[last], flow.tolerance[last], flow.slope));
  }

  {
    const auto start = Clock::now();
    std::string detail;
    bool ok = all_passed(srp::check_analytic_identities(field, verify), detail);
    const double elapsed = seconds_since(start);
    report(6, ok && elapsed < kAnalyticBudget, detail + fmt("time=%.2fs", elapsed));
  }
  {
    const auto start = Clock::now();
    const std::vector<srp::CheckResult> checks = srp::check_pde_residual(field, verify);
    std::string detail;
    const bool ok = checks.size() == 2 && all_passed(checks, detail);
    const double elapsed = seconds_since(start);
    report(7, ok && elapsed < kPdeBudget, detail + fmt("time=%.2fs", elapsed));
  }

  {
    // Same event budget at both sizes so only the per-event cost differs.
    const double mean_rate = field.marginal().mean();
    std::size_t large_events = 0, medium_events = 0;
    double large_time = 0.0, medium_time = 0.0;
    const double large = per_event_seconds(kLargeN, kTargetEvents / (mean_rate * kLargeN),
                                           large_events, large_time);
    const double medium = per_event_seconds(kMediumN, kTargetEvents / (mean_rate * kMediumN),
                                            medium_events, medium_time);
    const double growth = large / medium;
    report(8, large_time < kPerformanceBudget && growth <= kCostGrowthLimit,
           fmt("N=1e6: %.0f events in %.2fs; per-event %.0fns vs %.0fns at N=1e5",
               static_cast<double>(large_events), large_time, large * 1e9, medium * 1e9) +
               fmt(" (growth %.2f)", growth));
  }

  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
