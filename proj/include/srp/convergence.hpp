#pragma once

// Replica-based convergence study of the empirical process toward the limit.
//
// Each observable is summarized, for every N, by the RMS over replicas of a
// per-replica sup error over its grid. Tolerance bands scale as c / sqrt(N)
// and the log-log slope of RMS against N is fitted by least squares.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "srp/limit.hpp"
#include "srp/simulator.hpp"

namespace srp {

struct TestFunction {
  std::string name;
  RateFunction g;
};

/// g = 1, g = w and g = e^{-w}.
std::vector<TestFunction> standard_test_functions();

enum class Execution { serial, parallel };

struct ConvergenceSettings {
  std::vector<std::size_t> sizes{1'000, 10'000, 100'000};
  std::size_t replicas = 20;
  std::uint64_t seed = 1;
  std::vector<double> times{0.25, std::numbers::ln2, 1.0, 2.0};
  std::vector<double> positions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  /// Grid points closer than this to y_C(t) are skipped.
  double exclusion = 0.05;
  /// (y, t) pairs for the trajectory observable.
  std::vector<std::pair<double, double>> flow_points{{0.3, 0.5}, {0.3, 1.0}, {0.7, 0.5}, {0.7, 1.0}};
  std::vector<TestFunction> test_functions = standard_test_functions();

  double boundary_coefficient = 1.5;
  double statistic_coefficient = 5.0;
  double flow_coefficient = 5.0;
  double slope_min = -0.65;
  double slope_max = -0.35;

  Execution execution = Execution::parallel;
};

/// Throws std::invalid_argument for degenerate settings.
void validate(const ConvergenceSettings& settings);

struct ObservableSummary {
  std::string name;
  std::vector<double> rms;        // per N
  std::vector<double> tolerance;  // per N
  double slope = 0.0;
  bool slope_within = false;

  bool within(std::size_t k) const { return rms[k] <= tolerance[k]; }
  bool passed() const;
};

struct ConvergenceReport {
  std::string model;
  std::vector<std::size_t> sizes;
  std::size_t replicas = 0;
  double slope_min = 0.0;
  double slope_max = 0.0;
  std::vector<ObservableSummary> observables;

  bool passed() const;
  const ObservableSummary& observable(const std::string& name) const;
};

/// Ordinary least squares slope of log(y) on log(x); needs >= 3 points.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Per-replica sup errors, in observable order: boundary, one per test
/// function, flow. Exposed so the parallel and serial runners can be compared.
std::vector<double> replica_errors(const LimitField& field, const ConvergenceSettings& settings,
                                   std::size_t n, std::uint64_t seed);

ConvergenceReport convergence_study(const LimitField& field, const ConvergenceSettings& settings,
                                    const std::string& model = "model");

/// max over the grid of |F_N(y) - limit mass below y| for g = 1.
double ks_distance(const EmpiricalSnapshot& snapshot, const LimitField& field, double t,
                   const std::vector<double>& grid);

/// CSV with header `observable,N,rms,tolerance,pass`.
void write_report_csv(std::ostream& out, const ConvergenceReport& report);
/// Human-readable block with fitted slopes.
void write_report_summary(std::ostream& out, const ConvergenceReport& report);

}  // namespace srp
