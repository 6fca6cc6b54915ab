#include <doctest.h>

#include <cmath>
#include <sstream>

#include "srp/convergence.hpp"

using srp::JumpRateLaw;

namespace {

srp::LimitField delta_one() {
  return srp::LimitField(srp::InitialProfile::factorized(JumpRateLaw::point_mass(1.0)));
}
srp::LimitField two_atom() {
  return srp::LimitField(srp::InitialProfile::factorized(JumpRateLaw::discrete({{1.0, 0.5}, {2.0, 0.5}})));
}

srp::ConvergenceSettings small_study() {
  srp::ConvergenceSettings settings;
  settings.sizes = {200, 400, 800};
  settings.replicas = 6;
  return settings;
}

// RMS over replicas of the KS distance at time t.
double ks_rms(const srp::LimitField& field, std::size_t n, double t, const std::vector<double>& grid) {
  constexpr std::size_t kReplicas = 20;
  double sum_sq = 0.0;
  for (std::size_t r = 0; r < kReplicas; ++r) {
    srp::RankingSystem system = srp::RankingSystem::init(field.profile(), n, srp::replica_seed(31, r));
    system.advance_to(t);
    const double d = srp::ks_distance(system.snapshot(), field, t, grid);
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq / kReplicas);
}

const std::vector<double> kGrid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

}  // namespace

TEST_CASE("log-log slope fit") {
  CHECK(srp::fit_loglog_slope({1e3, 1e4, 1e5}, {1e-1, 1e-1 / std::sqrt(10.0), 1e-2}) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_THROWS(srp::fit_loglog_slope({1.0, 2.0}, {1.0, 2.0}));
}

TEST_CASE("settings validation") {
  srp::ConvergenceSettings settings = small_study();
  CHECK_NOTHROW(srp::validate(settings));
  settings.replicas = 0;
  CHECK_THROWS_AS(srp::validate(settings), std::invalid_argument);
  settings = small_study();
  settings.sizes = {100, 100, 200};
  CHECK_THROWS_AS(srp::validate(settings), std::invalid_argument);
  settings = small_study();
  settings.sizes = {100, 200};
  CHECK_THROWS_AS(srp::validate(settings), std::invalid_argument);
  settings = small_study();
  settings.positions = {};
  CHECK_THROWS_AS(srp::validate(settings), std::invalid_argument);
  settings = small_study();
  settings.times = {0.0, 1.0};
  CHECK_THROWS_AS(srp::validate(settings), std::invalid_argument);
}

TEST_CASE("serial and parallel studies are bit-identical") {
  srp::ConvergenceSettings settings = small_study();
  settings.execution = srp::Execution::serial;
  const srp::ConvergenceReport serial = srp::convergence_study(two_atom(), settings);
  settings.execution = srp::Execution::parallel;
  const srp::ConvergenceReport parallel = srp::convergence_study(two_atom(), settings);
  REQUIRE(serial.observables.size() == parallel.observables.size());
  for (std::size_t k = 0; k < serial.observables.size(); ++k) {
    CHECK(serial.observables[k].name == parallel.observables[k].name);
    CHECK(serial.observables[k].rms == parallel.observables[k].rms);
    CHECK(serial.observables[k].slope == parallel.observables[k].slope);
  }
}

TEST_CASE("replica errors depend only on the seed") {
  const srp::ConvergenceSettings settings = small_study();
  CHECK(srp::replica_errors(two_atom(), settings, 300, 5) == srp::replica_errors(two_atom(), settings, 300, 5));
  CHECK(srp::replica_errors(two_atom(), settings, 300, 5) != srp::replica_errors(two_atom(), settings, 300, 6));
}

TEST_CASE("zero tolerance fails with the observable named") {
  srp::ConvergenceSettings settings = small_study();
  settings.boundary_coefficient = 0.0;
  const srp::ConvergenceReport report = srp::convergence_study(two_atom(), settings, "two-atom");
  CHECK_FALSE(report.passed());
  CHECK_FALSE(report.observable("boundary").passed());
  std::ostringstream csv;
  srp::write_report_csv(csv, report);
  CHECK(csv.str().rfind("observable,N,rms,tolerance,pass\n", 0) == 0);
  CHECK(csv.str().find("boundary,200,") != std::string::npos);
  std::ostringstream summary;
  srp::write_report_summary(summary, report);
  CHECK(summary.str().find("boundary") != std::string::npos);
  CHECK(summary.str().find("FAIL") != std::string::npos);
}

TEST_CASE("boundary observable converges at the CLT rate") {
  srp::ConvergenceSettings settings;
  settings.sizes = {1'000, 10'000, 100'000};
  settings.replicas = 20;
  const srp::ConvergenceReport report = srp::convergence_study(delta_one(), settings, "delta-one");
  const srp::ObservableSummary& boundary = report.observable("boundary");
  for (std::size_t k = 0; k < settings.sizes.size(); ++k) {
    CHECK(boundary.rms[k] <= 1.5 / std::sqrt(static_cast<double>(settings.sizes[k])));
  }
  CHECK(boundary.slope >= -0.65);
  CHECK(boundary.slope <= -0.35);

  // g = 1 at (y, t) = (0.5, 1): RMS decreases across sizes.
  srp::ConvergenceSettings point = settings;
  point.positions = {0.5};
  point.times = {1.0};
  point.test_functions = {srp::standard_test_functions()[0]};
  const srp::ConvergenceReport single = srp::convergence_study(delta_one(), point);
  const srp::ObservableSummary& mass = single.observable("statistic[g=" + point.test_functions[0].name + "]");
  CHECK(mass.rms[1] < mass.rms[0]);
  CHECK(mass.rms[2] < mass.rms[1]);
}

TEST_CASE("ks distance examples") {
  const srp::LimitField field = two_atom();
  const srp::RankingSystem start = srp::RankingSystem::init(field.profile(), 1000, 3);
  CHECK(srp::ks_distance(start.snapshot(), field, 0.0, kGrid) <= 1.0 / 1000 + 1e-12);

  srp::RankingSystem large = srp::RankingSystem::init(field.profile(), 100'000, 3);
  large.advance_to(1.0);
  CHECK(srp::ks_distance(large.snapshot(), field, 1.0, kGrid) <= 0.01);
}

TEST_CASE("ks distance shrinks by about sqrt(2) when N doubles") {
  const double ratio = ks_rms(two_atom(), 10'000, 1.0, kGrid) / ks_rms(two_atom(), 20'000, 1.0, kGrid);
  MESSAGE("ks rms ratio N=1e4 / N=2e4: " << ratio);
  CHECK(ratio >= 1.2);
  CHECK(ratio <= 1.7);
}
