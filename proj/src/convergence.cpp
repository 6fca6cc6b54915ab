#include "srp/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace srp {

std::vector<TestFunction> standard_test_functions() {
  return {
      {"1", [](double) { return 1.0; }},
      {"w", [](double w) { return w; }},
      {"exp(-w)", [](double w) { return std::exp(-w); }},
  };
}

void validate(const ConvergenceSettings& settings) {
  if (settings.sizes.size() < 3) {
    throw std::invalid_argument("convergence: at least three particle counts are required");
  }
  if (!std::is_sorted(settings.sizes.begin(), settings.sizes.end()) ||
      std::adjacent_find(settings.sizes.begin(), settings.sizes.end()) != settings.sizes.end() ||
      settings.sizes.front() == 0) {
    throw std::invalid_argument("convergence: particle counts must be positive and increasing");
  }
  if (settings.replicas == 0) throw std::invalid_argument("convergence: replicas must be >= 1");
  if (settings.times.empty()) throw std::invalid_argument("convergence: empty time grid");
  if (settings.positions.empty()) throw std::invalid_argument("convergence: empty position grid");
  for (double t : settings.times) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("convergence: grid times must be finite and > 0");
    }
  }
  for (double y : settings.positions) {
    if (!(y > 0.0 && y < 1.0)) throw std::invalid_argument("convergence: grid positions must lie in (0, 1)");
  }
  for (const auto& [y, t] : settings.flow_points) {
    if (!(y >= 0.0 && y < 1.0) || !(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("convergence: flow points must satisfy 0 <= y < 1, t > 0");
    }
  }
  if (settings.test_functions.empty()) {
    throw std::invalid_argument("convergence: no test functions");
  }
  if (!(settings.exclusion >= 0.0)) throw std::invalid_argument("convergence: exclusion must be >= 0");
  if (!(settings.slope_min <= settings.slope_max)) {
    throw std::invalid_argument("convergence: empty slope band");
  }
}

bool ObservableSummary::passed() const {
  for (std::size_t k = 0; k < rms.size(); ++k) {
    if (!within(k)) return false;
  }
  return slope_within;
}

bool ConvergenceReport::passed() const {
  return std::all_of(observables.begin(), observables.end(),
                     [](const ObservableSummary& o) { return o.passed(); });
}

const ObservableSummary& ConvergenceReport::observable(const std::string& name) const {
  for (const ObservableSummary& o : observables) {
    if (o.name == name) return o;
  }
  throw std::out_of_range("no observable named " + name);
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw std::invalid_argument("fit_loglog_slope: need >= 3 paired points");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<double> replica_errors(const LimitField& field, const ConvergenceSettings& settings,
                                   std::size_t n, std::uint64_t seed) {
  std::vector<double> checkpoints = settings.times;
  for (const auto& point : settings.flow_points) checkpoints.push_back(point.second);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  const std::size_t g_count = settings.test_functions.size();
  std::vector<double> errors(g_count + 2, 0.0);
  double& boundary_error = errors.front();
  double& flow_error = errors.back();

  RankingSystem system = RankingSystem::init(field.profile(), n, seed);
  for (double t : checkpoints) {
    system.advance_to(t);
    if (std::find(settings.times.begin(), settings.times.end(), t) != settings.times.end()) {
      const double curve = field.boundary(t);
      boundary_error = std::max(boundary_error, std::abs(system.boundary() - curve));
      const EmpiricalSnapshot snap = system.snapshot();
      for (std::size_t k = 0; k < g_count; ++k) {
        const RateFunction& g = settings.test_functions[k].g;
        const std::vector<double> cumulative = cumulative_statistic(snap, g);
        for (double y : settings.positions) {
          if (std::abs(y - curve) <= settings.exclusion) continue;
          const double empirical = cumulative[lattice_count_at_or_below(y, n)];
          errors[k + 1] = std::max(errors[k + 1], std::abs(empirical - field.statistic(g, y, t)));
        }
      }
    }
    for (const auto& [y, at] : settings.flow_points) {
      if (at != t) continue;
      flow_error = std::max(flow_error, std::abs(system.flow_position(y) - field.flow(y, t)));
    }
  }
  return errors;
}

ConvergenceReport convergence_study(const LimitField& field, const ConvergenceSettings& settings,
                                    const std::string& model) {
  validate(settings);
  const std::size_t g_count = settings.test_functions.size();
  const std::size_t observable_count = g_count + 2;

  ConvergenceReport report;
  report.model = model;
  report.sizes = settings.sizes;
  report.replicas = settings.replicas;
  report.slope_min = settings.slope_min;
  report.slope_max = settings.slope_max;
  report.observables.resize(observable_count);
  report.observables.front().name = "boundary";
  for (std::size_t k = 0; k < g_count; ++k) {
    report.observables[k + 1].name = "statistic[g=" + settings.test_functions[k].name + "]";
  }
  report.observables.back().name = "flow";

  for (std::size_t n : settings.sizes) {
    const auto replicas = static_cast<std::int64_t>(settings.replicas);
    std::vector<std::vector<double>> per_replica(settings.replicas);
    if (settings.execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (std::int64_t r = 0; r < replicas; ++r) {
        per_replica[static_cast<std::size_t>(r)] =
            replica_errors(field, settings, n, replica_seed(settings.seed, static_cast<std::uint64_t>(r)));
      }
    } else {
      for (std::int64_t r = 0; r < replicas; ++r) {
        per_replica[static_cast<std::size_t>(r)] =
            replica_errors(field, settings, n, replica_seed(settings.seed, static_cast<std::uint64_t>(r)));
      }
    }

    const double root_n = std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < observable_count; ++k) {
      double squares = 0.0;
      for (const auto& errors : per_replica) squares += errors[k] * errors[k];
      const double coefficient = k == 0                    ? settings.boundary_coefficient
                                 : k == observable_count - 1 ? settings.flow_coefficient
                                                            : settings.statistic_coefficient;
      report.observables[k].rms.push_back(std::sqrt(squares / static_cast<double>(settings.replicas)));
      report.observables[k].tolerance.push_back(coefficient / root_n);
    }
  }

  std::vector<double> sizes(settings.sizes.begin(), settings.sizes.end());
  for (ObservableSummary& o : report.observables) {
    o.slope = fit_loglog_slope(sizes, o.rms);
    o.slope_within = o.slope >= settings.slope_min && o.slope <= settings.slope_max;
  }
  return report;
}

double ks_distance(const EmpiricalSnapshot& snapshot, const LimitField& field, double t,
                   const std::vector<double>& grid) {
  const RateFunction one = [](double) { return 1.0; };
  double distance = 0.0;
  for (double y : grid) {
    if (!(y > 0.0 && y < 1.0)) throw std::invalid_argument("ks_distance: grid must lie in (0, 1)");
    distance = std::max(distance, std::abs(empirical_statistic(snapshot, one, y) -
                                           field.statistic(one, y, t)));
  }
  return distance;
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "observable,N,rms,tolerance,pass\n";
  out << std::setprecision(10);
  for (const ObservableSummary& o : report.observables) {
    for (std::size_t k = 0; k < report.sizes.size(); ++k) {
      out << o.name << ',' << report.sizes[k] << ',' << o.rms[k] << ',' << o.tolerance[k] << ','
          << (o.within(k) ? "true" : "false") << '\n';
    }
  }
}

void write_report_summary(std::ostream& out, const ConvergenceReport& report) {
  out << "model: " << report.model << '\n';
  out << "replicas: " << report.replicas << '\n';
  out << "slope band: [" << report.slope_min << ", " << report.slope_max << "]\n";
  out << std::setprecision(4) << std::fixed;
  for (const ObservableSummary& o : report.observables) {
    out << "  " << std::left << std::setw(24) << o.name << " slope " << std::setw(8) << o.slope
        << (o.slope_within ? " in band" : " OUT OF BAND");
    bool bands = true;
    for (std::size_t k = 0; k < o.rms.size(); ++k) bands = bands && o.within(k);
    out << (bands ? ", rms within tolerance" : ", rms EXCEEDS tolerance") << '\n';
  }
  out << std::defaultfloat << (report.passed() ? "PASS" : "FAIL") << '\n';
}

}  // namespace srp
