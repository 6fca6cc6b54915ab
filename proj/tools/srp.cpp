// Command-line front end: simulate, limit, verify, convergence.
//
// Exit codes: 0 success, 1 tolerance failure, 2 configuration or I/O error.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "srp/checks.hpp"
#include "srp/config.hpp"
#include "srp/convergence.hpp"
#include "srp/limit.hpp"
#include "srp/simulator.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kToleranceFailure = 1;
constexpr int kConfigError = 2;
constexpr double kBoundaryBand = 1e-12;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest round-trip form, so repeated runs are byte-identical.
std::string num(double x) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, result.ptr);
}

std::ofstream open_output(const fs::path& dir, const std::string& file) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / file);
  if (ec || !out) throw IoError("cannot write " + (dir / file).string());
  return out;
}

std::string describe(const srp::JumpRateLaw& law) {
  std::string text;
  for (const srp::Atom& a : law.atoms()) {
    if (!text.empty()) text += ';';
    text += num(a.rate) + ':' + num(a.weight);
  }
  for (const srp::GammaComponent& g : law.gammas()) {
    if (!text.empty()) text += ';';
    text += "gamma(" + num(g.shape) + ' ' + num(g.rate) + "):" + num(g.weight);
  }
  return text;
}

int run_simulate(const srp::RunConfig& config, const fs::path& out_dir) {
  const srp::LimitField field = config.field();
  srp::RankingSystem system =
      config.scenario
          ? srp::RankingSystem(config.scenario->initial,
                               srp::JumpSchedule::scripted(config.scenario->jumps,
                                                           config.scenario->initial.size()))
          : srp::RankingSystem::init(*config.profile, config.particles, config.seed);

  std::ofstream trajectory = open_output(out_dir, "trajectory.csv");
  trajectory << "t,yC_emp,yC_limit\n";
  for (std::size_t k = 0; k < config.checkpoints.size(); ++k) {
    const double t = config.checkpoints[k];
    system.advance_to(t);
    trajectory << num(t) << ',' << num(system.boundary()) << ',' << num(field.boundary(t)) << '\n';

    const srp::EmpiricalSnapshot snap = system.snapshot();
    std::ofstream out = open_output(out_dir, "snapshot_" + std::to_string(k) + ".csv");
    out << "particle,rate,y0,y,jumped\n";
    for (std::size_t i = 0; i < snap.particles.size(); ++i) {
      const srp::ParticleRecord& p = snap.particles[i];
      out << i + 1 << ',' << num(p.rate) << ',' << num(p.initial_y) << ','
          << num(p.y) << ',' << (p.jumped ? 1 : 0) << '\n';
    }
  }
  std::cout << "simulate: " << config.checkpoints.size() << " checkpoints, "
            << system.events_processed() << " jumps, output in " << out_dir.string() << '\n';
  return kOk;
}

int run_limit(const srp::RunConfig& config, const fs::path& out_dir) {
  const srp::LimitField field = config.field();
  std::ofstream curve = open_output(out_dir, "curve.csv");
  curve << "t,yC\n";
  for (double t : config.limit.times) curve << num(t) << ',' << num(field.boundary(t)) << '\n';

  std::ofstream out = open_output(out_dir, "field.csv");
  out << "y,t,regime,yC,t0,flow,hat_y,velocity_head,velocity_tail,density_head,density_tail\n";
  for (double t : config.limit.times) {
    const double yc = field.boundary(t);
    for (double y : config.limit.positions) {
      const bool on_curve = std::abs(y - yc) <= kBoundaryBand;
      const bool head = !on_curve && y < yc;
      const bool tail = !on_curve && y > yc;
      std::string t0;
      try {
        t0 = num(field.boundary_time(y));
      } catch (const std::domain_error&) {
        t0 = "inf";
      }
      out << num(y) << ',' << num(t) << ',' << (on_curve ? "boundary" : head ? "head" : "tail") << ','
          << num(yc) << ',' << t0 << ',' << num(field.flow(y, t)) << ',';
      if (!head) out << num(field.origin(y, t));
      out << ',';
      if (!tail) out << num(field.velocity(y, t, srp::Side::head));
      out << ',';
      if (!head) out << num(field.velocity(y, t, srp::Side::tail));
      out << ',';
      if (!tail) out << describe(field.density(y, t, srp::Side::head).law);
      out << ',';
      if (!head) out << describe(field.density(y, t, srp::Side::tail).law);
      out << '\n';
    }
  }
  std::cout << "limit: " << config.limit.positions.size() * config.limit.times.size()
            << " grid points, output in " << out_dir.string() << '\n';
  return kOk;
}

int run_verify(const srp::RunConfig& config, const fs::path& out_dir) {
  if (!config.profile) throw srp::ConfigError("config: verify needs a 'model'");
  const std::vector<srp::CheckResult> checks = srp::run_verification(config.field(), config.verify);
  std::ofstream out = open_output(out_dir, "verify.csv");
  srp::write_checks_csv(out, checks);
  bool all = true;
  for (const srp::CheckResult& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << c.value
              << " tolerance=" << c.tolerance << '\n';
    all = all && c.passed;
  }
  return all ? kOk : kToleranceFailure;
}

int run_convergence(const srp::RunConfig& config, const fs::path& out_dir) {
  if (!config.profile) throw srp::ConfigError("config: convergence needs a 'model'");
  const srp::ConvergenceReport report =
      srp::convergence_study(config.field(), config.convergence, config.name);
  std::ofstream csv = open_output(out_dir, "convergence.csv");
  srp::write_report_csv(csv, report);
  std::ofstream summary = open_output(out_dir, "convergence_summary.txt");
  srp::write_report_summary(summary, report);
  srp::write_report_summary(std::cout, report);
  return report.passed() ? kOk : kToleranceFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic ranking process: simulator and infinite-particle limit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::optional<std::uint64_t> seed_override;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", out_override, "output directory (overrides config)");
    sub->add_option("--seed", seed_override, "master seed (overrides config)");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "snapshot CSVs and boundary trajectory");
  CLI::App* limit = app.add_subcommand("limit", "tabulate the limit field on the configured grid");
  CLI::App* verify = app.add_subcommand("verify", "deterministic verification suites");
  CLI::App* convergence = app.add_subcommand("convergence", "replica convergence study");
  for (CLI::App* sub : {simulate, limit, verify, convergence}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    srp::RunConfig config = srp::load_config(config_path);
    if (seed_override) {
      config.seed = *seed_override;
      config.convergence.seed = *seed_override;
      config.verify.seed = *seed_override;
    }
    const fs::path out_dir = out_override.empty() ? config.output : fs::path(out_override);
    if (*simulate) return run_simulate(config, out_dir);
    if (*limit) return run_limit(config, out_dir);
    if (*verify) return run_verify(config, out_dir);
    return run_convergence(config, out_dir);
  } catch (const srp::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}
