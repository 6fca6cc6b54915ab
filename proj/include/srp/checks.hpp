#pragma once

// Deterministic verification suites run by `srp verify`.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "srp/limit.hpp"
#include "srp/measures.hpp"

namespace srp {

struct CheckResult {
  std::string name;
  double value;
  double tolerance;
  bool passed;
};

struct VerifySettings {
  std::uint64_t seed = 1;

  std::size_t oracle_particles = 200;
  std::size_t oracle_seeds = 10;
  double oracle_horizon = 5.0;
  std::size_t oracle_checkpoints = 50;

  std::size_t conditional_particles = 100;
  std::size_t conditional_replicas = 4000;
  /// At most this many of the 20 conditional-mean pairs may leave their 3-sigma band.
  std::size_t conditional_allowed_misses = 2;

  double inverse_tolerance = 1e-10;
  double mass_tolerance = 1e-12;
  double marginal_tolerance = 1e-4;
  double derivative_tolerance = 1e-6;

  double pde_step = 1e-3;
  double pde_tolerance = 1e-4;
  double pde_ratio_min = 3.0;
  double pde_ratio_max = 5.0;
};

/// The four-particle arrangement 3124 under jumps of particles 1, 2, 4, 1;
/// value is the number of mismatching arrangements.
CheckResult check_worked_example();

/// Fast vs naive simulator, identical event streams; value is the number of
/// mismatching (seed, checkpoint) tables.
CheckResult check_oracle_equivalence(const InitialProfile& profile, const VerifySettings& settings);

/// Naive simulator vs the counting definitions; value is mismatching tables.
CheckResult check_counting_definitions(const InitialProfile& profile,
                                       const VerifySettings& settings);

/// Conditional mean position vs the exact oracle over 20 (particle, time)
/// pairs; value is the number of pairs outside 3 sigma.
CheckResult check_conditional_means(const InitialProfile& profile, const VerifySettings& settings);

/// Round trips, density mass, marginal reconstruction and derivative
/// identities; one result per identity.
std::vector<CheckResult> check_analytic_identities(const LimitField& field,
                                                   const VerifySettings& settings);

/// Residual at step h and the ratio residual(h) / residual(h/2) over an
/// interior grid. Discrete laws only.
std::vector<CheckResult> check_pde_residual(const LimitField& field,
                                            const VerifySettings& settings);

std::vector<CheckResult> run_verification(const LimitField& field, const VerifySettings& settings);

/// CSV with header `check,value,tolerance,pass`.
void write_checks_csv(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace srp
