#pragma once

// Slow, literal implementations used as oracles for the fast simulator.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "srp/measures.hpp"
#include "srp/schedule.hpp"

namespace srp {

inline constexpr std::size_t kNaiveReferenceMaxParticles = 2000;

/// Rank tables (indexed by particle) at each checkpoint.
using PositionTable = std::vector<std::vector<std::uint32_t>>;

/// Move-to-front on a plain rank array: every jump shifts all particles
/// ahead of the jumper back by one, O(N) per event. The event stream is
/// pre-generated from `schedule` and replayed in (time, particle) order.
/// Checkpoints must be non-negative and sorted.
PositionTable naive_reference(const InitialConfiguration& initial, const JumpSchedule& schedule,
                              const std::vector<double>& checkpoints);

PositionTable naive_reference(const InitialProfile& profile, std::size_t n, std::uint64_t seed,
                              const std::vector<double>& checkpoints);

/// Ranks at time t from the counting definitions alone: a particle that has
/// not jumped sits at x_{i,0} plus the number of initially-behind particles
/// that have jumped; otherwise at 1 plus the number of other particles that
/// jumped after its last jump.
std::vector<std::uint32_t> counting_positions(const InitialConfiguration& initial,
                                              const JumpSchedule& schedule, double t);

/// E[X_i(t) | tau_i > t] = x_{i,0} + sum over initially-behind i' of (1 - e^{-w_{i'} t}).
double conditional_position_oracle(const InitialConfiguration& initial, std::uint32_t particle,
                                   double t);
double conditional_position_oracle(const InitialProfile& profile, std::size_t n,
                                   std::uint64_t seed, std::uint32_t particle, double t);
/// Var[X_i(t) | tau_i > t] for the same conditioning.
double conditional_position_variance(const InitialConfiguration& initial, std::uint32_t particle,
                                     double t);

struct ConditionalMeanCheck {
  double expected;
  double mean;
  double standard_error;
  std::size_t conditioned;  // replicas in which the particle had not jumped by t
  bool within_three_sigma() const;
};

/// Runs `replicas` independent schedules (seed ^ r) on a fixed initial
/// configuration and averages X_i(t) over replicas with tau_i > t.
ConditionalMeanCheck check_conditional_mean(const InitialConfiguration& initial,
                                            std::uint32_t particle, double t, std::uint64_t seed,
                                            std::size_t replicas);

}  // namespace srp
