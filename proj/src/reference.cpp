#include "srp/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "srp/simulator.hpp"

namespace srp {

namespace {

struct Jump {
  double time;
  std::uint32_t particle;
};

// All jumps with time <= horizon, sorted by (time, particle).
std::vector<Jump> jumps_until(const InitialConfiguration& initial, const JumpSchedule& schedule,
                              double horizon) {
  std::vector<Jump> jumps;
  for (std::uint32_t i = 0; i < initial.size(); ++i) {
    double previous = 0.0;
    for (std::uint64_t j = 1;; ++j) {
      const double t = schedule.jump_time(i, j, previous, initial.rates[i]);
      if (!(t <= horizon)) break;
      jumps.push_back({t, i});
      previous = t;
    }
  }
  std::sort(jumps.begin(), jumps.end(), [](const Jump& a, const Jump& b) {
    return a.time < b.time || (a.time == b.time && a.particle < b.particle);
  });
  return jumps;
}

}  // namespace

PositionTable naive_reference(const InitialConfiguration& initial, const JumpSchedule& schedule,
                              const std::vector<double>& checkpoints) {
  if (initial.size() == 0) throw std::invalid_argument("naive_reference: N must be >= 1");
  if (initial.size() > kNaiveReferenceMaxParticles) {
    throw std::invalid_argument("naive_reference: N exceeds the O(N)-per-event limit");
  }
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
      (!checkpoints.empty() && !(checkpoints.front() >= 0.0))) {
    throw std::invalid_argument("naive_reference: checkpoints must be sorted and >= 0");
  }

  const double horizon = checkpoints.empty() ? 0.0 : checkpoints.back();
  const std::vector<Jump> jumps = jumps_until(initial, schedule, horizon);
  std::vector<std::uint32_t> x = initial.positions;
  PositionTable table;
  table.reserve(checkpoints.size());
  std::size_t next = 0;
  for (double checkpoint : checkpoints) {
    for (; next < jumps.size() && jumps[next].time <= checkpoint; ++next) {
      const std::uint32_t jumper = jumps[next].particle;
      for (std::uint32_t& rank : x) {
        if (rank < x[jumper]) ++rank;
      }
      x[jumper] = 1;
    }
    table.push_back(x);
  }
  return table;
}

PositionTable naive_reference(const InitialProfile& profile, std::size_t n, std::uint64_t seed,
                              const std::vector<double>& checkpoints) {
  if (n > kNaiveReferenceMaxParticles) {
    throw std::invalid_argument("naive_reference: N exceeds the O(N)-per-event limit");
  }
  return naive_reference(sample_rates_and_positions(profile, n, seed), JumpSchedule::random(seed),
                         checkpoints);
}

std::vector<std::uint32_t> counting_positions(const InitialConfiguration& initial,
                                              const JumpSchedule& schedule, double t) {
  const std::size_t n = initial.size();
  const std::vector<Jump> jumps = jumps_until(initial, schedule, t);
  std::vector<double> first(n, kNever);
  std::vector<double> last(n, -1.0);
  for (const Jump& jump : jumps) {
    first[jump.particle] = std::min(first[jump.particle], jump.time);
    last[jump.particle] = std::max(last[jump.particle], jump.time);
  }

  std::vector<std::uint32_t> x(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t count = 0;
    if (first[i] == kNever) {
      for (std::uint32_t k = 0; k < n; ++k) {
        if (initial.positions[k] > initial.positions[i] && first[k] <= t) ++count;
      }
      x[i] = initial.positions[i] + count;
    } else {
      for (std::uint32_t k = 0; k < n; ++k) {
        if (k != i && last[k] > last[i]) ++count;
      }
      x[i] = 1 + count;
    }
  }
  return x;
}

double conditional_position_oracle(const InitialConfiguration& initial, std::uint32_t particle,
                                   double t) {
  double expected = initial.positions[particle];
  for (std::size_t k = 0; k < initial.size(); ++k) {
    if (initial.positions[k] > initial.positions[particle]) {
      expected += -std::expm1(-initial.rates[k] * t);
    }
  }
  return expected;
}

double conditional_position_oracle(const InitialProfile& profile, std::size_t n,
                                   std::uint64_t seed, std::uint32_t particle, double t) {
  return conditional_position_oracle(sample_rates_and_positions(profile, n, seed), particle, t);
}

double conditional_position_variance(const InitialConfiguration& initial, std::uint32_t particle,
                                     double t) {
  double variance = 0.0;
  for (std::size_t k = 0; k < initial.size(); ++k) {
    if (initial.positions[k] > initial.positions[particle]) {
      const double p = -std::expm1(-initial.rates[k] * t);
      variance += p * (1.0 - p);
    }
  }
  return variance;
}

bool ConditionalMeanCheck::within_three_sigma() const {
  return conditioned > 0 && std::abs(mean - expected) <= 3.0 * standard_error;
}

ConditionalMeanCheck check_conditional_mean(const InitialConfiguration& initial,
                                            std::uint32_t particle, double t, std::uint64_t seed,
                                            std::size_t replicas) {
  double sum = 0.0;
  std::size_t conditioned = 0;
  for (std::size_t r = 0; r < replicas; ++r) {
    RankingSystem system(initial, JumpSchedule::random(replica_seed(seed, r)));
    system.advance_to(t);
    if (system.first_jump_time(particle) <= t) continue;
    sum += system.position(particle);
    ++conditioned;
  }
  ConditionalMeanCheck check{};
  check.expected = conditional_position_oracle(initial, particle, t);
  check.conditioned = conditioned;
  check.mean = conditioned > 0 ? sum / static_cast<double>(conditioned) : 0.0;
  check.standard_error =
      conditioned > 0
          ? std::sqrt(conditional_position_variance(initial, particle, t) /
                      static_cast<double>(conditioned))
          : 0.0;
  return check;
}

}  // namespace srp
