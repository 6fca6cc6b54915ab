#pragma once

// Event-driven N-particle move-to-front ranking process.
//
// Ranks are kept in "growing front" form: particles own slots in an array of
// `capacity` cells; a jumper takes the next free cell to the left of every
// occupied one. The rank of a particle is the number of occupied cells up to
// and including its own, answered by an occupancy bitmap with a Fenwick tree
// over blocks of slots in O(log capacity).
// When the free cells run out the occupied ones are compacted to the right
// end in O(capacity). Pending jumps sit in a calendar queue ordered by
// (time, particle), so simultaneous times resolve by particle index.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "srp/event_queue.hpp"
#include "srp/measures.hpp"
#include "srp/occupancy.hpp"
#include "srp/schedule.hpp"

namespace srp {

struct ParticleRecord {
  double rate;
  double initial_y;
  double y;
  bool jumped;
};

/// Frozen view of the system at one time; `particles` is indexed by particle.
struct EmpiricalSnapshot {
  double time = 0.0;
  std::vector<ParticleRecord> particles;

  std::size_t size() const { return particles.size(); }
  /// Fraction of particles that jumped by `time`.
  double jumped_fraction() const;
};

/// (1/N) sum_i g(w_i) [Y_i <= y].
double empirical_statistic(const EmpiricalSnapshot& snapshot, const RateFunction& g, double y);

/// Cumulative statistic in rank order: entry k is (1/N) sum over the k
/// frontmost particles of g(w). Size N + 1.
std::vector<double> cumulative_statistic(const EmpiricalSnapshot& snapshot, const RateFunction& g);

/// Number of lattice positions (k - 1)/N, k = 1..N, that are <= y.
std::size_t lattice_count_at_or_below(double y, std::size_t n);

struct JumpEvent {
  double time;
  std::uint32_t particle;
};

class RankingSystem {
 public:
  static constexpr std::size_t kDefaultCapacityFactor = 8;

  RankingSystem(InitialConfiguration initial, JumpSchedule schedule,
                std::size_t capacity_factor = kDefaultCapacityFactor);

  /// Samples the initial configuration from `profile` and uses the random
  /// schedule, both under `seed`.
  static RankingSystem init(const InitialProfile& profile, std::size_t n, std::uint64_t seed);

  std::size_t size() const { return state_.size(); }
  double time() const { return time_; }
  std::uint64_t events_processed() const { return events_; }
  std::uint64_t compactions() const { return compactions_; }

  /// Processes every jump with time <= t.
  void advance_to(double t);
  /// Processes exactly one jump, if any is pending at a finite time.
  std::optional<JumpEvent> step();
  std::optional<double> next_event_time() const;

  double rate(std::uint32_t particle) const { return state_[particle].rate; }
  std::uint32_t initial_position(std::uint32_t particle) const { return initial_rank_[particle]; }
  std::uint64_t jump_count(std::uint32_t particle) const { return state_[particle].jumps; }
  /// Time of the first jump, or kNever.
  double first_jump_time(std::uint32_t particle) const { return first_jump_[particle]; }

  /// Current 1-based rank X_i(t).
  std::uint32_t position(std::uint32_t particle) const;
  /// All ranks by a single slot sweep, O(capacity).
  std::vector<std::uint32_t> positions() const;
  /// All ranks by independent Fenwick queries, O(N log capacity), in parallel.
  std::vector<std::uint32_t> positions_parallel() const;

  /// x_C(t): number of particles that have jumped.
  std::size_t jumped_count() const { return jumped_; }
  /// y_C^{(N)}(t) = x_C(t) / N.
  double boundary() const;
  /// y + (1/N) #{i : tau_i <= t, y_{i,0} >= y}; requires 0 <= y < 1.
  double flow_position(double y) const;
  /// min{ y_{i,0} : Y_i(t) > y }; requires boundary() < y and some particle beyond y.
  double hat_y_empirical(double y) const;

  EmpiricalSnapshot snapshot() const;

 private:
  void schedule_next(std::uint32_t particle, double previous);
  void compact();
  /// Particle index per slot, kEmpty for free slots; O(capacity).
  std::vector<std::uint32_t> occupants() const;

  JumpSchedule schedule_;
  // Fields touched on every jump, kept together.
  struct ParticleState {
    double rate;
    std::uint64_t jumps;
    std::uint32_t slot;
  };

  std::vector<ParticleState> state_;
  std::vector<std::uint32_t> initial_rank_;
  std::vector<double> first_jump_;

  std::size_t capacity_;
  OccupancyIndex occupied_;
  std::int64_t next_free_;

  OccupancyIndex jumped_by_initial_;  // indexed by x_{i,0} - 1
  std::size_t jumped_ = 0;

  JumpQueue pending_;
  double time_ = 0.0;
  std::uint64_t events_ = 0;
  std::uint64_t compactions_ = 0;
};

}  // namespace srp
