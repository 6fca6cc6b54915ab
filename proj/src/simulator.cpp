#include "srp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace srp {

namespace {

constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();
// How many jumps ahead particle records, then their cells, are prefetched.
constexpr std::size_t kPrefetchFar = 8;
constexpr std::size_t kPrefetchNear = 2;
// Expected jumps per calendar bucket.
constexpr double kJumpsPerBucket = 1.0;

// Number of lattice indices k in [0, n) with k / n < y (strict).
std::size_t lattice_count_below(double y, std::size_t n) {
  const double dn = static_cast<double>(n);
  auto below = [&](std::size_t k) { return static_cast<double>(k) / dn < y; };
  double guess = std::ceil(y * dn);
  std::size_t m = guess <= 0.0 ? 0 : std::min(n, static_cast<std::size_t>(guess));
  while (m > 0 && !below(m - 1)) --m;
  while (m < n && below(m)) ++m;
  return m;
}

}  // namespace

std::size_t lattice_count_at_or_below(double y, std::size_t n) {
  const double dn = static_cast<double>(n);
  auto at_or_below = [&](std::size_t k) { return static_cast<double>(k) / dn <= y; };
  double guess = std::floor(y * dn) + 1.0;
  std::size_t m = guess <= 0.0 ? 0 : std::min(n, static_cast<std::size_t>(guess));
  while (m > 0 && !at_or_below(m - 1)) --m;
  while (m < n && at_or_below(m)) ++m;
  return m;
}

double EmpiricalSnapshot::jumped_fraction() const {
  const auto count = std::count_if(particles.begin(), particles.end(),
                                   [](const ParticleRecord& p) { return p.jumped; });
  return static_cast<double>(count) / static_cast<double>(particles.size());
}

double empirical_statistic(const EmpiricalSnapshot& snapshot, const RateFunction& g, double y) {
  double sum = 0.0;
  for (const ParticleRecord& p : snapshot.particles) {
    if (p.y <= y) sum += g(p.rate);
  }
  return sum / static_cast<double>(snapshot.size());
}

std::vector<double> cumulative_statistic(const EmpiricalSnapshot& snapshot,
                                         const RateFunction& g) {
  const std::size_t n = snapshot.size();
  std::vector<double> by_rank(n, 0.0);
  for (const ParticleRecord& p : snapshot.particles) {
    const auto k = static_cast<std::size_t>(std::llround(p.y * static_cast<double>(n)));
    by_rank[k] = g(p.rate);
  }
  std::vector<double> cumulative(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) cumulative[k + 1] = cumulative[k] + by_rank[k];
  for (double& c : cumulative) c /= static_cast<double>(n);
  return cumulative;
}

RankingSystem::RankingSystem(InitialConfiguration initial, JumpSchedule schedule,
                             std::size_t capacity_factor)
    : schedule_(std::move(schedule)),
      initial_rank_(std::move(initial.positions)) {
  const std::vector<double>& rates = initial.rates;
  const std::size_t n = rates.size();
  if (n == 0) throw std::invalid_argument("RankingSystem: N must be >= 1");
  if (initial_rank_.size() != n) {
    throw std::invalid_argument("RankingSystem: rates and positions differ in length");
  }
  if (capacity_factor < 2) throw std::invalid_argument("RankingSystem: capacity factor must be >= 2");
  for (double w : rates) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("RankingSystem: rates must be finite and > 0");
    }
  }

  capacity_ = capacity_factor * n;
  state_.resize(n);
  std::vector<std::uint32_t> seen(n, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t x = initial_rank_[i];
    if (x < 1 || x > n || seen[x - 1]++ != 0) {
      throw std::invalid_argument("RankingSystem: initial positions are not a permutation of 1..N");
    }
    state_[i] = {rates[i], 0, static_cast<std::uint32_t>(capacity_ - n + (x - 1))};
  }
  occupied_.reset(capacity_, capacity_ - n);
  next_free_ = static_cast<std::int64_t>(capacity_ - n) - 1;

  jumped_by_initial_.reset(n, n);
  first_jump_.assign(n, kNever);

  std::vector<PendingJump> heap;
  heap.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double t = schedule_.jump_time(i, 1, 0.0, rates[i]);
    if (t != kNever) heap.push_back({t, i});
  }
  double total_rate = 0.0;
  for (double w : rates) total_rate += w;
  pending_ = JumpQueue(n, kJumpsPerBucket / total_rate, std::move(heap));
}

RankingSystem RankingSystem::init(const InitialProfile& profile, std::size_t n,
                                  std::uint64_t seed) {
  return RankingSystem(sample_rates_and_positions(profile, n, seed), JumpSchedule::random(seed));
}

// The jumper is still at the top of the queue; its next jump replaces it.
void RankingSystem::schedule_next(std::uint32_t particle, double previous) {
  const ParticleState& p = state_[particle];
  const double t = schedule_.jump_time(particle, p.jumps + 1, previous, p.rate);
  if (t != kNever) {
    pending_.replace_top({t, particle});
  } else {
    pending_.pop();
  }
}

std::vector<std::uint32_t> RankingSystem::occupants() const {
  std::vector<std::uint32_t> occupant(capacity_, kEmpty);
  for (std::uint32_t i = 0; i < size(); ++i) occupant[state_[i].slot] = i;
  return occupant;
}

void RankingSystem::compact() {
  std::uint32_t target = static_cast<std::uint32_t>(capacity_ - size());
  for (std::uint32_t occupant : occupants()) {
    if (occupant != kEmpty) state_[occupant].slot = target++;
  }
  occupied_.reset(capacity_, capacity_ - size());
  next_free_ = static_cast<std::int64_t>(capacity_ - size()) - 1;
  ++compactions_;
}

std::optional<double> RankingSystem::next_event_time() const {
  if (pending_.empty()) return std::nullopt;
  return pending_.top().time;
}

std::optional<JumpEvent> RankingSystem::step() {
  if (pending_.empty()) return std::nullopt;
  const PendingJump event = pending_.top();
  const std::uint32_t i = event.particle;
  // Pull the state of upcoming jumpers into cache: the particle record far
  // ahead, and the cells its record points at once that has arrived.
  if (const std::uint32_t far = pending_.peek(kPrefetchFar); far != JumpQueue::kNone) {
    __builtin_prefetch(&state_[far], 1);
  }
  if (const std::uint32_t near = pending_.peek(kPrefetchNear); near != JumpQueue::kNone) {
    const ParticleState& q = state_[near];
    occupied_.prefetch(q.slot);
    if (q.jumps == 0) {
      __builtin_prefetch(&initial_rank_[near]);
      __builtin_prefetch(&first_jump_[near], 1);
    }
  }

  if (next_free_ < 0) compact();
  ParticleState& p = state_[i];
  occupied_.erase(p.slot);
  p.slot = static_cast<std::uint32_t>(next_free_--);
  occupied_.insert(p.slot);

  if (p.jumps++ == 0) {
    first_jump_[i] = event.time;
    jumped_by_initial_.insert(initial_rank_[i] - 1);
    ++jumped_;
  }
  time_ = std::max(time_, event.time);
  ++events_;
  schedule_next(i, event.time);
  return JumpEvent{event.time, i};
}

void RankingSystem::advance_to(double t) {
  if (!(t >= time_)) {
    throw std::invalid_argument("advance_to: target time " + std::to_string(t) +
                                " precedes current time " + std::to_string(time_));
  }
  while (!pending_.empty() && pending_.top().time <= t) step();
  time_ = t;
}

std::uint32_t RankingSystem::position(std::uint32_t particle) const {
  return occupied_.rank(state_[particle].slot);
}

std::vector<std::uint32_t> RankingSystem::positions() const {
  std::vector<std::uint32_t> ranks(size());
  std::uint32_t rank = 0;
  for (std::uint32_t occupant : occupants()) {
    if (occupant != kEmpty) ranks[occupant] = ++rank;
  }
  return ranks;
}

std::vector<std::uint32_t> RankingSystem::positions_parallel() const {
  const auto n = static_cast<std::int64_t>(size());
  std::vector<std::uint32_t> ranks(size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    ranks[static_cast<std::size_t>(i)] = occupied_.rank(state_[static_cast<std::size_t>(i)].slot);
  }
  return ranks;
}

double RankingSystem::boundary() const {
  return static_cast<double>(jumped_) / static_cast<double>(size());
}

double RankingSystem::flow_position(double y) const {
  if (!(y >= 0.0 && y < 1.0)) throw std::invalid_argument("flow_position: y must lie in [0, 1)");
  const std::size_t first = lattice_count_below(y, size());
  const std::size_t count =
      first == 0 ? jumped_ : first < size() ? jumped_ - jumped_by_initial_.rank(first - 1) : 0;
  // On the lattice, land exactly on the lattice point a rank maps to.
  if (scaled_position(static_cast<std::uint32_t>(first + 1), size()) == y) {
    return scaled_position(static_cast<std::uint32_t>(first + count + 1), size());
  }
  return y + static_cast<double>(count) / static_cast<double>(size());
}


double RankingSystem::hat_y_empirical(double y) const {
  if (!(y > boundary())) {
    throw std::domain_error("hat_y_empirical: y must exceed the empirical boundary " +
                            std::to_string(boundary()));
  }
  const std::size_t k = lattice_count_at_or_below(y, size());
  if (k >= size()) throw std::domain_error("hat_y_empirical: no particle lies beyond y");
  // Particles that never jumped keep their initial relative order behind
  // the jumped block, so rank k + 1 holds the (k + 1 - jumped)-th smallest
  // initial rank among them.
  const std::size_t wanted = k + 1 - jumped_;
  std::size_t lo = 1, hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (mid - jumped_by_initial_.rank(mid - 1) >= wanted) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return scaled_position(static_cast<std::uint32_t>(lo), size());
}

EmpiricalSnapshot RankingSystem::snapshot() const {
  EmpiricalSnapshot snap;
  snap.time = time_;
  const std::vector<std::uint32_t> ranks = positions_parallel();
  snap.particles.resize(size());
  for (std::size_t i = 0; i < size(); ++i) {
    snap.particles[i] = ParticleRecord{state_[i].rate, scaled_position(initial_rank_[i], size()),
                                       scaled_position(ranks[i], size()), first_jump_[i] <= time_};
  }
  return snap;
}

}  // namespace srp
