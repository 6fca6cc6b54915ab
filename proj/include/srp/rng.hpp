#pragma once

// Philox4x32-10 counter-based generator.
//
// Every random quantity in a run is a pure function of (seed, stream, block):
// the key is the 64-bit run seed, the upper counter words name a stream and
// the lower words index blocks within it. Particle jump times use one stream
// per particle with the jump index as the block, so any simulator that asks
// for "jump j of particle i" sees the same value regardless of event order.

#include <array>
#include <cstdint>
#include <limits>

namespace srp {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

namespace detail {

inline void philox_mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                           std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace detail

constexpr int kPhiloxRounds = 10;

inline PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < kPhiloxRounds; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    detail::philox_mulhilo(kMul0, ctr[0], hi0, lo0);
    detail::philox_mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

/// Stream identifiers. The tag occupies the top 32 bits of a stream id.
enum class StreamTag : std::uint32_t {
  permutation = 1,
  rates = 2,
  jumps = 3,
};

constexpr std::uint64_t make_stream(StreamTag tag, std::uint32_t index = 0) {
  return (static_cast<std::uint64_t>(tag) << 32) | index;
}

/// Maps 64 random bits to a double in (0, 1] with 53 bits of resolution.
constexpr double bits_to_unit_interval(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

inline PhiloxKey key_from_seed(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// The raw block `block` of stream `stream` under `seed`.
inline PhiloxCounter philox_block(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t block) {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(block),
                          static_cast<std::uint32_t>(block >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32)};
  return philox4x32(ctr, key_from_seed(seed));
}

/// Uniform (0, 1] variate taken from the first two words of a block.
inline double philox_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
  const PhiloxCounter out = philox_block(seed, stream, block);
  return bits_to_unit_interval((static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
}

/// Sequential view of one stream; satisfies UniformRandomBitGenerator.
class PhiloxEngine {
 public:
  using result_type = std::uint32_t;

  PhiloxEngine(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (used_ == buffer_.size()) {
      buffer_ = philox_block(seed_, stream_, block_++);
      used_ = 0;
    }
    return buffer_[used_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = (*this)();
    return (hi << 32) | (*this)();
  }

  double uniform() { return bits_to_unit_interval(next_u64()); }

  /// Unbiased integer in [0, bound) by rejection on the top of the range.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  std::size_t used_ = 4;
};

/// Seed used by replica `replica` of a run seeded with `seed`.
constexpr std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) {
  return seed ^ replica;
}

}  // namespace srp
