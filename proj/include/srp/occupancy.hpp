#pragma once

// Occupied/free state of a slot array with rank queries.
//
// One bit per slot, plus a Fenwick tree of counts per block of 1024 slots.
// An update flips one bit and walks a tree 1024 times smaller than the slot
// array, which stays in L1 for millions of slots; a rank query adds at most
// sixteen word popcounts inside its block.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "srp/fenwick.hpp"

namespace srp {

class OccupancyIndex {
 public:
  static constexpr std::size_t kWordsPerBlock = 16;

  OccupancyIndex() = default;

  /// `capacity` slots of which exactly [first_occupied, capacity) are taken.
  void reset(std::size_t capacity, std::size_t first_occupied) {
    capacity_ = capacity;
    words_.assign((capacity + 63) / 64, 0);
    for (std::size_t s = first_occupied; s < capacity; ++s) words_[s / 64] |= std::uint64_t{1} << (s % 64);
    std::vector<std::uint32_t> counts((words_.size() + kWordsPerBlock - 1) / kWordsPerBlock, 0);
    for (std::size_t w = 0; w < words_.size(); ++w) {
      counts[w / kWordsPerBlock] += static_cast<std::uint32_t>(std::popcount(words_[w]));
    }
    counts_.assign(counts);
  }

  std::size_t capacity() const { return capacity_; }

  void insert(std::size_t slot) {
    words_[slot / 64] |= std::uint64_t{1} << (slot % 64);
    counts_.add(slot / 64 / kWordsPerBlock, 1u);
  }

  void erase(std::size_t slot) {
    words_[slot / 64] &= ~(std::uint64_t{1} << (slot % 64));
    counts_.add(slot / 64 / kWordsPerBlock, static_cast<std::uint32_t>(-1));
  }

  /// Hints the bitmap word of `slot` into cache.
  void prefetch(std::size_t slot) const { __builtin_prefetch(&words_[slot / 64], 1); }

  /// Number of occupied slots in [0, slot].
  std::uint32_t rank(std::size_t slot) const {
    const std::size_t w = slot / 64;
    const std::size_t block = w / kWordsPerBlock;
    std::uint32_t count = block == 0 ? 0u : counts_.prefix(block - 1);
    for (std::size_t v = block * kWordsPerBlock; v < w; ++v) {
      count += static_cast<std::uint32_t>(std::popcount(words_[v]));
    }
    const std::uint64_t upto = (slot % 64 == 63) ? ~std::uint64_t{0}
                                                 : (std::uint64_t{1} << (slot % 64 + 1)) - 1;
    return count + static_cast<std::uint32_t>(std::popcount(words_[w] & upto));
  }

 private:
  std::size_t capacity_ = 0;
  std::vector<std::uint64_t> words_;
  FenwickTree<std::uint32_t> counts_;  // per block of kWordsPerBlock words
};

}  // namespace srp
