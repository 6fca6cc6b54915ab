#pragma once

// Calendar queue for pending jumps.
//
// Time is cut into buckets of fixed width. A window of consecutive buckets
// is stored inline, one cache line of up to four jumps per bucket; a jump
// that finds its bucket full goes to a small spill heap, and jumps past the
// window wait in an overflow list that is redistributed each time the window
// moves on. The bucket being drained is kept sorted by (time, particle), so
// jumps come out in exactly the order a binary heap would give. With the
// width set to 1 / (sum of rates) a bucket holds one jump on average, an
// insert touches one line and buckets are drained front to back.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace srp {

struct PendingJump {
  double time;
  std::uint32_t particle;

  bool operator<(const PendingJump& other) const {
    return time < other.time || (time == other.time && particle < other.particle);
  }
  bool operator>(const PendingJump& other) const { return other < *this; }
};

class JumpQueue {
 public:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  JumpQueue() = default;

  /// `buckets` is rounded up to a power of two.
  JumpQueue(std::size_t buckets, double bucket_width, std::vector<PendingJump> initial)
      : width_(bucket_width),
        mask_(std::bit_ceil(std::max<std::size_t>(buckets, 1)) - 1),
        lines_(mask_ + 1),
        fill_(mask_ + 1, 0),
        overflow_(std::move(initial)),
        size_(overflow_.size()) {
    if (!(width_ > 0.0) || !std::isfinite(width_)) {
      throw std::invalid_argument("JumpQueue: bucket width must be finite and > 0");
    }
    if (size_ == 0) return;
    cursor_ = first_overflow_bucket() - 1;
    window_end_ = cursor_ + 1;
    refill();
  }

  bool empty() const { return size_ == 0; }
  std::size_t size() const { return size_; }
  const PendingJump& top() const { return current_.back(); }

  /// Particle of some jump due soon after the top, or kNone; the `depth`-th
  /// in time order within the current bucket, then the following buckets in
  /// storage order. Only meant for prefetching.
  std::uint32_t peek(std::size_t depth) const {
    if (depth < current_.size()) return current_[current_.size() - 1 - depth].particle;
    depth -= current_.size();
    for (std::int64_t k = cursor_ + 1; k < window_end_ && k <= cursor_ + kPeekBuckets; ++k) {
      const std::size_t b = static_cast<std::size_t>(k) & mask_;
      if (depth < fill_[b]) return lines_[b].items[depth].particle;
      depth -= fill_[b];
    }
    return kNone;
  }

  void pop() {
    current_.pop_back();
    --size_;
    refill();
  }

  /// pop() then push(item); `item` must not be earlier than the old top.
  void replace_top(PendingJump item) {
    current_.pop_back();
    insert(item);
    refill();
  }

  /// `item` must not be earlier than the current top.
  void push(PendingJump item) {
    ++size_;
    insert(item);
    refill();
  }

 private:
  static constexpr std::size_t kLineSlots = 4;
  static constexpr std::int64_t kPeekBuckets = 16;
  static constexpr double kFarBucket = 0x1p62;

  struct alignas(64) Line {
    PendingJump items[kLineSlots];
  };

  std::int64_t bucket_of(double t) const {
    return static_cast<std::int64_t>(std::min(std::floor(t / width_), kFarBucket));
  }

  std::int64_t first_overflow_bucket() const {
    std::int64_t first = std::numeric_limits<std::int64_t>::max();
    for (const PendingJump& item : overflow_) first = std::min(first, bucket_of(item.time));
    return first;
  }

  void insert(const PendingJump& item) {
    const std::int64_t k = bucket_of(item.time);
    if (k <= cursor_) {
      const auto at = std::lower_bound(current_.begin(), current_.end(), item, std::greater<>{});
      current_.insert(at, item);
    } else if (k < window_end_) {
      const std::size_t b = static_cast<std::size_t>(k) & mask_;
      if (fill_[b] < kLineSlots) {
        lines_[b].items[fill_[b]++] = item;
      } else {
        spill_.push_back(item);
        std::push_heap(spill_.begin(), spill_.end(), std::greater<>{});
      }
    } else {
      overflow_.push_back(item);
    }
  }

  // Moves to the next non-empty bucket when the current one is used up.
  void refill() {
    while (current_.empty() && size_ > 0) {
      if (++cursor_ >= window_end_) roll_window();
      const std::size_t b = static_cast<std::size_t>(cursor_) & mask_;
      current_.insert(current_.end(), lines_[b].items, lines_[b].items + fill_[b]);
      fill_[b] = 0;
      while (!spill_.empty() && bucket_of(spill_.front().time) <= cursor_) {
        std::pop_heap(spill_.begin(), spill_.end(), std::greater<>{});
        current_.push_back(spill_.back());
        spill_.pop_back();
      }
      std::sort(current_.begin(), current_.end(), std::greater<>{});
    }
  }

  // Every bucket of the old window, spills included, is drained here.
  void roll_window() {
    cursor_ = std::max(cursor_, first_overflow_bucket());
    window_end_ = cursor_ + static_cast<std::int64_t>(mask_ + 1);
    std::size_t kept = 0;
    for (const PendingJump& item : overflow_) {
      if (bucket_of(item.time) < window_end_) {
        insert(item);
      } else {
        overflow_[kept++] = item;
      }
    }
    overflow_.resize(kept);
  }

  double width_ = 1.0;
  std::size_t mask_ = 0;
  std::vector<Line> lines_;
  std::vector<std::uint8_t> fill_;
  std::vector<PendingJump> spill_;    // min-heap
  std::vector<PendingJump> current_;  // bucket `cursor_`, sorted descending
  std::vector<PendingJump> overflow_;
  std::int64_t cursor_ = 0;
  std::int64_t window_end_ = 0;
  std::size_t size_ = 0;
};

}  // namespace srp
