#pragma once

#include <bit>
#include <cstddef>
#include <span>
#include <vector>

namespace srp {

/// Binary indexed tree over non-negative counts, with order-statistic search.
template <typename T>
class FenwickTree {
 public:
  FenwickTree() = default;
  explicit FenwickTree(std::size_t n) : tree_(n + 1, T{}) {}

  std::size_t size() const { return tree_.empty() ? 0 : tree_.size() - 1; }

  /// Rebuilds from plain per-index values in O(n).
  void assign(std::span<const T> values) {
    tree_.assign(values.size() + 1, T{});
    for (std::size_t i = 1; i <= values.size(); ++i) {
      tree_[i] += values[i - 1];
      const std::size_t parent = i + (i & (~i + 1));
      if (parent <= values.size()) tree_[parent] += tree_[i];
    }
  }

  void add(std::size_t index, T delta) {
    for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }

  /// Sum over [0, index].
  T prefix(std::size_t index) const {
    T sum{};
    for (std::size_t i = index + 1; i > 0; i -= i & (~i + 1)) sum += tree_[i];
    return sum;
  }

  /// Sum over [first, size()).
  T suffix(std::size_t first) const {
    if (first == 0) return total();
    return total() - prefix(first - 1);
  }

  T total() const { return size() == 0 ? T{} : prefix(size() - 1); }

  /// Smallest index whose prefix sum reaches `target` (target >= 1), or
  /// size() when the total is smaller.
  std::size_t lower_bound(T target) const {
    std::size_t pos = 0;
    for (std::size_t step = std::bit_floor(size() == 0 ? std::size_t{1} : size()); step > 0;
         step >>= 1) {
      const std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] < target) {
        pos = next;
        target -= tree_[next];
      }
    }
    return pos;
  }

 private:
  std::vector<T> tree_;
};

}  // namespace srp
