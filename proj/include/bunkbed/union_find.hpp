#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace bunkbed {

/// Disjoint sets with path halving; rebuilt from scratch per configuration.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) { reset(n); }

  void reset(std::size_t n) {
    parent_.resize(n);
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

  bool connected(std::uint32_t a, std::uint32_t b) { return find(a) == find(b); }

 private:
  std::vector<std::uint32_t> parent_;
};

/// Union by size without path compression, so every union can be undone in
/// LIFO order. find() is O(log n).
class RollbackUnionFind {
 public:
  explicit RollbackUnionFind(std::size_t n = 0) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::uint32_t find(std::uint32_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  /// Both arguments must be distinct roots.
  void unite_roots(std::uint32_t ra, std::uint32_t rb) {
    if (size_[ra] < size_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    size_[ra] += size_[rb];
    history_.push_back(rb);
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    auto ra = find(a), rb = find(b);
    if (ra == rb) return false;
    unite_roots(ra, rb);
    return true;
  }

  void undo() {
    const std::uint32_t rb = history_.back();
    history_.pop_back();
    const std::uint32_t ra = parent_[rb];
    size_[ra] -= size_[rb];
    parent_[rb] = rb;
  }

  /// Makes the current unions permanent.
  void commit() { history_.clear(); }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> history_;
};

}  // namespace bunkbed
