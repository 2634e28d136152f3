#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "latkit/error.hpp"
#include "latkit/order.hpp"

namespace latkit {

using Point = std::int64_t;

/// Union-find with path halving and union by size.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

/// Equivalence relation on a finite carrier, kept as sorted blocks sorted by
/// their least element. Equality is structural.
class Partition {
 public:
  Partition() = default;

  static Partition from_blocks(std::vector<Point> carrier, std::vector<std::vector<Point>> blocks) {
    std::sort(carrier.begin(), carrier.end());
    if (std::adjacent_find(carrier.begin(), carrier.end()) != carrier.end())
      throw Error(ErrorCode::InvalidPartition, "carrier has repeated points");
    std::vector<Point> covered;
    for (auto& b : blocks) {
      if (b.empty()) throw Error(ErrorCode::InvalidPartition, "empty block");
      std::sort(b.begin(), b.end());
      covered.insert(covered.end(), b.begin(), b.end());
    }
    std::sort(covered.begin(), covered.end());
    if (covered != carrier)
      throw Error(ErrorCode::InvalidPartition, "blocks are not a disjoint cover of the carrier");
    std::sort(blocks.begin(), blocks.end());
    Partition p;
    p.carrier_ = std::move(carrier);
    p.blocks_ = std::move(blocks);
    p.reindex();
    return p;
  }

  static Partition discrete(std::vector<Point> carrier) {
    std::vector<std::vector<Point>> blocks;
    for (auto x : carrier) blocks.push_back({x});
    return from_blocks(std::move(carrier), std::move(blocks));
  }

  static Partition full(std::vector<Point> carrier) {
    if (carrier.empty()) return from_blocks({}, {});
    auto c = carrier;
    return from_blocks(std::move(carrier), {std::move(c)});
  }

  /// Least partition of `carrier` relating each listed pair.
  static Partition generated_by(std::vector<Point> carrier, const std::vector<std::pair<Point, Point>>& pairs) {
    std::sort(carrier.begin(), carrier.end());
    DisjointSet ds(carrier.size());
    auto pos = [&](Point x) {
      auto it = std::lower_bound(carrier.begin(), carrier.end(), x);
      if (it == carrier.end() || *it != x)
        throw Error(ErrorCode::InvalidPartition, "pair mentions point outside carrier");
      return static_cast<std::size_t>(it - carrier.begin());
    };
    for (auto [a, b] : pairs) ds.unite(pos(a), pos(b));
    return from_union_find(std::move(carrier), ds);
  }

  const std::vector<Point>& carrier() const noexcept { return carrier_; }
  const std::vector<std::vector<Point>>& blocks() const noexcept { return blocks_; }

  /// Index of the block containing x.
  std::size_t block_of(Point x) const {
    auto it = std::lower_bound(carrier_.begin(), carrier_.end(), x);
    if (it == carrier_.end() || *it != x) throw Error(ErrorCode::CarrierMismatch, "point outside carrier");
    return block_index_[static_cast<std::size_t>(it - carrier_.begin())];
  }

  bool related(Point x, Point y) const { return block_of(x) == block_of(y); }

  /// Refinement order: every block of *this lies inside a block of other.
  bool leq(const Partition& other) const {
    require_same_carrier(other);
    for (const auto& b : blocks_) {
      auto target = other.block_of(b.front());
      for (auto x : b)
        if (other.block_of(x) != target) return false;
    }
    return true;
  }

  Partition join(const Partition& other) const {
    require_same_carrier(other);
    DisjointSet ds(carrier_.size());
    for (const auto* p : {this, &other})
      for (const auto& b : p->blocks_)
        for (std::size_t i = 1; i < b.size(); ++i) ds.unite(position(b[0]), position(b[i]));
    return from_union_find(carrier_, ds);
  }

  Partition meet(const Partition& other) const {
    require_same_carrier(other);
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Point>> cells;
    for (auto x : carrier_) cells[{block_of(x), other.block_of(x)}].push_back(x);
    std::vector<std::vector<Point>> blocks;
    for (auto& [key, cell] : cells) blocks.push_back(std::move(cell));
    return from_blocks(carrier_, std::move(blocks));
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (i) s += ",";
      s += "{";
      for (std::size_t j = 0; j < blocks_[i].size(); ++j) {
        if (j) s += ",";
        s += std::to_string(blocks_[i][j]);
      }
      s += "}";
    }
    return s + "}";
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.carrier_ == b.carrier_ && a.blocks_ == b.blocks_;
  }
  friend bool operator<(const Partition& a, const Partition& b) {
    return std::tie(a.carrier_, a.blocks_) < std::tie(b.carrier_, b.blocks_);
  }

 private:
  static Partition from_union_find(std::vector<Point> carrier, DisjointSet& ds) {
    std::map<std::size_t, std::vector<Point>> groups;
    for (std::size_t i = 0; i < carrier.size(); ++i) groups[ds.find(i)].push_back(carrier[i]);
    std::vector<std::vector<Point>> blocks;
    for (auto& [root, b] : groups) blocks.push_back(std::move(b));
    return from_blocks(std::move(carrier), std::move(blocks));
  }

  std::size_t position(Point x) const {
    return static_cast<std::size_t>(std::lower_bound(carrier_.begin(), carrier_.end(), x) - carrier_.begin());
  }

  void require_same_carrier(const Partition& other) const {
    if (carrier_ != other.carrier_) throw Error(ErrorCode::CarrierMismatch, "partitions on different carriers");
  }

  void reindex() {
    block_index_.assign(carrier_.size(), 0);
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (auto x : blocks_[b]) block_index_[position(x)] = b;
  }

  std::vector<Point> carrier_;
  std::vector<std::vector<Point>> blocks_;
  std::vector<std::size_t> block_index_;
};

/// All partitions of {1..n}, finest first, then by decreasing block count and
/// lexicographically.
inline std::vector<Partition> enumerate_partitions(std::size_t n) {
  std::vector<Point> carrier(n);
  std::iota(carrier.begin(), carrier.end(), Point{1});
  std::vector<Partition> out;
  if (n == 0) {
    out.push_back(Partition::discrete({}));
    return out;
  }
  // Restricted growth strings.
  std::vector<std::size_t> rgs(n, 0);
  while (true) {
    std::size_t k = *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<std::vector<Point>> blocks(k);
    for (std::size_t i = 0; i < n; ++i) blocks[rgs[i]].push_back(carrier[i]);
    out.push_back(Partition::from_blocks(carrier, std::move(blocks)));
    std::size_t i = n;
    bool advanced = false;
    while (i-- > 1) {
      std::size_t prefix_max = *std::max_element(rgs.begin(), rgs.begin() + static_cast<std::ptrdiff_t>(i));
      if (rgs[i] <= prefix_max) {
        ++rgs[i];
        std::fill(rgs.begin() + static_cast<std::ptrdiff_t>(i) + 1, rgs.end(), 0);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  std::sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) {
    if (a.blocks().size() != b.blocks().size()) return a.blocks().size() > b.blocks().size();
    return a.blocks() < b.blocks();
  });
  return out;
}

struct EqLatticeLimits {
  std::size_t max_n = 5;
};

/// Eq(n): the lattice of all partitions of {1..n} under refinement. Element i
/// is enumerate_partitions(n)[i] and is named by its block notation.
inline FiniteLattice eq_lattice(std::size_t n, EqLatticeLimits limits = {}) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "Eq(n) needs n >= 1");
  if (n > limits.max_n)
    throw Error(ErrorCode::BoundExceeded,
                "Eq(" + std::to_string(n) + ") exceeds bound " + std::to_string(limits.max_n));
  auto parts = enumerate_partitions(n);
  std::vector<std::string> names;
  for (const auto& p : parts) names.push_back(p.to_string());
  std::vector<std::vector<char>> m(parts.size(), std::vector<char>(parts.size(), 0));
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = 0; j < parts.size(); ++j) m[i][j] = parts[i].leq(parts[j]);
  return check_lattice(Poset::from_matrix(std::move(names), m));
}

/// Equivalence relation on the natural numbers with finitely many
/// non-diagonal pairs. Only pairs (a, b) with a < b are stored; the set is
/// re-closed under transitivity on every mutation.
class CompactEquiv {
 public:
  CompactEquiv() = default;

  static CompactEquiv from_pairs(const std::vector<std::pair<Point, Point>>& pairs) {
    CompactEquiv e;
    for (auto [a, b] : pairs)
      if (a != b) e.pairs_.insert(std::minmax(a, b));
    e.close();
    return e;
  }

  void add_pair(Point a, Point b) {
    if (a == b) return;
    pairs_.insert(std::minmax(a, b));
    close();
  }

  bool related(Point a, Point b) const { return a == b || pairs_.count(std::minmax(a, b)) > 0; }
  const std::set<std::pair<Point, Point>>& pairs() const noexcept { return pairs_; }
  bool empty() const noexcept { return pairs_.empty(); }

  bool leq(const CompactEquiv& o) const {
    return std::includes(o.pairs_.begin(), o.pairs_.end(), pairs_.begin(), pairs_.end());
  }

  CompactEquiv join(const CompactEquiv& o) const {
    CompactEquiv e = *this;
    e.pairs_.insert(o.pairs_.begin(), o.pairs_.end());
    e.close();
    return e;
  }

  CompactEquiv meet(const CompactEquiv& o) const {
    CompactEquiv e;
    std::set_intersection(pairs_.begin(), pairs_.end(), o.pairs_.begin(), o.pairs_.end(),
                          std::inserter(e.pairs_, e.pairs_.end()));
    return e;
  }

  /// Non-singleton blocks, sorted.
  std::vector<std::vector<Point>> blocks() const {
    std::vector<Point> support;
    for (auto [a, b] : pairs_) {
      support.push_back(a);
      support.push_back(b);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    auto p = Partition::generated_by(support, {pairs_.begin(), pairs_.end()});
    return p.blocks();
  }

  friend bool operator==(const CompactEquiv& a, const CompactEquiv& b) { return a.pairs_ == b.pairs_; }

 private:
  void close() {
    auto bs = blocks();
    pairs_.clear();
    for (const auto& b : bs)
      for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j) pairs_.emplace(b[i], b[j]);
  }

  std::set<std::pair<Point, Point>> pairs_;
};

/// Lifts theta on the carrier Omega to the larger carrier of `rho`, relating
/// x and y iff (rho(x), rho(y)) lies in theta. `rho` must map every point of
/// the larger carrier into Omega and fix Omega pointwise.
inline Partition lift_via_retraction(const Partition& theta, const std::map<Point, Point>& rho) {
  std::vector<Point> big;
  for (auto [x, rx] : rho) {
    big.push_back(x);
    if (!std::binary_search(theta.carrier().begin(), theta.carrier().end(), rx))
      throw Error(ErrorCode::NotARetraction, "rho(" + std::to_string(x) + ") lies outside the base carrier");
  }
  for (auto x : theta.carrier()) {
    auto it = rho.find(x);
    if (it == rho.end() || it->second != x)
      throw Error(ErrorCode::NotARetraction, "rho does not fix " + std::to_string(x));
  }
  std::map<std::size_t, std::vector<Point>> groups;
  for (auto [x, rx] : rho) groups[theta.block_of(rx)].push_back(x);
  std::vector<std::vector<Point>> blocks;
  for (auto& [k, b] : groups) blocks.push_back(std::move(b));
  return Partition::from_blocks(std::move(big), std::move(blocks));
}

}  // namespace latkit
