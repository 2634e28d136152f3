#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "latkit/element_set.hpp"
#include "latkit/error.hpp"

namespace latkit {

/// Finite poset on elements 0..n-1, each carrying an opaque string id.
/// The order is stored as down-sets and up-sets (full boolean matrix).
class Poset {
 public:
  Poset() = default;

  /// Builds a poset from a relation. With `covers` set, the relation is
  /// closed reflexively and transitively first; otherwise it must already
  /// be the full order.
  static Poset from_relation(std::vector<std::string> names,
                             const std::vector<std::pair<Element, Element>>& leq,
                             bool covers = false) {
    const std::size_t n = names.size();
    check_unique(names);
    std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
    for (auto [a, b] : leq) {
      if (a >= n || b >= n) throw Error(ErrorCode::NotAPoset, "relation mentions unknown element");
      m[a][b] = 1;
    }
    if (covers) {
      for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          if (m[i][k])
            for (std::size_t j = 0; j < n; ++j)
              if (m[k][j]) m[i][j] = 1;
    }
    return from_matrix(std::move(names), m);
  }

  /// Validates reflexivity, antisymmetry and transitivity of a full matrix.
  static Poset from_matrix(std::vector<std::string> names, const std::vector<std::vector<char>>& m) {
    const std::size_t n = names.size();
    check_unique(names);
    for (std::size_t i = 0; i < n; ++i) {
      if (!m[i][i]) throw Error(ErrorCode::NotAPoset, "not reflexive at " + names[i]);
      for (std::size_t j = i + 1; j < n; ++j)
        if (m[i][j] && m[j][i])
          throw Error(ErrorCode::NotAPoset, "not antisymmetric: " + names[i] + ", " + names[j]);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (m[i][j])
          for (std::size_t k = 0; k < n; ++k)
            if (m[j][k] && !m[i][k])
              throw Error(ErrorCode::NotAPoset,
                          "not transitive: " + names[i] + " <= " + names[j] + " <= " + names[k]);
    Poset p;
    p.names_ = std::move(names);
    p.down_.assign(n, ElementSet(n));
    p.up_.assign(n, ElementSet(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (m[i][j]) {
          p.down_[j].insert(i);
          p.up_[i].insert(j);
        }
    p.index_ = build_index(p.names_);
    return p;
  }

  std::size_t size() const noexcept { return names_.size(); }
  bool leq(Element a, Element b) const noexcept { return down_[b].contains(a); }
  const ElementSet& down(Element e) const noexcept { return down_[e]; }
  const ElementSet& up(Element e) const noexcept { return up_[e]; }
  const std::string& name(Element e) const { return names_[e]; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<Element> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  ElementSet down_closure(const ElementSet& s) const {
    ElementSet out(size());
    s.for_each([&](Element e) { out |= down_[e]; });
    return out;
  }
  ElementSet up_closure(const ElementSet& s) const {
    ElementSet out(size());
    s.for_each([&](Element e) { out |= up_[e]; });
    return out;
  }
  bool is_lower_subset(const ElementSet& s) const { return down_closure(s) == s; }
  bool is_upper_subset(const ElementSet& s) const { return up_closure(s) == s; }

  /// Same carrier, reversed order.
  Poset reversed() const {
    Poset p = *this;
    std::swap(p.down_, p.up_);
    return p;
  }

  /// Full reflexive-transitive relation as pairs (a, b) with a <= b.
  std::vector<std::pair<Element, Element>> relation() const {
    std::vector<std::pair<Element, Element>> out;
    for (std::size_t b = 0; b < size(); ++b)
      down_[b].for_each([&](Element a) { out.emplace_back(a, b); });
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const Poset& a, const Poset& b) {
    return a.names_ == b.names_ && a.down_ == b.down_;
  }

 private:
  static void check_unique(const std::vector<std::string>& names) {
    std::set<std::string> seen;
    for (const auto& n : names)
      if (!seen.insert(n).second) throw Error(ErrorCode::NotAPoset, "duplicate element id " + n);
  }
  static std::unordered_map<std::string, Element> build_index(const std::vector<std::string>& names) {
    std::unordered_map<std::string, Element> idx;
    for (std::size_t i = 0; i < names.size(); ++i) idx.emplace(names[i], i);
    return idx;
  }

  std::vector<std::string> names_;
  std::vector<ElementSet> down_;
  std::vector<ElementSet> up_;
  std::unordered_map<std::string, Element> index_;
};

/// A finite lattice: a poset together with its total join and meet tables.
class FiniteLattice {
 public:
  FiniteLattice() = default;

  const Poset& poset() const noexcept { return poset_; }
  std::size_t size() const noexcept { return poset_.size(); }
  bool leq(Element a, Element b) const noexcept { return poset_.leq(a, b); }
  Element join(Element a, Element b) const noexcept { return join_[a * size() + b]; }
  Element meet(Element a, Element b) const noexcept { return meet_[a * size() + b]; }
  Element zero() const noexcept { return zero_; }
  Element one() const noexcept { return one_; }
  const std::string& name(Element e) const { return poset_.name(e); }
  std::optional<Element> find(const std::string& name) const { return poset_.find(name); }

  template <class Range>
  Element join_all(const Range& r) const {
    Element acc = zero_;
    for (auto e : r) acc = join(acc, static_cast<Element>(e));
    return acc;
  }

  friend bool operator==(const FiniteLattice& a, const FiniteLattice& b) {
    return a.poset_ == b.poset_ && a.join_ == b.join_ && a.meet_ == b.meet_ && a.zero_ == b.zero_ &&
           a.one_ == b.one_;
  }

 private:
  friend FiniteLattice check_lattice(const Poset& p);
  friend FiniteLattice dualize(const FiniteLattice& l);

  Poset poset_;
  std::vector<Element> join_;
  std::vector<Element> meet_;
  Element zero_ = 0;
  Element one_ = 0;
};

namespace detail {

/// Least element of `s` under the order, if `s` has one.
inline std::optional<Element> least_of(const Poset& p, const ElementSet& s) {
  std::optional<Element> found;
  s.for_each([&](Element e) {
    if (!found && s.subset_of(p.up(e))) found = e;
  });
  return found;
}

inline std::optional<Element> greatest_of(const Poset& p, const ElementSet& s) {
  std::optional<Element> found;
  s.for_each([&](Element e) {
    if (!found && s.subset_of(p.down(e))) found = e;
  });
  return found;
}

}  // namespace detail

/// Computes join/meet tables, failing on the first pair without a least upper
/// bound or greatest lower bound.
inline FiniteLattice check_lattice(const Poset& p) {
  const std::size_t n = p.size();
  if (n == 0) throw Error(ErrorCode::NotALattice, "empty poset");
  FiniteLattice l;
  l.poset_ = p;
  l.join_.resize(n * n);
  l.meet_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      auto lub = detail::least_of(p, p.up(a) & p.up(b));
      if (!lub) throw Error(ErrorCode::NotALattice, "no join for (" + p.name(a) + ", " + p.name(b) + ")");
      auto glb = detail::greatest_of(p, p.down(a) & p.down(b));
      if (!glb) throw Error(ErrorCode::NotALattice, "no meet for (" + p.name(a) + ", " + p.name(b) + ")");
      l.join_[a * n + b] = l.join_[b * n + a] = *lub;
      l.meet_[a * n + b] = l.meet_[b * n + a] = *glb;
    }
  ElementSet all = ElementSet::full(n);
  l.zero_ = *detail::least_of(p, all);
  l.one_ = *detail::greatest_of(p, all);
  return l;
}

/// Same carrier with the order reversed: joins and meets swap, as do 0 and 1.
inline FiniteLattice dualize(const FiniteLattice& l) {
  FiniteLattice d;
  d.poset_ = l.poset_.reversed();
  d.join_ = l.meet_;
  d.meet_ = l.join_;
  d.zero_ = l.one_;
  d.one_ = l.zero_;
  return d;
}

/// Adds a fresh least element. Original elements keep their indices; the new
/// zero is the last index.
inline FiniteLattice adjoin_zero(const FiniteLattice& l, std::string zero_name = "bot") {
  while (l.find(zero_name)) zero_name += "'";
  std::vector<std::string> names = l.poset().names();
  names.push_back(zero_name);
  auto rel = l.poset().relation();
  const Element z = l.size();
  for (Element e = 0; e <= z; ++e) rel.emplace_back(z, e);
  return check_lattice(Poset::from_relation(std::move(names), rel));
}

/// Sub-poset on the given elements (in the given order), with the induced order.
inline Poset restrict_poset(const Poset& p, const std::vector<Element>& keep) {
  std::vector<std::string> names;
  for (auto e : keep) names.push_back(p.name(e));
  std::vector<std::vector<char>> m(keep.size(), std::vector<char>(keep.size(), 0));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) m[i][j] = p.leq(keep[i], keep[j]);
  return Poset::from_matrix(std::move(names), m);
}

/// The sublattice carried by `keep`, which must be closed under join and meet.
inline FiniteLattice sublattice(const FiniteLattice& l, std::vector<Element> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  ElementSet s = ElementSet::of(l.size(), keep);
  for (auto a : keep)
    for (auto b : keep)
      if (!s.contains(l.join(a, b)) || !s.contains(l.meet(a, b)))
        throw Error(ErrorCode::NotASublattice,
                    "not closed under join/meet at (" + l.name(a) + ", " + l.name(b) + ")");
  return check_lattice(restrict_poset(l.poset(), keep));
}

/// Copy of `l` whose non-zero elements are renamed `prefix + name` and whose
/// zero is renamed `zero_name`.
inline FiniteLattice rename(const FiniteLattice& l, const std::string& prefix,
                            const std::string& zero_name = "0") {
  std::vector<std::string> names;
  for (Element e = 0; e < l.size(); ++e)
    names.push_back(e == l.zero() ? zero_name : prefix + l.name(e));
  return check_lattice(Poset::from_relation(std::move(names), l.poset().relation()));
}

/// Chain 0 < 1 < ... < n-1 with names "0".."n-1".
inline FiniteLattice chain(std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::pair<Element, Element>> covers;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    if (i + 1 < n) covers.emplace_back(i, i + 1);
  }
  return check_lattice(Poset::from_relation(std::move(names), covers, true));
}

/// The diamond: 0 < a, b, c < 1.
inline FiniteLattice m3() {
  return check_lattice(Poset::from_relation(
      {"0", "a", "b", "c", "1"}, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}}, true));
}

/// The pentagon: 0 < a < b < 1, 0 < c < 1.
inline FiniteLattice n5() {
  return check_lattice(
      Poset::from_relation({"0", "a", "b", "c", "1"}, {{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}}, true));
}

/// Canonical code of a finite poset on a fixed labelling: the row-major
/// order matrix, minimised over all relabellings that fix 0 and n-1 when
/// `fix_ends` is set. Exponential; intended for n <= 8.
inline std::vector<bool> canonical_code(const Poset& p, bool fix_ends) {
  const std::size_t n = p.size();
  std::vector<Element> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  auto first = perm.begin();
  auto last = perm.end();
  if (fix_ends && n >= 2) {
    ++first;
    --last;
  }
  std::vector<bool> best;
  do {
    std::vector<bool> code;
    code.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) code.push_back(p.leq(perm[i], perm[j]));
    if (best.empty() || code < best) best = std::move(code);
  } while (std::next_permutation(first, last));
  return best;
}

struct EnumerationLimits {
  std::size_t max_size = 7;
};

/// All lattices on n elements up to isomorphism, in a deterministic order.
/// Bottom is named "0", top "1", the others "a", "b", ...
inline std::vector<FiniteLattice> enumerate_lattices(std::size_t n, EnumerationLimits limits = {}) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "lattice size must be positive");
  if (n > limits.max_size)
    throw Error(ErrorCode::BoundExceeded,
                "n = " + std::to_string(n) + " exceeds bound " + std::to_string(limits.max_size));
  if (n == 1) return {check_lattice(Poset::from_relation({"0"}, {}, true))};
  const std::size_t mid = n - 2;
  std::vector<std::string> names{"0"};
  for (std::size_t i = 0; i < mid; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  names.push_back("1");

  // Strict orders on the middle elements compatible with index order; every
  // poset has such a labelling (a linear extension).
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < mid; ++i)
    for (std::size_t j = i + 1; j < mid; ++j) slots.emplace_back(i, j);

  std::set<std::vector<bool>> seen;
  std::vector<std::pair<std::vector<bool>, FiniteLattice>> found;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      m[i][i] = 1;
      m[0][i] = 1;
      m[i][n - 1] = 1;
    }
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1) m[slots[s].first + 1][slots[s].second + 1] = 1;
    bool transitive = true;
    for (std::size_t i = 1; i + 1 < n && transitive; ++i)
      for (std::size_t j = 1; j + 1 < n && transitive; ++j)
        if (i != j && m[i][j])
          for (std::size_t k = 1; k + 1 < n; ++k)
            if (j != k && m[j][k] && !m[i][k]) {
              transitive = false;
              break;
            }
    if (!transitive) continue;
    Poset p = Poset::from_matrix(names, m);
    FiniteLattice l;
    try {
      l = check_lattice(p);
    } catch (const Error&) {
      continue;
    }
    auto code = canonical_code(p, true);
    if (seen.insert(code).second) found.emplace_back(std::move(code), std::move(l));
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<FiniteLattice> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

}  // namespace latkit
