#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "latkit/element_set.hpp"
#include "latkit/error.hpp"
#include "latkit/order.hpp"
#include "latkit/partial_lattice.hpp"
#include "latkit/term.hpp"

namespace latkit {

/// I(x) = P↓x and F(x) = P↑x for a term x of F_L(P).
struct TermBounds {
  OIdeal ideal;
  OFilter filter;
};

struct DecisionOptions {
  std::size_t depth_budget = 4096;
  bool memoize_pairs = true;
  std::size_t memo_limit = std::size_t{1} << 22;
};

/// One step of a decision: which rule fired on (s, t) and its outcome.
/// Rules: 'g' generator on the left, 'f' generator on the right, 'a' join on
/// the left, 'b' meet on the right, 'e' meet-versus-join, 'p' bounds prune,
/// 'r' reflexivity.
struct TraceStep {
  std::size_t depth;
  TermId s;
  TermId t;
  char rule;
  bool result;
};

/// Decides the order of the free lattice F_L(P) on a partial lattice P.
///
/// Generators resolve through the bounds I(t), F(s); a join on the left or a
/// meet on the right splits conjunctively; the remaining meet-versus-join
/// case is the Whitman-type disjunction, tried as: a P-element between the
/// two sides, then s0 <= t, s1 <= t, s <= t0, s <= t1.
///
/// Bounds are memoized per term id and composite pairs per (s, t). A context
/// is single-writer.
class FreeLattice {
 public:
  FreeLattice(const PartialLattice& pl, TermStore& store, DecisionOptions options = {})
      : pl_(&pl), store_(&store), options_(options) {}

  const PartialLattice& partial_lattice() const noexcept { return *pl_; }
  TermStore& store() noexcept { return *store_; }

  const TermBounds& bounds(TermId t) {
    if (t.value < bounds_.size() && bounds_[t.value]) return *bounds_[t.value];
    auto b = std::make_unique<TermBounds>(compute_bounds(t));
    if (bounds_.size() <= t.value) bounds_.resize(t.value + 1);
    bounds_[t.value] = std::move(b);
    return *bounds_[t.value];
  }

  bool leq(TermId s, TermId t) { return decide(s, t, 0); }
  bool equal(TermId s, TermId t) { return leq(s, t) && leq(t, s); }

  /// As leq, recording every rule application. Pair memoization is bypassed
  /// so the trace is complete.
  bool leq_traced(TermId s, TermId t, std::vector<TraceStep>& trace) {
    trace_ = &trace;
    bool r;
    try {
      r = decide(s, t, 0);
    } catch (...) {
      trace_ = nullptr;
      throw;
    }
    trace_ = nullptr;
    return r;
  }

  /// Forgets everything cached about terms with id >= mark (see
  /// TermStore::rollback).
  void forget_from(std::size_t mark) {
    if (bounds_.size() > mark) bounds_.resize(mark);
    if (!memo_.empty() && memo_max_id_ >= mark) {
      for (auto it = memo_.begin(); it != memo_.end();) {
        if ((it->first >> 32) >= mark || (it->first & 0xffffffffu) >= mark)
          it = memo_.erase(it);
        else
          ++it;
      }
    }
  }

  void clear_pair_memo() { memo_.clear(); }

 private:
  TermBounds compute_bounds(TermId t) {
    const std::size_t n = pl_->size();
    if (store_->is_generator(t)) {
      Element g = store_->generator_of(t);
      if (g >= n) throw Error(ErrorCode::UnknownGenerator, "generator " + std::to_string(g) + " is not in P");
      return TermBounds{OIdeal{pl_->poset().down(g)}, OFilter{pl_->poset().up(g)}};
    }
    const TermBounds& l = bounds(store_->lhs(t));
    const TermBounds& r = bounds(store_->rhs(t));
    if (store_->kind(t) == TermKind::Join) {
      return TermBounds{pl_->o_ideal_closure(l.ideal.members | r.ideal.members),
                        OFilter{l.filter.members & r.filter.members}};
    }
    return TermBounds{OIdeal{l.ideal.members & r.ideal.members},
                      pl_->o_filter_closure(l.filter.members | r.filter.members)};
  }

  bool note(std::size_t depth, TermId s, TermId t, char rule, bool result) {
    if (trace_) trace_->push_back(TraceStep{depth, s, t, rule, result});
    return result;
  }

  bool decide(TermId s, TermId t, std::size_t depth) {
    if (depth > options_.depth_budget)
      throw Error(ErrorCode::DepthBudgetExceeded, "recursion deeper than " + std::to_string(options_.depth_budget));
    if (s == t) return note(depth, s, t, 'r', true);
    if (store_->is_generator(s)) return note(depth, s, t, 'g', bounds(t).ideal.members.contains(store_->generator_of(s)));
    if (store_->is_generator(t)) return note(depth, s, t, 'f', bounds(s).filter.members.contains(store_->generator_of(t)));

    const std::uint64_t key = (static_cast<std::uint64_t>(s.value) << 32) | t.value;
    const bool use_memo = options_.memoize_pairs && trace_ == nullptr;
    if (use_memo) {
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }

    bool result;
    const TermBounds& bs = bounds(s);
    const TermBounds& bt = bounds(t);
    if (!bs.ideal.members.subset_of(bt.ideal.members) || !bt.filter.members.subset_of(bs.filter.members)) {
      result = note(depth, s, t, 'p', false);
    } else if (store_->kind(s) == TermKind::Join) {
      result = decide(store_->lhs(s), t, depth + 1) && decide(store_->rhs(s), t, depth + 1);
      note(depth, s, t, 'a', result);
    } else if (store_->kind(t) == TermKind::Meet) {
      result = decide(s, store_->lhs(t), depth + 1) && decide(s, store_->rhs(t), depth + 1);
      note(depth, s, t, 'b', result);
    } else {
      result = bs.filter.members.intersects(bt.ideal.members) || decide(store_->lhs(s), t, depth + 1) ||
               decide(store_->rhs(s), t, depth + 1) || decide(s, store_->lhs(t), depth + 1) ||
               decide(s, store_->rhs(t), depth + 1);
      note(depth, s, t, 'e', result);
    }

    if (use_memo) {
      if (memo_.size() >= options_.memo_limit) memo_.clear();
      memo_.emplace(key, result);
      memo_max_id_ = std::max<std::size_t>(memo_max_id_, std::max(s.value, t.value));
    }
    return result;
  }

  const PartialLattice* pl_;
  TermStore* store_;
  DecisionOptions options_;
  std::vector<std::unique_ptr<TermBounds>> bounds_;
  std::unordered_map<std::uint64_t, bool> memo_;
  std::size_t memo_max_id_ = 0;
  std::vector<TraceStep>* trace_ = nullptr;
};

inline TermBounds bounds_of(TermStore& store, TermId t, const PartialLattice& pl) {
  FreeLattice fl(pl, store);
  return fl.bounds(t);
}

inline bool decide_leq(TermStore& store, TermId s, TermId t, const PartialLattice& pl, DecisionOptions options = {}) {
  FreeLattice fl(pl, store, options);
  return fl.leq(s, t);
}

inline bool term_eq(TermStore& store, TermId s, TermId t, const PartialLattice& pl) {
  FreeLattice fl(pl, store);
  return fl.equal(s, t);
}

/// Checks that v: P -> L preserves the order and every declared join and meet.
inline void check_valuation(const PartialLattice& pl, const FiniteLattice& l, const std::vector<Element>& v) {
  if (v.size() != pl.size()) throw Error(ErrorCode::InvalidValuation, "valuation does not cover P");
  for (auto x : v)
    if (x >= l.size()) throw Error(ErrorCode::InvalidValuation, "value outside the target lattice");
  for (Element a = 0; a < pl.size(); ++a)
    for (Element b = 0; b < pl.size(); ++b)
      if (pl.leq(a, b) && !l.leq(v[a], v[b]))
        throw Error(ErrorCode::InvalidValuation, "order not preserved at " + pl.name(a) + " <= " + pl.name(b));
  for (const auto& d : pl.joins()) {
    Element acc = v[d.args[0]];
    for (auto e : d.args) acc = l.join(acc, v[e]);
    if (acc != v[d.result]) throw Error(ErrorCode::InvalidValuation, "declared join of " + pl.name(d.result) + " not preserved");
  }
  for (const auto& d : pl.meets()) {
    Element acc = v[d.args[0]];
    for (auto e : d.args) acc = l.meet(acc, v[e]);
    if (acc != v[d.result]) throw Error(ErrorCode::InvalidValuation, "declared meet of " + pl.name(d.result) + " not preserved");
  }
}

/// Structural evaluation of t under v, without validating v.
inline Element evaluate(const TermStore& store, TermId t, const FiniteLattice& l, const std::vector<Element>& v) {
  if (store.is_generator(t)) {
    Element g = store.generator_of(t);
    if (g >= v.size()) throw Error(ErrorCode::UnknownGenerator, "generator " + std::to_string(g) + " has no value");
    return v[g];
  }
  Element a = evaluate(store, store.lhs(t), l, v);
  Element b = evaluate(store, store.rhs(t), l, v);
  return store.kind(t) == TermKind::Join ? l.join(a, b) : l.meet(a, b);
}

inline Element valuation_eval(const TermStore& store, TermId t, const PartialLattice& pl, const FiniteLattice& l,
                              const std::vector<Element>& v) {
  check_valuation(pl, l, v);
  return evaluate(store, t, l, v);
}

struct SeparatingValuation {
  std::size_t lattice_index;
  std::vector<Element> values;
  Element left;
  Element right;
};

/// Searches valid valuations into the lattices of `pool`, in order, for one
/// with val(s) not below val(t). Absence of a result proves nothing.
inline std::optional<SeparatingValuation> find_separating_valuation(const TermStore& store, TermId s, TermId t,
                                                                    const PartialLattice& pl,
                                                                    std::span<const FiniteLattice> pool,
                                                                    std::size_t max_maps_per_lattice = 1u << 20) {
  for (std::size_t li = 0; li < pool.size(); ++li) {
    const FiniteLattice& l = pool[li];
    std::vector<Element> v(pl.size(), 0);
    for (std::size_t tried = 0; tried < max_maps_per_lattice; ++tried) {
      bool valid = true;
      try {
        check_valuation(pl, l, v);
      } catch (const Error&) {
        valid = false;
      }
      if (valid) {
        Element a = evaluate(store, s, l, v);
        Element b = evaluate(store, t, l, v);
        if (!l.leq(a, b)) return SeparatingValuation{li, v, a, b};
      }
      std::size_t i = 0;
      while (i < v.size() && ++v[i] == l.size()) v[i++] = 0;
      if (i == v.size()) break;
    }
  }
  return std::nullopt;
}

struct TermEnumerationLimits {
  std::size_t max_depth = 4;
  std::size_t max_terms = 8'000'000;
};

/// Predicted size of enumerate_terms(k generators, depth).
inline std::size_t term_count(std::size_t generators, std::size_t depth) {
  auto pairs = [](std::size_t n) { return n * (n - (n ? 1 : 0)) / 2; };
  std::size_t prev = 0, cur = generators;
  for (std::size_t d = 1; d <= depth; ++d) {
    std::size_t next = cur + 2 * (pairs(cur) - pairs(prev));
    prev = cur;
    cur = next;
  }
  return cur;
}

/// All terms of depth <= `depth` over `generators`, modulo commutativity and
/// without nodes whose two children coincide. Ordered by depth level; each
/// level extends the previous one.
inline std::vector<TermId> enumerate_terms(TermStore& store, const std::vector<Element>& generators, std::size_t depth,
                                           TermEnumerationLimits limits = {}) {
  if (depth > limits.max_depth)
    throw Error(ErrorCode::BoundExceeded, "term depth " + std::to_string(depth) + " exceeds bound " +
                                              std::to_string(limits.max_depth));
  if (term_count(generators.size(), depth) > limits.max_terms)
    throw Error(ErrorCode::BoundExceeded, "term enumeration would exceed " + std::to_string(limits.max_terms));
  std::vector<TermId> terms;
  for (auto g : generators) terms.push_back(store.generator(g));
  std::size_t old_end = 0;
  for (std::size_t d = 1; d <= depth; ++d) {
    const std::size_t level_end = terms.size();
    for (std::size_t j = old_end; j < level_end; ++j)
      for (std::size_t i = 0; i < j; ++i) {
        terms.push_back(store.join(terms[i], terms[j]));
        terms.push_back(store.meet(terms[i], terms[j]));
      }
    old_end = level_end;
  }
  return terms;
}

}  // namespace latkit
