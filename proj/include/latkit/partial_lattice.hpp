#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "latkit/element_set.hpp"
#include "latkit/error.hpp"
#include "latkit/order.hpp"

namespace latkit {

/// A declared join (or meet): `result` is the join (meet) of `args`.
/// `args` is sorted, duplicate-free, and has at least two elements.
struct Declaration {
  std::vector<Element> args;
  Element result;

  friend bool operator==(const Declaration&, const Declaration&) = default;
  friend auto operator<=>(const Declaration&, const Declaration&) = default;
};

/// Lower subset closed under declared joins.
struct OIdeal {
  ElementSet members;
  friend bool operator==(const OIdeal&, const OIdeal&) = default;
};

/// Upper subset closed under declared meets.
struct OFilter {
  ElementSet members;
  friend bool operator==(const OFilter&, const OFilter&) = default;
};

/// A poset with partial join and meet operations on nonempty finite subsets.
class PartialLattice {
 public:
  PartialLattice() = default;
  explicit PartialLattice(Poset poset) : poset_(std::move(poset)) { reindex(); }

  /// Every binary join and meet of a finite lattice. Binary declarations
  /// suffice: closure under them implies closure under all finite ones.
  static PartialLattice from_lattice(const FiniteLattice& l) {
    PartialLattice pl(l.poset());
    for (Element a = 0; a < l.size(); ++a)
      for (Element b = a + 1; b < l.size(); ++b) {
        pl.declare_join({a, b}, l.join(a, b));
        pl.declare_meet({a, b}, l.meet(a, b));
      }
    return pl;
  }

  void declare_join(std::vector<Element> args, Element result) { declare(joins_, std::move(args), result, "join"); }
  void declare_meet(std::vector<Element> args, Element result) { declare(meets_, std::move(args), result, "meet"); }

  const Poset& poset() const noexcept { return poset_; }
  std::size_t size() const noexcept { return poset_.size(); }
  bool leq(Element a, Element b) const noexcept { return poset_.leq(a, b); }
  const std::string& name(Element e) const { return poset_.name(e); }
  std::optional<Element> find(const std::string& n) const { return poset_.find(n); }
  const std::vector<Declaration>& joins() const noexcept { return joins_; }
  const std::vector<Declaration>& meets() const noexcept { return meets_; }

  /// Checks that every declared join is the least upper bound of its
  /// arguments and every declared meet the greatest lower bound.
  void validate() const {
    for (const auto& d : joins_) check(d, poset_, "join");
    Poset rev = poset_.reversed();
    for (const auto& d : meets_) check(d, rev, "meet");
  }

  /// I(A): least o-ideal containing A.
  OIdeal o_ideal_closure(const ElementSet& a) const {
    return OIdeal{close(a, joins_, joins_by_arg_, false)};
  }
  /// F(A): least o-filter containing A.
  OFilter o_filter_closure(const ElementSet& a) const {
    return OFilter{close(a, meets_, meets_by_arg_, true)};
  }

  bool is_o_ideal(const ElementSet& s) const { return poset_.is_lower_subset(s) && closed_under(s, joins_); }
  bool is_o_filter(const ElementSet& s) const { return poset_.is_upper_subset(s) && closed_under(s, meets_); }

 private:
  void declare(std::vector<Declaration>& list, std::vector<Element> args, Element result, const char* what) {
    std::sort(args.begin(), args.end());
    args.erase(std::unique(args.begin(), args.end()), args.end());
    for (auto e : args)
      if (e >= size()) throw Error(ErrorCode::BadDeclaration, std::string(what) + " mentions unknown element");
    if (result >= size()) throw Error(ErrorCode::BadDeclaration, std::string(what) + " result is unknown");
    if (args.empty()) throw Error(ErrorCode::BadDeclaration, std::string(what) + " of the empty set");
    if (args.size() == 1) {
      if (args[0] != result)
        throw Error(ErrorCode::BadDeclaration,
                    std::string(what) + " of {" + name(args[0]) + "} declared as " + name(result));
      return;
    }
    Declaration d{std::move(args), result};
    auto& by_arg = &list == &joins_ ? joins_by_arg_ : meets_by_arg_;
    for (auto di : by_arg[d.args[0]])
      if (list[di] == d) return;
    for (auto e : d.args) by_arg[e].push_back(list.size());
    list.push_back(std::move(d));
  }

  void check(const Declaration& d, const Poset& order, const char* what) const {
    auto describe = [&] {
      std::string s = std::string(what) + " {";
      for (std::size_t i = 0; i < d.args.size(); ++i) s += (i ? "," : "") + name(d.args[i]);
      return s + "} = " + name(d.result);
    };
    ElementSet bounds = ElementSet::full(size());
    for (auto e : d.args) bounds &= order.up(e);
    if (!bounds.contains(d.result)) throw Error(ErrorCode::BadDeclaration, describe() + ": not a bound of all arguments");
    if (!bounds.subset_of(order.up(d.result)))
      throw Error(ErrorCode::BadDeclaration, describe() + ": not the least such bound");
  }

  bool closed_under(const ElementSet& s, const std::vector<Declaration>& decls) const {
    for (const auto& d : decls)
      if (!s.contains(d.result) &&
          std::all_of(d.args.begin(), d.args.end(), [&](Element e) { return s.contains(e); }))
        return false;
    return true;
  }

  ElementSet close(const ElementSet& seed, const std::vector<Declaration>& decls,
                   const std::vector<std::vector<std::size_t>>& by_arg, bool upward) const {
    ElementSet result(size());
    std::vector<Element> work = seed.to_vector();
    std::reverse(work.begin(), work.end());
    while (!work.empty()) {
      Element e = work.back();
      work.pop_back();
      if (result.contains(e)) continue;
      const ElementSet& cone = upward ? poset_.up(e) : poset_.down(e);
      ElementSet fresh = cone;
      fresh &= complement(result);
      result |= cone;
      fresh.for_each([&](Element f) {
        for (auto di : by_arg[f]) {
          const auto& d = decls[di];
          if (result.contains(d.result)) continue;
          if (std::all_of(d.args.begin(), d.args.end(), [&](Element x) { return result.contains(x); }))
            work.push_back(d.result);
        }
      });
    }
    return result;
  }

  ElementSet complement(const ElementSet& s) const {
    ElementSet c = ElementSet::full(size());
    s.for_each([&](Element e) { c.erase(e); });
    return c;
  }

  void reindex() {
    joins_by_arg_.assign(size(), {});
    meets_by_arg_.assign(size(), {});
    for (std::size_t i = 0; i < joins_.size(); ++i)
      for (auto e : joins_[i].args) joins_by_arg_[e].push_back(i);
    for (std::size_t i = 0; i < meets_.size(); ++i)
      for (auto e : meets_[i].args) meets_by_arg_[e].push_back(i);
  }

  Poset poset_;
  std::vector<Declaration> joins_;
  std::vector<Declaration> meets_;
  std::vector<std::vector<std::size_t>> joins_by_arg_;
  std::vector<std::vector<std::size_t>> meets_by_arg_;
};

/// Restriction to `keep`. Declarations survive only when all their arguments
/// and their result are kept. `keep` must be a lower subset unless
/// `allow_arbitrary` is set.
inline PartialLattice truncate(const PartialLattice& pl, const ElementSet& keep, bool allow_arbitrary = false) {
  if (!allow_arbitrary && !pl.poset().is_lower_subset(keep))
    throw Error(ErrorCode::InvalidArgument, "truncation set is not a lower subset");
  std::vector<Element> kept = keep.to_vector();
  std::vector<Element> remap(pl.size(), pl.size());
  for (std::size_t i = 0; i < kept.size(); ++i) remap[kept[i]] = i;
  PartialLattice out(restrict_poset(pl.poset(), kept));
  auto transfer = [&](const Declaration& d, bool is_join) {
    if (!keep.contains(d.result)) return;
    std::vector<Element> args;
    for (auto e : d.args) {
      if (!keep.contains(e)) return;
      args.push_back(remap[e]);
    }
    if (is_join)
      out.declare_join(std::move(args), remap[d.result]);
    else
      out.declare_meet(std::move(args), remap[d.result]);
  };
  for (const auto& d : pl.joins()) transfer(d, true);
  for (const auto& d : pl.meets()) transfer(d, false);
  return out;
}

}  // namespace latkit
