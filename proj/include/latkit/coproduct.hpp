#pragma once

#include <algorithm>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "latkit/error.hpp"
#include "latkit/free_lattice.hpp"
#include "latkit/order.hpp"
#include "latkit/partial_lattice.hpp"
#include "latkit/term.hpp"

namespace latkit {

/// Element of L_i ∪ {∞}, where ∞ lies above everything.
struct Extended {
  std::optional<Element> value;

  static Extended infinity() { return Extended{std::nullopt}; }
  static Extended of(Element e) { return Extended{e}; }
  bool is_infinity() const noexcept { return !value.has_value(); }

  friend bool operator==(const Extended&, const Extended&) = default;
};

inline bool ext_leq(const FiniteLattice& l, Extended a, Extended b) {
  if (b.is_infinity()) return true;
  if (a.is_infinity()) return false;
  return l.leq(*a.value, *b.value);
}
inline Extended ext_join(const FiniteLattice& l, Extended a, Extended b) {
  if (a.is_infinity() || b.is_infinity()) return Extended::infinity();
  return Extended::of(l.join(*a.value, *b.value));
}
inline Extended ext_meet(const FiniteLattice& l, Extended a, Extended b) {
  if (a.is_infinity()) return b;
  if (b.is_infinity()) return a;
  return Extended::of(l.meet(*a.value, *b.value));
}

enum class CoproductMode { Zero, Amalgam };

/// A 0-coproduct of finite lattices, or an amalgam of two partial lattices
/// over a shared part, realised as the free lattice on the glued partial
/// lattice. Owns its term store and decision caches; single-writer.
class Coproduct {
 public:
  /// Components must name their zero `zero_name` and otherwise use pairwise
  /// disjoint element ids.
  static Coproduct zero_coproduct(std::vector<FiniteLattice> components, const std::string& zero_name = "0") {
    if (components.empty()) throw Error(ErrorCode::InvalidComponent, "no components");
    auto st = std::make_unique<State>();
    st->mode = CoproductMode::Zero;
    std::vector<std::string> names{zero_name};
    std::vector<std::pair<Element, Element>> rel{{0, 0}};
    std::set<std::string> used{zero_name};
    for (std::size_t i = 0; i < components.size(); ++i) {
      const FiniteLattice& l = components[i];
      if (l.name(l.zero()) != zero_name)
        throw Error(ErrorCode::InvalidComponent,
                    "component " + std::to_string(i) + " has zero '" + l.name(l.zero()) + "', expected '" + zero_name + "'");
      std::vector<Element> to_glue(l.size());
      for (Element e = 0; e < l.size(); ++e) {
        if (e == l.zero()) {
          to_glue[e] = 0;
          continue;
        }
        if (!used.insert(l.name(e)).second)
          throw Error(ErrorCode::CarrierOverlap, "element id '" + l.name(e) + "' occurs in more than one component");
        to_glue[e] = names.size();
        names.push_back(l.name(e));
      }
      for (auto [a, b] : l.poset().relation()) rel.emplace_back(to_glue[a], to_glue[b]);
      st->to_glue.push_back(std::move(to_glue));
    }
    PartialLattice glue(Poset::from_relation(std::move(names), rel));
    for (std::size_t i = 0; i < components.size(); ++i) {
      const FiniteLattice& l = components[i];
      const auto& tg = st->to_glue[i];
      for (Element a = 0; a < l.size(); ++a)
        for (Element b = a + 1; b < l.size(); ++b) {
          glue.declare_join({tg[a], tg[b]}, tg[l.join(a, b)]);
          glue.declare_meet({tg[a], tg[b]}, tg[l.meet(a, b)]);
        }
    }
    glue.validate();
    st->components = std::move(components);
    st->finish(std::move(glue));
    return Coproduct(std::move(st));
  }

  /// B ⨿_A C: glue B and C along the elements named in `shared`. With
  /// `require_ideal`, A must be an ideal (lower subset closed under declared
  /// joins) of both.
  static Coproduct amalgam(const PartialLattice& b, const PartialLattice& c, const std::vector<std::string>& shared,
                           bool require_ideal) {
    auto st = std::make_unique<State>();
    st->mode = CoproductMode::Amalgam;
    ElementSet in_b(b.size()), in_c(c.size());
    std::vector<Element> c_of_b(b.size(), c.size());
    for (const auto& name : shared) {
      auto eb = b.find(name);
      auto ec = c.find(name);
      if (!eb || !ec) throw Error(ErrorCode::SharedPartMismatch, "shared element '" + name + "' missing from a side");
      in_b.insert(*eb);
      in_c.insert(*ec);
      c_of_b[*eb] = *ec;
    }
    for (const auto& x : shared)
      for (const auto& y : shared)
        if (b.leq(*b.find(x), *b.find(y)) != c.leq(*c.find(x), *c.find(y)))
          throw Error(ErrorCode::SharedPartMismatch, "order on the shared part differs at (" + x + ", " + y + ")");
    auto shared_decls = [&](const PartialLattice& pl, const ElementSet& in, const std::vector<Declaration>& decls) {
      std::set<std::pair<std::vector<std::string>, std::string>> out;
      for (const auto& d : decls) {
        if (!in.contains(d.result) || !std::all_of(d.args.begin(), d.args.end(), [&](Element e) { return in.contains(e); }))
          continue;
        std::vector<std::string> args;
        for (auto e : d.args) args.push_back(pl.name(e));
        std::sort(args.begin(), args.end());
        out.emplace(std::move(args), pl.name(d.result));
      }
      return out;
    };
    if (shared_decls(b, in_b, b.joins()) != shared_decls(c, in_c, c.joins()) ||
        shared_decls(b, in_b, b.meets()) != shared_decls(c, in_c, c.meets()))
      throw Error(ErrorCode::SharedPartMismatch, "declared operations on the shared part differ");
    if (require_ideal) {
      if (!b.poset().is_lower_subset(in_b) || !b.is_o_ideal(in_b))
        throw Error(ErrorCode::NotAnIdeal, "shared part is not an ideal of the first side");
      if (!c.poset().is_lower_subset(in_c) || !c.is_o_ideal(in_c))
        throw Error(ErrorCode::NotAnIdeal, "shared part is not an ideal of the second side");
    }

    std::vector<std::string> names = b.poset().names();
    std::vector<Element> b_to_glue(b.size()), c_to_glue(c.size());
    for (Element e = 0; e < b.size(); ++e) b_to_glue[e] = e;
    for (Element e = 0; e < b.size(); ++e)
      if (in_b.contains(e)) c_to_glue[c_of_b[e]] = e;
    for (Element e = 0; e < c.size(); ++e) {
      if (in_c.contains(e)) continue;
      if (b.find(c.name(e)))
        throw Error(ErrorCode::CarrierOverlap, "element id '" + c.name(e) + "' on both sides but not shared");
      c_to_glue[e] = names.size();
      names.push_back(c.name(e));
    }
    std::vector<std::pair<Element, Element>> rel;
    for (auto [x, y] : b.poset().relation()) rel.emplace_back(b_to_glue[x], b_to_glue[y]);
    for (auto [x, y] : c.poset().relation()) rel.emplace_back(c_to_glue[x], c_to_glue[y]);
    PartialLattice glue(Poset::from_relation(std::move(names), rel, true));
    auto copy_decls = [&](const PartialLattice& pl, const std::vector<Element>& tg) {
      for (const auto& d : pl.joins()) {
        std::vector<Element> args;
        for (auto e : d.args) args.push_back(tg[e]);
        glue.declare_join(std::move(args), tg[d.result]);
      }
      for (const auto& d : pl.meets()) {
        std::vector<Element> args;
        for (auto e : d.args) args.push_back(tg[e]);
        glue.declare_meet(std::move(args), tg[d.result]);
      }
    };
    copy_decls(b, b_to_glue);
    copy_decls(c, c_to_glue);
    glue.validate();
    st->to_glue = {std::move(b_to_glue), std::move(c_to_glue)};
    st->finish(std::move(glue));
    return Coproduct(std::move(st));
  }

  CoproductMode mode() const noexcept { return st_->mode; }
  const PartialLattice& glue() const noexcept { return st_->glue; }
  TermStore& store() noexcept { return st_->store; }
  FreeLattice& decider() noexcept { return *st_->decider; }
  std::size_t component_count() const noexcept { return st_->to_glue.size(); }

  const FiniteLattice& component(std::size_t i) const {
    require_zero_mode();
    return st_->components.at(i);
  }

  Element glue_element(std::size_t i, Element local) const { return st_->to_glue.at(i).at(local); }
  std::optional<Element> local_element(std::size_t i, Element glue_elem) const {
    const auto& from = st_->from_glue.at(i);
    if (from[glue_elem] == kNone) return std::nullopt;
    return from[glue_elem];
  }

  TermId embed(std::size_t i, Element local) { return st_->store.generator(glue_element(i, local)); }
  TermId generator(Element glue_elem) { return st_->store.generator(glue_elem); }
  TermId zero_term() {
    require_zero_mode();
    return st_->store.generator(0);
  }

  TermId parse(std::string_view text) {
    return parse_sexpr(text, st_->store, [this](const std::string& n) { return st_->glue.find(n); });
  }
  std::string render(TermId t) const {
    return st_->store.to_sexpr(t, [this](Element e) { return st_->glue.name(e); });
  }

  bool leq(TermId s, TermId t) { return st_->decider->leq(s, t); }
  bool equal(TermId s, TermId t) { return st_->decider->equal(s, t); }

  /// t <= 0 in the coproduct.
  bool is_zero(TermId t) { return leq(t, zero_term()); }

  /// Indices of components whose non-zero elements occur in t.
  std::vector<std::size_t> support(TermId t) const {
    std::vector<std::size_t> out;
    for (auto g : st_->store.generators_in(t))
      for (std::size_t i = 0; i < component_count(); ++i)
        if (local_element(i, g) && !(mode() == CoproductMode::Zero && g == 0)) out.push_back(i);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Largest element of L_i below t.
  Element lower_adjoint(TermId t, std::size_t i) { return lower_all(t).at(i); }
  /// Least element of L_i ∪ {∞} above t.
  Extended upper_adjoint(TermId t, std::size_t i) { return upper_all(t).at(i); }

  /// Lower adjoints into every component:
  ///   p_(i) = p for p in L_i, 0 otherwise; joins and meets computed in L_i.
  const std::vector<Element>& lower_all(TermId t) {
    require_zero_mode();
    auto& cache = st_->lower;
    if (t.value < cache.size() && !cache[t.value].empty()) return cache[t.value];
    std::vector<Element> out(component_count());
    TermStore& s = st_->store;
    if (s.is_generator(t)) {
      Element g = s.generator_of(t);
      for (std::size_t i = 0; i < out.size(); ++i) {
        auto local = local_element(i, g);
        out[i] = local ? *local : component(i).zero();
      }
    } else {
      const auto l = lower_all(s.lhs(t));
      const auto& r = lower_all(s.rhs(t));
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = s.kind(t) == TermKind::Join ? component(i).join(l[i], r[i]) : component(i).meet(l[i], r[i]);
    }
    if (cache.size() <= t.value) cache.resize(t.value + 1);
    cache[t.value] = std::move(out);
    return cache[t.value];
  }

  /// Upper adjoints into every component:
  ///   p^(i) = p for p in L_i, ∞ otherwise; joins computed in L_i ∪ {∞};
  ///   (x∧y)^(i) = 0 if x^(j)∧y^(j) = 0 for some j, else x^(i)∧y^(i).
  /// The index set is finite, so every j is scanned.
  const std::vector<Extended>& upper_all(TermId t) {
    require_zero_mode();
    auto& cache = st_->upper;
    if (t.value < cache.size() && !cache[t.value].empty()) return cache[t.value];
    std::vector<Extended> out(component_count());
    TermStore& s = st_->store;
    if (s.is_generator(t)) {
      Element g = s.generator_of(t);
      for (std::size_t i = 0; i < out.size(); ++i) {
        auto local = local_element(i, g);
        out[i] = local ? Extended::of(*local) : Extended::infinity();
      }
    } else if (s.kind(t) == TermKind::Join) {
      const auto l = upper_all(s.lhs(t));
      const auto& r = upper_all(s.rhs(t));
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = ext_join(component(i), l[i], r[i]);
    } else {
      const auto l = upper_all(s.lhs(t));
      const auto& r = upper_all(s.rhs(t));
      bool collapses = false;
      for (std::size_t j = 0; j < out.size() && !collapses; ++j)
        collapses = ext_meet(component(j), l[j], r[j]) == Extended::of(component(j).zero());
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = collapses ? Extended::of(component(i).zero()) : ext_meet(component(i), l[i], r[i]);
    }
    if (cache.size() <= t.value) cache.resize(t.value + 1);
    cache[t.value] = std::move(out);
    return cache[t.value];
  }

  /// Current store size, for rollback().
  std::size_t mark() const noexcept { return st_->store.count(); }

  /// Discards terms created after `mark` together with all cached data.
  void rollback(std::size_t mark) {
    st_->decider->forget_from(mark);
    if (st_->lower.size() > mark) st_->lower.resize(mark);
    if (st_->upper.size() > mark) st_->upper.resize(mark);
    st_->store.rollback(mark);
  }

 private:
  static constexpr Element kNone = std::numeric_limits<Element>::max();

  struct State {
    CoproductMode mode = CoproductMode::Zero;
    std::vector<FiniteLattice> components;
    std::vector<std::vector<Element>> to_glue;
    std::vector<std::vector<Element>> from_glue;
    PartialLattice glue;
    TermStore store;
    std::unique_ptr<FreeLattice> decider;
    std::vector<std::vector<Element>> lower;
    std::vector<std::vector<Extended>> upper;

    void finish(PartialLattice g) {
      glue = std::move(g);
      from_glue.assign(to_glue.size(), std::vector<Element>(glue.size(), kNone));
      for (std::size_t i = 0; i < to_glue.size(); ++i)
        for (Element e = 0; e < to_glue[i].size(); ++e) from_glue[i][to_glue[i][e]] = e;
      decider = std::make_unique<FreeLattice>(glue, store);
    }
  };

  explicit Coproduct(std::unique_ptr<State> st) : st_(std::move(st)) {}

  void require_zero_mode() const {
    if (st_->mode != CoproductMode::Zero)
      throw Error(ErrorCode::AmalgamModeUnsupported, "canonical adjoints need not exist for an amalgam");
  }

  std::unique_ptr<State> st_;
};

struct DirectedJoinReport {
  bool holds = false;
  /// The family is a chain, so its last member is its maximum and the join
  /// identity is forced; recorded so callers can report the instance as
  /// trivial.
  bool has_maximum = false;
};

/// For a finite chain of assignments a^0 <= a^1 <= ... of component elements
/// to the variables of `pattern` (variable v ranges over component
/// `variable_component[v]`), checks p(⋁ a^λ) = ⋁ p(a^λ) in the coproduct.
inline DirectedJoinReport check_finite_directed_join(Coproduct& ctx, TermId pattern,
                                                     const std::vector<std::size_t>& variable_component,
                                                     const std::vector<std::vector<Element>>& family) {
  if (family.empty()) throw Error(ErrorCode::InvalidArgument, "empty family");
  const std::size_t vars = variable_component.size();
  for (const auto& a : family)
    if (a.size() != vars) throw Error(ErrorCode::ShapeMismatch, "assignment size differs from variable count");
  for (std::size_t l = 0; l + 1 < family.size(); ++l)
    for (std::size_t v = 0; v < vars; ++v) {
      const auto& comp = ctx.component(variable_component[v]);
      if (!comp.leq(family[l][v], family[l + 1][v]))
        throw Error(ErrorCode::NotIsotone, "assignment " + std::to_string(l) + " is not below its successor");
    }
  auto instantiate = [&](const std::vector<Element>& a) {
    std::vector<TermId> sub;
    for (std::size_t v = 0; v < vars; ++v) sub.push_back(ctx.embed(variable_component[v], a[v]));
    return ctx.store().substitute(pattern, sub);
  };
  std::vector<Element> top(vars);
  for (std::size_t v = 0; v < vars; ++v) {
    const auto& comp = ctx.component(variable_component[v]);
    Element acc = comp.zero();
    for (const auto& a : family) acc = comp.join(acc, a[v]);
    top[v] = acc;
  }
  TermId at_top = instantiate(top);
  TermId joined = instantiate(family[0]);
  for (std::size_t l = 1; l < family.size(); ++l) joined = ctx.store().join(joined, instantiate(family[l]));
  return DirectedJoinReport{ctx.equal(at_top, joined), family.back() == top};
}

struct FunctorialityReport {
  std::size_t terms = 0;
  std::size_t pairs = 0;
  std::size_t disagreements = 0;
  std::optional<std::pair<std::string, std::string>> first_disagreement;
};

/// Compares the order of ⨿⁰ K_i with that of ⨿⁰ L_i on every pair of terms of
/// depth <= `depth` over the K generators, where K_i is the 0-sublattice of
/// L_i carried by `sub[i]`.
inline FunctorialityReport verify_sublattice_functoriality(const std::vector<FiniteLattice>& big,
                                                           const std::vector<std::vector<Element>>& sub,
                                                           std::size_t depth) {
  if (big.size() != sub.size()) throw Error(ErrorCode::ShapeMismatch, "one subset per component required");
  std::vector<FiniteLattice> ls, ks;
  for (std::size_t i = 0; i < big.size(); ++i) {
    if (std::find(sub[i].begin(), sub[i].end(), big[i].zero()) == sub[i].end())
      throw Error(ErrorCode::NotASublattice, "subset " + std::to_string(i) + " misses the zero");
    FiniteLattice renamed = rename(big[i], "L" + std::to_string(i + 1) + ".");
    ks.push_back(sublattice(renamed, sub[i]));
    ls.push_back(std::move(renamed));
  }
  Coproduct lc = Coproduct::zero_coproduct(std::move(ls));
  Coproduct kc = Coproduct::zero_coproduct(std::move(ks));
  std::vector<Element> gens(kc.glue().size());
  std::iota(gens.begin(), gens.end(), Element{0});
  auto terms = enumerate_terms(kc.store(), gens, depth);
  std::vector<TermId> to_l;
  for (Element g = 0; g < kc.glue().size(); ++g) to_l.push_back(lc.generator(*lc.glue().find(kc.glue().name(g))));
  std::vector<TermId> mapped;
  mapped.reserve(terms.size());
  for (auto t : terms) mapped.push_back(lc.store().import(kc.store(), t, to_l));

  FreeLattice kd(kc.glue(), kc.store(), DecisionOptions{.memoize_pairs = false});
  FreeLattice ld(lc.glue(), lc.store(), DecisionOptions{.memoize_pairs = false});
  FunctorialityReport report;
  report.terms = terms.size();
  for (std::size_t a = 0; a < terms.size(); ++a)
    for (std::size_t b = 0; b < terms.size(); ++b) {
      ++report.pairs;
      if (kd.leq(terms[a], terms[b]) != ld.leq(mapped[a], mapped[b])) {
        if (!report.first_disagreement) report.first_disagreement.emplace(kc.render(terms[a]), kc.render(terms[b]));
        ++report.disagreements;
      }
    }
  return report;
}

}  // namespace latkit
