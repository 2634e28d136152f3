#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latkit/coproduct.hpp"
#include "latkit/error.hpp"
#include "latkit/free_lattice.hpp"
#include "latkit/order.hpp"
#include "latkit/partial_lattice.hpp"
#include "latkit/term.hpp"

namespace latkit {

/// Truncation at depth N of the poset K: chains a_n <= p_n, q_n <= a_{n+1},
/// with p_n <= b_n, q_n <= c_n and b_n, c_n increasing.
struct TruncatedK {
  std::size_t depth = 0;
  Poset k;
  /// A_N, B_N = A_N ∪ {b_n}, C_N = A_N ∪ {c_n} with every binary bound
  /// that exists in them declared.
  PartialLattice a;
  PartialLattice b;
  PartialLattice c;
  std::vector<std::string> shared;
};

/// Principal ideals ↓x of the glued B_N ∪ C_N plus the non-principal
/// ideals IdA, IdB, IdC.
struct IdSide {
  PartialLattice pl;
  Element ideal_a = 0;
  Element ideal_b = 0;
  Element ideal_c = 0;
  std::vector<Element> principal;
};

namespace detail {

inline std::string indexed(char c, std::size_t n) { return std::string(1, c) + std::to_string(n); }

/// Declares every binary join and meet that exists in the order.
inline void declare_existing_bounds(PartialLattice& pl) {
  const Poset& p = pl.poset();
  const Poset rev = p.reversed();
  const std::size_t n = pl.size();
  for (Element x = 0; x < n; ++x)
    for (Element y = x + 1; y < n; ++y) {
      ElementSet up = p.up(x);
      up &= p.up(y);
      if (auto j = least_of(p, up)) pl.declare_join({x, y}, *j);
      ElementSet down = p.down(x);
      down &= p.down(y);
      if (auto m = least_of(rev, down)) pl.declare_meet({x, y}, *m);
    }
}

inline bool has_declaration(const PartialLattice& pl, const std::vector<Declaration>& decls, const std::string& x,
                            const std::string& y, const std::string& r) {
  auto ex = pl.find(x), ey = pl.find(y), er = pl.find(r);
  if (!ex || !ey || !er) return false;
  std::vector<Element> args{*ex, *ey};
  std::sort(args.begin(), args.end());
  return std::find(decls.begin(), decls.end(), Declaration{args, *er}) != decls.end();
}

inline PartialLattice restrict_with_bounds(const Poset& k, const std::vector<Element>& keep) {
  PartialLattice pl(restrict_poset(k, keep));
  declare_existing_bounds(pl);
  pl.validate();
  return pl;
}

}  // namespace detail

inline TruncatedK build_truncated_k(std::size_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "depth must be at least 1");
  using detail::indexed;
  TruncatedK out;
  out.depth = n;
  std::vector<std::string> names;
  for (char c : {'a', 'p', 'q', 'b', 'c'})
    for (std::size_t i = 0; i <= n; ++i) names.push_back(indexed(c, i));
  auto id = [&](char c, std::size_t i) -> Element {
    const std::string order = "apqbc";
    return order.find(c) * (n + 1) + i;
  };
  std::vector<std::pair<Element, Element>> rel;
  for (std::size_t i = 0; i <= n; ++i) {
    rel.emplace_back(id('a', i), id('p', i));
    rel.emplace_back(id('a', i), id('q', i));
    rel.emplace_back(id('p', i), id('b', i));
    rel.emplace_back(id('q', i), id('c', i));
    if (i < n) {
      rel.emplace_back(id('p', i), id('a', i + 1));
      rel.emplace_back(id('q', i), id('a', i + 1));
      rel.emplace_back(id('b', i), id('b', i + 1));
      rel.emplace_back(id('c', i), id('c', i + 1));
    }
  }
  out.k = Poset::from_relation(names, rel, true);

  std::vector<Element> a_keep, b_keep, c_keep;
  for (char c : {'a', 'p', 'q'})
    for (std::size_t i = 0; i <= n; ++i) a_keep.push_back(id(c, i));
  b_keep = c_keep = a_keep;
  for (std::size_t i = 0; i <= n; ++i) {
    b_keep.push_back(id('b', i));
    c_keep.push_back(id('c', i));
  }
  for (auto e : a_keep) out.shared.push_back(names[e]);
  out.a = detail::restrict_with_bounds(out.k, a_keep);
  out.b = detail::restrict_with_bounds(out.k, b_keep);
  out.c = detail::restrict_with_bounds(out.k, c_keep);

  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvariantViolation, "reconstruction lacks " + what);
  };
  for (std::size_t i = 0; i <= n; ++i) {
    const std::string ai = indexed('a', i), pi = indexed('p', i), qi = indexed('q', i);
    if (i < n) {
      const std::string next = indexed('a', i + 1);
      require(detail::has_declaration(out.a, out.a.joins(), pi, qi, next), pi + " v " + qi + " = " + next);
    }
    require(detail::has_declaration(out.a, out.a.meets(), pi, qi, ai), pi + " ^ " + qi + " = " + ai);
    if (i > 0) {
      require(detail::has_declaration(out.b, out.b.joins(), ai, "b0", indexed('b', i)), ai + " v b0 = b" + std::to_string(i));
      require(detail::has_declaration(out.c, out.c.joins(), ai, "c0", indexed('c', i)), ai + " v c0 = c" + std::to_string(i));
    }
  }
  auto is_ideal = [&](const PartialLattice& side) {
    ElementSet s(side.size());
    for (const auto& name : out.shared) s.insert(*side.find(name));
    return side.poset().is_lower_subset(s) && side.is_o_ideal(s);
  };
  require(is_ideal(out.b) && is_ideal(out.c), "A as an ideal of both sides");
  return out;
}

inline IdSide build_id_side(const TruncatedK& k, const PartialLattice& glue) {
  const std::size_t g = glue.size();
  std::vector<std::string> names;
  for (Element x = 0; x < g; ++x) names.push_back("down(" + glue.name(x) + ")");
  names.insert(names.end(), {"IdA", "IdB", "IdC"});
  const Element ia = g, ib = g + 1, ic = g + 2;
  auto in_side = [&](const PartialLattice& side, Element x) { return side.find(glue.name(x)).has_value(); };
  std::vector<std::pair<Element, Element>> rel{{ia, ib}, {ia, ic}};
  for (Element x = 0; x < g; ++x) {
    for (Element y = 0; y < g; ++y)
      if (glue.leq(x, y)) rel.emplace_back(x, y);
    if (in_side(k.a, x)) rel.emplace_back(x, ia);
    if (in_side(k.b, x)) rel.emplace_back(x, ib);
    if (in_side(k.c, x)) rel.emplace_back(x, ic);
  }
  IdSide out;
  out.pl = PartialLattice(Poset::from_relation(std::move(names), rel, true));
  out.ideal_a = ia;
  out.ideal_b = ib;
  out.ideal_c = ic;
  for (Element x = 0; x < g; ++x) out.principal.push_back(x);
  for (const auto& d : glue.joins()) out.pl.declare_join(d.args, d.result);
  for (const auto& d : glue.meets()) out.pl.declare_meet(d.args, d.result);
  out.pl.declare_meet({ib, ic}, ia);
  for (Element x = 0; x < g; ++x) {
    if (in_side(k.a, x)) {
      out.pl.declare_join({ia, x}, ia);
      out.pl.declare_meet({ia, x}, x);
    } else if (in_side(k.b, x) || in_side(k.c, x)) {
      const bool on_b = in_side(k.b, x);
      out.pl.declare_join({ia, x}, on_b ? ib : ic);
      // ↓b_n ∩ A = ↓p_n and ↓c_n ∩ A = ↓q_n.
      const std::string name = glue.name(x);
      out.pl.declare_meet({ia, x}, *glue.find((on_b ? "p" : "q") + name.substr(1)));
    }
    if (in_side(k.b, x)) {
      out.pl.declare_join({ib, x}, ib);
      out.pl.declare_meet({ib, x}, x);
    }
    if (in_side(k.c, x)) {
      out.pl.declare_join({ic, x}, ic);
      out.pl.declare_meet({ic, x}, x);
    }
  }
  out.pl.validate();
  return out;
}

struct WitnessCheck {
  bool lower = false;
  bool join_closed = false;
  bool contains_generators = false;
  bool excludes_a = false;
  bool closure_excludes_a = false;
  bool decided_false = false;

  bool ok() const noexcept {
    return lower && join_closed && contains_generators && excludes_a && closure_excludes_a && decided_false;
  }
};

struct CounterexampleReport {
  std::size_t depth = 0;
  /// chain[n] = decision of a_n <= b0 ∨ c0 over the amalgam glue.
  std::vector<bool> chain;
  /// Companion facts: ↓a_n <= ↓b0 ∨ ↓c0 on the ideal side.
  std::vector<bool> principal_chain;
  WitnessCheck witness;
  std::vector<std::string> witness_set;
  std::vector<std::string> closure_set;
  std::string failing_left;
  std::string failing_right;
  std::vector<std::string> chain_trace;
  std::vector<std::string> witness_trace;

  bool chain_holds() const {
    return !chain.empty() && std::all_of(chain.begin(), chain.end(), [](bool b) { return b; });
  }
  bool witnessed() const { return chain_holds() && witness.ok(); }
  std::string verdict() const { return witnessed() ? "NON_EMBEDDING_WITNESSED" : "NOT_WITNESSED"; }
};

namespace detail {

inline std::vector<std::string> render_trace(const std::vector<TraceStep>& trace, const TermStore& store,
                                             const PartialLattice& pl) {
  std::vector<std::string> out;
  auto name = [&](Element e) { return pl.name(e); };
  for (const auto& st : trace)
    out.push_back(std::string(st.depth * 2, ' ') + store.to_sexpr(st.s, name) + " <= " + store.to_sexpr(st.t, name) +
                  " [" + st.rule + "] " + (st.result ? "true" : "false"));
  return out;
}

}  // namespace detail

/// a_n <= b0 ∨ c0 in F_L(B_N ∪ C_N) for every n <= N.
inline std::vector<bool> check_chain_inequality(const TruncatedK& k, Coproduct& amalgam) {
  TermId rhs = amalgam.store().join(amalgam.generator(*amalgam.glue().find("b0")),
                                    amalgam.generator(*amalgam.glue().find("c0")));
  std::vector<bool> out;
  for (std::size_t i = 0; i <= k.depth; ++i)
    out.push_back(amalgam.leq(amalgam.generator(*amalgam.glue().find(detail::indexed('a', i))), rhs));
  return out;
}

/// The set S of principal ideals is an o-ideal containing ↓b0 and ↓c0 but
/// not IdA, hence IdA ∉ I({↓b0, ↓c0}).
inline WitnessCheck check_witness(const IdSide& id, std::vector<std::string>* closure_names = nullptr) {
  WitnessCheck w;
  ElementSet s(id.pl.size());
  for (auto x : id.principal) s.insert(x);
  const Element db0 = *id.pl.find("down(b0)");
  const Element dc0 = *id.pl.find("down(c0)");
  w.lower = id.pl.poset().is_lower_subset(s);
  w.join_closed = id.pl.is_o_ideal(s);
  w.contains_generators = s.contains(db0) && s.contains(dc0);
  w.excludes_a = !s.contains(id.ideal_a);
  OIdeal closure = id.pl.o_ideal_closure(ElementSet::of(id.pl.size(), std::vector<Element>{db0, dc0}));
  w.closure_excludes_a = !closure.members.contains(id.ideal_a);
  if (closure_names)
    closure.members.for_each([&](Element e) { closure_names->push_back(id.pl.name(e)); });
  TermStore store;
  FreeLattice fl(id.pl, store);
  w.decided_false = !fl.leq(store.generator(id.ideal_a), store.join(store.generator(db0), store.generator(dc0)));
  return w;
}

inline CounterexampleReport run_counterexample(std::size_t n) {
  TruncatedK k = build_truncated_k(n);
  Coproduct amalgam = Coproduct::amalgam(k.b, k.c, k.shared, true);
  IdSide id = build_id_side(k, amalgam.glue());

  CounterexampleReport rep;
  rep.depth = n;
  rep.chain = check_chain_inequality(k, amalgam);
  rep.witness = check_witness(id, &rep.closure_set);
  for (auto x : id.principal) rep.witness_set.push_back(id.pl.name(x));

  TermStore store;
  FreeLattice fl(id.pl, store);
  TermId rhs = store.join(store.generator(*id.pl.find("down(b0)")), store.generator(*id.pl.find("down(c0)")));
  for (std::size_t i = 0; i <= n; ++i)
    rep.principal_chain.push_back(fl.leq(store.generator(*id.pl.find("down(" + detail::indexed('a', i) + ")")), rhs));
  TermId lhs = store.generator(id.ideal_a);
  auto name = [&](Element e) { return id.pl.name(e); };
  rep.failing_left = store.to_sexpr(lhs, name);
  rep.failing_right = store.to_sexpr(rhs, name);
  std::vector<TraceStep> trace;
  fl.leq_traced(lhs, rhs, trace);
  rep.witness_trace = detail::render_trace(trace, store, id.pl);

  trace.clear();
  TermStore& as = amalgam.store();
  TermId a_rhs = as.join(amalgam.generator(*amalgam.glue().find("b0")), amalgam.generator(*amalgam.glue().find("c0")));
  amalgam.decider().leq_traced(amalgam.generator(*amalgam.glue().find(detail::indexed('a', n))), a_rhs, trace);
  rep.chain_trace = detail::render_trace(trace, as, amalgam.glue());
  return rep;
}

}  // namespace latkit
