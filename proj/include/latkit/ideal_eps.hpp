#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "latkit/coproduct.hpp"
#include "latkit/error.hpp"
#include "latkit/order.hpp"
#include "latkit/term.hpp"

namespace latkit {

/// Id L together with the principal embedding x ↦ ↓x.
struct IdealLattice {
  FiniteLattice lattice;
  /// principal[x] is the element of `lattice` standing for ↓x.
  std::vector<Element> principal;
};

struct IdealEnumerationLimits {
  std::size_t max_size = 20;
};

/// Enumerates every nonempty join-closed lower subset of `l`, orders them by
/// inclusion, and asserts that x ↦ ↓x is an isomorphism onto the result.
/// Elements are named "down(x)" except the zero ideal, which keeps l's zero
/// name.
inline IdealLattice id_of_finite_lattice(const FiniteLattice& l, IdealEnumerationLimits limits = {}) {
  const std::size_t n = l.size();
  if (n > limits.max_size)
    throw Error(ErrorCode::BoundExceeded, "ideal enumeration limited to " + std::to_string(limits.max_size) + " elements");
  std::vector<ElementSet> ideals;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    ElementSet s(n);
    for (Element e = 0; e < n; ++e)
      if (mask >> e & 1) s.insert(e);
    if (!l.poset().is_lower_subset(s)) continue;
    bool closed = true;
    s.for_each([&](Element a) {
      s.for_each([&](Element b) { closed = closed && s.contains(l.join(a, b)); });
    });
    if (closed) ideals.push_back(std::move(s));
  }
  if (ideals.size() != n)
    throw Error(ErrorCode::InvariantViolation, "ideal count differs from lattice size");
  std::vector<Element> principal(n);
  std::vector<std::string> names(n);
  for (Element x = 0; x < n; ++x) {
    const ElementSet& down = l.poset().down(x);
    auto it = std::find(ideals.begin(), ideals.end(), down);
    if (it == ideals.end()) throw Error(ErrorCode::InvariantViolation, "principal ideal of " + l.name(x) + " missing");
    principal[x] = static_cast<Element>(it - ideals.begin());
    names[principal[x]] = x == l.zero() ? l.name(x) : "down(" + l.name(x) + ")";
  }
  std::vector<std::pair<Element, Element>> rel;
  for (Element i = 0; i < n; ++i)
    for (Element j = 0; j < n; ++j)
      if (ideals[i].subset_of(ideals[j])) rel.emplace_back(i, j);
  FiniteLattice id = check_lattice(Poset::from_relation(std::move(names), rel));
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      if (l.leq(x, y) != id.leq(principal[x], principal[y]))
        throw Error(ErrorCode::InvariantViolation, "principal map is not an order isomorphism");
  return IdealLattice{std::move(id), std::move(principal)};
}

/// A finitely generated ideal of one component lattice.
struct FinGenIdeal {
  std::size_t component = 0;
  std::vector<Element> generators;

  friend bool operator==(const FinGenIdeal&, const FinGenIdeal&) = default;
};

/// The same ideal with its generators replaced by their join.
inline FinGenIdeal principal_reduce(const FinGenIdeal& x, const std::vector<FiniteLattice>& components) {
  if (x.generators.empty()) throw Error(ErrorCode::InvalidArgument, "ideal needs at least one generator");
  if (x.component >= components.size()) throw Error(ErrorCode::InvalidComponent, "no component " + std::to_string(x.component));
  const FiniteLattice& l = components[x.component];
  for (auto g : x.generators)
    if (g >= l.size()) throw Error(ErrorCode::InvalidArgument, "generator outside component");
  return FinGenIdeal{x.component, {l.join_all(x.generators)}};
}

/// Pattern variable v ranges over Id of component `variable_component[v]`
/// and is assigned `entries[v]`.
struct IdealAssignment {
  std::vector<std::size_t> variable_component;
  std::vector<FinGenIdeal> entries;
};

/// Components, their coproduct, and the coproduct of their ideal lattices.
class EpsContext {
 public:
  explicit EpsContext(std::vector<FiniteLattice> components)
      : components_(std::move(components)),
        coproduct_(Coproduct::zero_coproduct(components_)),
        id_coproduct_(Coproduct::zero_coproduct(ideal_components(components_, principal_))) {}

  const std::vector<FiniteLattice>& components() const noexcept { return components_; }
  Coproduct& coproduct() noexcept { return coproduct_; }
  Coproduct& id_coproduct() noexcept { return id_coproduct_; }
  Element principal(std::size_t component, Element x) const { return principal_.at(component).at(x); }

  /// Principal generators of the assignment, validated against the pattern.
  std::vector<Element> principal_generators(const TermStore& patterns, TermId p, const IdealAssignment& x) const {
    if (x.entries.size() != x.variable_component.size())
      throw Error(ErrorCode::ShapeMismatch, "one ideal per variable required");
    for (auto v : patterns.generators_in(p))
      if (v >= x.entries.size()) throw Error(ErrorCode::ShapeMismatch, "variable " + std::to_string(v) + " unassigned");
    std::vector<Element> out;
    for (std::size_t v = 0; v < x.entries.size(); ++v) {
      if (x.entries[v].component != x.variable_component[v])
        throw Error(ErrorCode::ShapeMismatch, "variable " + std::to_string(v) + " assigned an ideal of another component");
      out.push_back(principal_reduce(x.entries[v], components_).generators[0]);
    }
    return out;
  }

 private:
  static std::vector<FiniteLattice> ideal_components(const std::vector<FiniteLattice>& ls,
                                                     std::vector<std::vector<Element>>& principal) {
    std::vector<FiniteLattice> out;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      IdealLattice id = id_of_finite_lattice(ls[i]);
      out.push_back(rename(id.lattice, "Id" + std::to_string(i + 1) + ".", ls[i].name(ls[i].zero())));
      principal.push_back(std::move(id.principal));
    }
    return out;
  }

  std::vector<FiniteLattice> components_;
  std::vector<std::vector<Element>> principal_;
  Coproduct coproduct_;
  Coproduct id_coproduct_;
};

/// z ∈ p(ε X): some x with x_v ∈ X_v satisfies z <= p(x). Ideals are
/// principal, so only the principal generators need testing.
inline bool eps_membership(EpsContext& ctx, const TermStore& patterns, TermId p, const IdealAssignment& x, TermId z) {
  auto gens = ctx.principal_generators(patterns, p, x);
  Coproduct& c = ctx.coproduct();
  std::vector<TermId> sub;
  for (std::size_t v = 0; v < gens.size(); ++v) sub.push_back(c.embed(x.variable_component[v], gens[v]));
  return c.leq(z, c.store().import(patterns, p, sub));
}

struct EpsOutcome {
  /// s(X) <= t(X) in the coproduct of the ideal lattices.
  bool left = false;
  /// s(ε X) ⊆ t(ε X) as ideals of the coproduct.
  bool right = false;

  bool agree() const noexcept { return left == right; }
};

inline EpsOutcome eps_order_check(EpsContext& ctx, const TermStore& patterns, TermId s, TermId t,
                                  const IdealAssignment& x) {
  auto gens = ctx.principal_generators(patterns, s, x);
  ctx.principal_generators(patterns, t, x);
  EpsOutcome out;
  Coproduct& ic = ctx.id_coproduct();
  std::vector<TermId> id_sub;
  for (std::size_t v = 0; v < gens.size(); ++v) {
    std::size_t comp = x.variable_component[v];
    id_sub.push_back(ic.embed(comp, ctx.principal(comp, gens[v])));
  }
  out.left = ic.leq(ic.store().import(patterns, s, id_sub), ic.store().import(patterns, t, id_sub));

  // s(ε X) is the principal ideal of s(x̂), so containment is one membership test.
  Coproduct& c = ctx.coproduct();
  std::vector<TermId> sub;
  for (std::size_t v = 0; v < gens.size(); ++v) sub.push_back(c.embed(x.variable_component[v], gens[v]));
  out.right = eps_membership(ctx, patterns, t, x, c.store().import(patterns, s, sub));
  return out;
}

}  // namespace latkit
