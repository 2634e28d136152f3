#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "latkit/coproduct.hpp"
#include "latkit/error.hpp"
#include "latkit/free_lattice.hpp"
#include "latkit/order.hpp"
#include "latkit/partition.hpp"
#include "latkit/term.hpp"

namespace latkit {

/// Order oracle for the lattice L that distances range over.
template <class O>
concept LatticeOracle = requires(O& o, const typename O::value_type& a, const typename O::value_type& b) {
  { o.leq(a, b) } -> std::convertible_to<bool>;
  { o.join(a, b) } -> std::convertible_to<typename O::value_type>;
  { o.meet(a, b) } -> std::convertible_to<typename O::value_type>;
  { o.zero() } -> std::convertible_to<typename O::value_type>;
  { o.render(a) } -> std::convertible_to<std::string>;
};

struct FiniteLatticeOracle {
  using value_type = Element;
  const FiniteLattice* lattice;

  bool leq(Element a, Element b) const { return lattice->leq(a, b); }
  Element join(Element a, Element b) const { return lattice->join(a, b); }
  Element meet(Element a, Element b) const { return lattice->meet(a, b); }
  Element zero() const { return lattice->zero(); }
  std::string render(Element a) const { return lattice->name(a); }
};

/// Terms of a coproduct, ordered by the word-problem decision.
struct TermLatticeOracle {
  using value_type = TermId;
  Coproduct* coproduct;

  bool leq(TermId a, TermId b) const { return coproduct->leq(a, b); }
  TermId join(TermId a, TermId b) const { return coproduct->store().join(a, b); }
  TermId meet(TermId a, TermId b) const { return coproduct->store().meet(a, b); }
  TermId zero() const { return coproduct->zero_term(); }
  std::string render(TermId a) const { return coproduct->render(a); }
};

using ValueId = std::uint32_t;
using PointId = std::uint32_t;

inline std::uint64_t obligation_key(PointId x, PointId y, ValueId a, ValueId b) {
  if (x >= (1u << 20) || y >= (1u << 20) || a >= (1u << 12) || b >= (1u << 12))
    throw Error(ErrorCode::BoundExceeded, "obligation key out of range");
  return (std::uint64_t{x} << 44) | (std::uint64_t{y} << 24) | (std::uint64_t{a} << 12) | b;
}

/// Distinct L-values (up to lattice equality) with memoized join and order.
/// Id 0 is the zero.
template <LatticeOracle O>
class ValueRegistry {
 public:
  using value_type = typename O::value_type;

  explicit ValueRegistry(O oracle) : oracle_(std::move(oracle)) { intern(oracle_.zero()); }

  O& oracle() noexcept { return oracle_; }
  std::size_t size() const noexcept { return values_.size(); }
  const value_type& value(ValueId v) const { return values_.at(v); }
  std::string render(ValueId v) { return oracle_.render(values_.at(v)); }

  ValueId intern(const value_type& x) {
    for (ValueId i = 0; i < values_.size(); ++i)
      if (values_[i] == x || (oracle_.leq(values_[i], x) && oracle_.leq(x, values_[i]))) return i;
    const auto id = static_cast<ValueId>(values_.size());
    values_.push_back(x);
    const std::size_t n = values_.size();
    std::vector<char> leq(n * n);
    std::vector<ValueId> join(n * n, kUnset), meet(n * n, kUnset);
    for (std::size_t a = 0; a + 1 < n; ++a)
      for (std::size_t b = 0; b + 1 < n; ++b) {
        leq[a * n + b] = leq_[a * (n - 1) + b];
        join[a * n + b] = join_[a * (n - 1) + b];
        meet[a * n + b] = meet_[a * (n - 1) + b];
      }
    for (std::size_t a = 0; a < n; ++a) {
      leq[a * n + id] = oracle_.leq(values_[a], x);
      leq[id * n + a] = oracle_.leq(x, values_[a]);
    }
    leq_ = std::move(leq);
    join_ = std::move(join);
    meet_ = std::move(meet);
    return id;
  }

  bool leq(ValueId a, ValueId b) const noexcept { return leq_[a * values_.size() + b]; }

  ValueId join(ValueId a, ValueId b) {
    ValueId& slot = join_[a * values_.size() + b];
    if (slot != kUnset) return slot;
    ValueId r = leq(a, b) ? b : leq(b, a) ? a : intern(oracle_.join(values_[a], values_[b]));
    join_[a * values_.size() + b] = r;
    join_[b * values_.size() + a] = r;
    return r;
  }

  ValueId meet(ValueId a, ValueId b) {
    ValueId& slot = meet_[a * values_.size() + b];
    if (slot != kUnset) return slot;
    ValueId r = leq(a, b) ? a : leq(b, a) ? b : intern(oracle_.meet(values_[a], values_[b]));
    meet_[a * values_.size() + b] = r;
    meet_[b * values_.size() + a] = r;
    return r;
  }

 private:
  static constexpr ValueId kUnset = ~ValueId{0};

  O oracle_;
  std::vector<value_type> values_;
  std::vector<char> leq_;
  std::vector<ValueId> join_;
  std::vector<ValueId> meet_;
};

/// One condition-(4) obligation: points z1, z2, z3 with
/// δ(x,z1) = a, δ(z1,z2) = b, δ(z2,z3) = a, δ(z3,y) = b.
struct Obligation {
  PointId x = 0;
  PointId y = 0;
  ValueId a = 0;
  ValueId b = 0;
  std::size_t round = 0;
  bool closed = false;
  PointId z1 = 0;
  PointId z2 = 0;
  PointId z3 = 0;
};

struct ObligationPolicy {
  /// Values a, b range over these; empty means the nonzero seed values.
  std::vector<ValueId> elements;
  /// Round-1 obligations only consider pairs of these points; empty means all.
  std::vector<PointId> focus;
  std::size_t max_points = 1024;
  /// Open obligations kept verbatim in the report.
  std::size_t open_sample = 16;
};

struct ClosureReport {
  std::size_t rounds = 0;
  std::size_t points = 0;
  std::size_t closed = 0;
  std::size_t open = 0;
  std::size_t round1_open = 0;
  std::vector<Obligation> open_sample;
  std::vector<std::string> violations;

  /// Round-1 (seed level) obligations were left open for lack of points.
  bool budget_exhausted() const noexcept { return round1_open > 0; }
};

/// Finite set of points with a symmetric L-valued distance.
template <LatticeOracle O>
class DeltaTable {
 public:
  using value_type = typename O::value_type;

  explicit DeltaTable(O oracle) : values_(std::move(oracle)) {}

  ValueRegistry<O>& values() noexcept { return values_; }
  const ValueRegistry<O>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return rows_.size(); }
  ValueId delta(PointId x, PointId y) const { return rows_[x][y]; }
  std::size_t generation(PointId x) const { return generation_[x]; }
  const std::vector<Obligation>& obligations() const noexcept { return obligations_; }
  const std::vector<ValueId>& seed_values() const noexcept { return seed_values_; }
  /// Seed point realising value v at distance v from point 0.
  std::optional<PointId> seed_point(ValueId v) const {
    if (v == 0) return PointId{0};
    for (std::size_t i = 0; i < seed_values_.size(); ++i)
      if (seed_values_[i] == v) return static_cast<PointId>(i + 1);
    return std::nullopt;
  }

  /// Appends a point with the given distances to all existing points.
  PointId add_point(const std::vector<ValueId>& dist, std::size_t generation) {
    if (dist.size() != rows_.size()) throw Error(ErrorCode::ShapeMismatch, "distance row has wrong length");
    const auto id = static_cast<PointId>(rows_.size());
    for (std::size_t w = 0; w < rows_.size(); ++w) rows_[w].push_back(dist[w]);
    rows_.push_back(dist);
    rows_.back().push_back(0);
    generation_.push_back(generation);
    return id;
  }

  /// Violations of δ(x,y) = 0 iff x = y, symmetry, and the triangle law.
  std::vector<std::string> verify_metric(std::size_t limit = 16) {
    std::vector<std::string> out;
    const std::size_t n = size();
    auto report = [&](std::string s) {
      if (out.size() < limit) out.push_back(std::move(s));
    };
    for (PointId x = 0; x < n; ++x)
      for (PointId y = 0; y < n; ++y) {
        if ((rows_[x][y] == 0) != (x == y))
          report("condition (1) fails at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
        if (rows_[x][y] != rows_[y][x])
          report("condition (2) fails at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
      }
    const std::size_t v = values_.size();
    std::vector<char> below_join(v * v * v);
    auto& reg = values_;
    for (ValueId a = 0; a < v; ++a)
      for (ValueId b = 0; b < v; ++b) {
        ValueId j = reg.join(a, b);
        for (ValueId c = 0; c < v; ++c) below_join[(c * v + a) * v + b] = reg.leq(c, j);
      }
    for (PointId x = 0; x < n; ++x)
      for (PointId z = x + 1; z < n; ++z) {
        const std::size_t base = rows_[x][z] * v * v;
        for (PointId y = 0; y < n; ++y)
          if (!below_join[base + rows_[x][y] * v + rows_[y][z]])
            report("condition (3) fails at (" + std::to_string(x) + ", " + std::to_string(y) + ", " +
                   std::to_string(z) + ")");
      }
    return out;
  }

  /// Re-reads the four distances of a closed obligation.
  bool verify_obligation(const Obligation& o) const {
    return o.closed && delta(o.x, o.z1) == o.a && delta(o.z1, o.z2) == o.b && delta(o.z2, o.z3) == o.a &&
           delta(o.z3, o.y) == o.b;
  }

 private:
  template <LatticeOracle>
  friend class JonssonBuilder;

  ValueRegistry<O> values_;
  std::vector<std::vector<ValueId>> rows_;
  std::vector<std::size_t> generation_;
  std::vector<Obligation> obligations_;
  std::vector<ValueId> seed_values_;
};

template <LatticeOracle O>
class JonssonBuilder {
 public:
  using value_type = typename O::value_type;

  /// Base point 0 and one point per distinct nonzero sample value a with
  /// δ(0, x_a) = a and δ(x_a, x_b) = a ∨ b.
  static DeltaTable<O> seed(O oracle, const std::vector<value_type>& sample) {
    if (sample.empty()) throw Error(ErrorCode::InvalidArgument, "sample must be nonempty");
    DeltaTable<O> t(std::move(oracle));
    t.add_point({}, 0);
    for (const auto& s : sample) {
      ValueId v = t.values_.intern(s);
      if (v == 0 || std::find(t.seed_values_.begin(), t.seed_values_.end(), v) != t.seed_values_.end()) continue;
      std::vector<ValueId> row{v};
      for (ValueId w : t.seed_values_) row.push_back(t.values_.join(v, w));
      t.seed_values_.push_back(v);
      t.add_point(row, 0);
    }
    auto violations = t.verify_metric();
    if (!violations.empty()) throw Error(ErrorCode::InvariantViolation, violations.front());
    return t;
  }

  /// Runs `rounds` breadth-first rounds of obligation closure. New points
  /// z1, z2, z3 for (x, y, a, b) get δ(z1,w) = a ∨ δ(x,w),
  /// δ(z3,w) = b ∨ δ(y,w), δ(z2,w) = a ∨ b ∨ δ(x,w) against old points w.
  static ClosureReport close(DeltaTable<O>& t, std::size_t rounds, const ObligationPolicy& policy) {
    ClosureReport rep;
    std::vector<ValueId> elements = policy.elements.empty() ? t.seed_values_ : policy.elements;
    std::unordered_set<std::uint64_t> seen;
    for (const auto& o : t.obligations_) seen.insert(obligation_key(o.x, o.y, o.a, o.b));
    for (std::size_t r = 1; r <= rounds; ++r) {
      std::vector<PointId> pts;
      if (r == 1 && !policy.focus.empty())
        pts = policy.focus;
      else
        for (PointId p = 0; p < t.size(); ++p) pts.push_back(p);
      std::sort(pts.begin(), pts.end());
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
          for (ValueId a : elements)
            for (ValueId b : elements) {
              PointId x = pts[i], y = pts[j];
              if (!t.values_.leq(t.delta(x, y), t.values_.join(a, b))) continue;
              if (!seen.insert(obligation_key(x, y, a, b)).second) continue;
              Obligation o{x, y, a, b, r};
              std::size_t needed = (a != 0) + (b != 0) + (a != 0 && b != 0);
              if (t.size() + needed <= policy.max_points) {
                discharge(t, o);
                ++rep.closed;
              } else {
                ++rep.open;
                if (r == 1) ++rep.round1_open;
                if (rep.open_sample.size() < policy.open_sample) rep.open_sample.push_back(o);
              }
              t.obligations_.push_back(o);
            }
      rep.rounds = r;
      auto v = t.verify_metric();
      rep.violations.insert(rep.violations.end(), v.begin(), v.end());
      if (!v.empty()) throw Error(ErrorCode::InvariantViolation, v.front());
    }
    for (const auto& o : t.obligations_)
      if (o.closed && !t.verify_obligation(o))
        throw Error(ErrorCode::InvariantViolation, "condition (4) re-read failed");
    rep.points = t.size();
    return rep;
  }

 private:
  /// Adds a point with the given row, unless some point is at distance 0.
  static PointId place(DeltaTable<O>& t, const std::vector<ValueId>& row, std::size_t generation) {
    for (PointId w = 0; w < row.size(); ++w)
      if (row[w] == 0) return w;
    return t.add_point(row, generation);
  }

  static void discharge(DeltaTable<O>& t, Obligation& o) {
    auto& reg = t.values_;
    const std::size_t old = t.size();
    const std::size_t gen = o.round;
    const ValueId ab = reg.join(o.a, o.b);
    if (o.a == 0) {
      o.z1 = o.x;
    } else {
      std::vector<ValueId> row(old);
      for (PointId w = 0; w < old; ++w) row[w] = reg.join(o.a, t.delta(o.x, w));
      o.z1 = place(t, row, gen);
    }
    if (o.b == 0) {
      o.z3 = o.y;
      o.z2 = o.z1;
    } else {
      std::vector<ValueId> row(t.size());
      for (PointId w = 0; w < old; ++w) row[w] = reg.join(o.b, t.delta(o.y, w));
      for (PointId w = old; w < t.size(); ++w) row[w] = ab;
      o.z3 = place(t, row, gen);
      if (o.a == 0) {
        o.z2 = o.z3;
      } else {
        std::vector<ValueId> mid(t.size());
        for (PointId w = 0; w < old; ++w) mid[w] = reg.join(ab, t.delta(o.x, w));
        mid[o.z1] = o.b;
        mid[o.z3] = o.a;
        o.z2 = place(t, mid, gen);
      }
    }
    o.closed = true;
  }
};

/// φ(A) = {(x,y) : δ(x,y) ∈ A} as a partition of the points 0..n-1, for an
/// ideal A given by its membership predicate on value ids.
template <LatticeOracle O>
Partition phi(DeltaTable<O>& t, const std::function<bool(ValueId)>& member) {
  auto& reg = t.values();
  for (ValueId a = 0; a < reg.size(); ++a) {
    if (!member(a)) continue;
    for (ValueId b = 0; b < reg.size(); ++b) {
      if (reg.leq(b, a) && !member(b)) throw Error(ErrorCode::NotAnIdeal, "membership is not down-closed");
      if (member(b) && !member(reg.join(a, b))) throw Error(ErrorCode::NotAnIdeal, "membership is not join-closed");
    }
  }
  if (!member(0)) throw Error(ErrorCode::NotAnIdeal, "ideal must contain the zero");
  std::vector<Point> carrier(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) carrier[i] = static_cast<Point>(i);
  std::vector<std::pair<Point, Point>> pairs;
  for (PointId x = 0; x < t.size(); ++x)
    for (PointId y = x + 1; y < t.size(); ++y)
      if (member(t.delta(x, y))) pairs.emplace_back(x, y);
  return Partition::generated_by(carrier, pairs);
}

/// φ of the principal ideal ↓g.
template <LatticeOracle O>
Partition phi_principal(DeltaTable<O>& t, ValueId g) {
  auto& reg = t.values();
  return phi(t, std::function<bool(ValueId)>([&reg, g](ValueId v) { return reg.leq(v, g); }));
}

struct EmbeddingReport {
  std::size_t ideal_pairs = 0;
  std::size_t meet_failures = 0;
  std::size_t preserve_failures = 0;
  std::size_t reflect_failures = 0;
  std::size_t join_containment_failures = 0;
  /// Pairs (x,y) in φ(A∨B) whose obligation (x,y,a,b) was closed.
  std::size_t join_pairs_checked = 0;
  std::size_t join_equality_failures = 0;
  /// Ideal pairs all of whose round-1 obligations were closed.
  std::size_t closed_ideal_pairs = 0;
  std::vector<std::string> failures;

  bool ok() const noexcept {
    return meet_failures + preserve_failures + reflect_failures + join_containment_failures + join_equality_failures == 0;
  }
};

/// Checks φ on every pair of principal ideals ↓a, ↓b for a, b in `gens`.
template <LatticeOracle O>
EmbeddingReport verify_embedding(DeltaTable<O>& t, const std::vector<ValueId>& gens) {
  EmbeddingReport rep;
  auto& reg = t.values();
  std::vector<Partition> phis;
  for (auto g : gens) phis.push_back(phi_principal(t, g));
  std::unordered_map<std::uint64_t, const Obligation*> closed;
  for (const auto& o : t.obligations())
    if (o.closed) closed.emplace(obligation_key(o.x, o.y, o.a, o.b), &o);
  auto fail = [&](std::string s) {
    if (rep.failures.size() < 16) rep.failures.push_back(std::move(s));
  };
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j) {
      ++rep.ideal_pairs;
      const ValueId a = gens[i], b = gens[j];
      const std::string tag = "(" + reg.render(a) + ", " + reg.render(b) + ")";
      const Partition& pa = phis[i];
      const Partition& pb = phis[j];
      if (phi_principal(t, reg.meet(a, b)) != pa.meet(pb)) {
        ++rep.meet_failures;
        fail("meet " + tag);
      }
      const bool ab = reg.leq(a, b);
      const bool pab = pa.leq(pb);
      if (ab && !pab) {
        ++rep.preserve_failures;
        fail("preserve " + tag);
      }
      if (!ab && pab) {
        ++rep.reflect_failures;
        fail("reflect " + tag);
      }
      const ValueId j_ab = reg.join(a, b);
      Partition pj = phi_principal(t, j_ab);
      Partition joined = pa.join(pb);
      if (!joined.leq(pj)) {
        ++rep.join_containment_failures;
        fail("join containment " + tag);
      }
      bool all_closed = true;
      for (const auto& o : t.obligations())
        if (o.round == 1 && o.a == a && o.b == b && !o.closed) all_closed = false;
      if (all_closed) ++rep.closed_ideal_pairs;
      for (PointId x = 0; x < t.size(); ++x)
        for (PointId y = x + 1; y < t.size(); ++y) {
          if (!reg.leq(t.delta(x, y), j_ab)) continue;
          auto it = closed.find(obligation_key(x, y, a, b));
          if (it == closed.end()) continue;
          ++rep.join_pairs_checked;
          if (!joined.related(static_cast<Point>(x), static_cast<Point>(y))) {
            ++rep.join_equality_failures;
            fail("join equality " + tag + " at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
          }
        }
    }
  return rep;
}

struct DemoConfig {
  std::size_t n = 3;
  std::size_t term_depth = 2;
  std::size_t budget = 2;
  std::size_t pairs = 50;
  std::uint64_t seed = 1;
  std::size_t max_points = 256;
};

struct DemoPair {
  std::string s;
  std::string t;
  bool leq = false;
  bool closed = false;
  bool preserved = true;
  bool reflected = true;
  std::size_t points = 0;
};

struct DemoReport {
  DemoConfig config;
  std::size_t sampled = 0;
  std::size_t closed = 0;
  std::size_t preserve_pass = 0;
  std::size_t reflect_pass = 0;
  std::size_t failures = 0;
  std::vector<DemoPair> pairs;
};

/// Maps terms of Eq(n) ⨿⁰ Eq(n) into Eq(Ω) through s ↦ φ(↓s) and checks
/// that sampled pairs keep their order. Each pair gets its own table seeded
/// with the nonzero generators and with s and t themselves.
inline DemoReport pipeline_embed_coproduct_demo(const DemoConfig& cfg) {
  if (cfg.n < 1 || cfg.n > 3) throw Error(ErrorCode::BoundExceeded, "n must lie in 1..3");
  if (cfg.term_depth > 3) throw Error(ErrorCode::BoundExceeded, "term depth must be at most 3");
  FiniteLattice eq = eq_lattice(cfg.n);
  Coproduct c = Coproduct::zero_coproduct({rename(eq, "x."), rename(eq, "y.")});
  std::vector<Element> glue_gens(c.glue().size());
  std::iota(glue_gens.begin(), glue_gens.end(), Element{0});
  std::vector<TermId> gens;
  for (auto g : glue_gens) gens.push_back(c.generator(g));
  auto terms = enumerate_terms(c.store(), glue_gens, cfg.term_depth);

  DemoReport rep;
  rep.config = cfg;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
  TermLatticeOracle oracle{&c};
  for (std::size_t k = 0; k < cfg.pairs; ++k) {
    TermId s = terms[pick(rng)];
    TermId t = terms[pick(rng)];
    std::vector<TermId> sample;
    for (std::size_t g = 1; g < gens.size(); ++g) sample.push_back(gens[g]);
    sample.push_back(s);
    sample.push_back(t);
    auto table = JonssonBuilder<TermLatticeOracle>::seed(oracle, sample);
    ValueId vs = table.values().intern(s);
    ValueId vt = table.values().intern(t);
    ObligationPolicy pol;
    for (ValueId v : {vs, vt})
      if (v != 0 && std::find(pol.elements.begin(), pol.elements.end(), v) == pol.elements.end()) pol.elements.push_back(v);
    for (ValueId v : {ValueId{0}, vs, vt}) {
      PointId p = *table.seed_point(v);
      if (std::find(pol.focus.begin(), pol.focus.end(), p) == pol.focus.end()) pol.focus.push_back(p);
    }
    pol.max_points = cfg.max_points;
    ClosureReport cr = pol.elements.empty() ? ClosureReport{} : JonssonBuilder<TermLatticeOracle>::close(table, cfg.budget, pol);

    DemoPair dp{c.render(s), c.render(t), c.leq(s, t), !cr.budget_exhausted()};
    dp.points = table.size();
    Partition ps = phi_principal(table, vs);
    Partition pt = phi_principal(table, vt);
    const bool image_leq = ps.leq(pt);
    dp.preserved = !dp.leq || image_leq;
    dp.reflected = dp.leq || !image_leq;
    ++rep.sampled;
    if (dp.closed) {
      ++rep.closed;
      rep.preserve_pass += dp.preserved;
      rep.reflect_pass += dp.reflected;
      rep.failures += !dp.preserved || !dp.reflected;
    }
    rep.pairs.push_back(std::move(dp));
  }
  return rep;
}

}  // namespace latkit
