// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every criterion passes, or when the only failures are
// criteria listed in kInfeasible whose reduced evidence is clean. Those lines
// still read FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "latkit/latkit.hpp"
#include "oracles/naive_free_lattice.hpp"

using namespace latkit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  /// For infeasible criteria: the reduced check found no counterexample.
  bool reduced_clean = false;
};

const std::set<int> kInfeasible{2};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<FiniteLattice> lattices_up_to(std::size_t n) {
  std::vector<FiniteLattice> out;
  for (std::size_t k = 1; k <= n; ++k)
    for (auto& l : enumerate_lattices(k)) out.push_back(std::move(l));
  return out;
}

std::vector<Element> iota_elements(std::size_t n) {
  std::vector<Element> v(n);
  std::iota(v.begin(), v.end(), Element{0});
  return v;
}

/// Term evaluation written independently of the library's evaluator.
Element eval_term(const TermStore& s, TermId t, const FiniteLattice& l, const std::vector<Element>& v) {
  if (s.is_generator(t)) return v[s.generator_of(t)];
  Element a = eval_term(s, s.lhs(t), l, v), b = eval_term(s, s.rhs(t), l, v);
  return s.kind(t) == TermKind::Join ? l.join(a, b) : l.meet(a, b);
}

TermId random_term(TermStore& s, std::size_t gens, std::size_t depth, std::mt19937_64& rng, bool exact = false) {
  if (depth == 0 || (!exact && rng() % 3 == 0)) return s.generator(static_cast<Element>(rng() % gens));
  TermId a = random_term(s, gens, depth - 1, rng, exact);
  TermId b = random_term(s, gens, depth - 1, rng, false);
  return rng() % 2 ? s.join(a, b) : s.meet(a, b);
}

/// Restriction of `l` to a random subset, with a random half of the binary
/// bounds that stay inside declared.
PartialLattice random_partial(const FiniteLattice& l, std::size_t max_size, std::mt19937_64& rng) {
  std::vector<Element> keep;
  while (keep.empty() || keep.size() > max_size) {
    keep.clear();
    for (Element e = 0; e < l.size(); ++e)
      if (rng() % 3 != 0) keep.push_back(e);
  }
  std::vector<Element> local(l.size(), l.size());
  for (std::size_t i = 0; i < keep.size(); ++i) local[keep[i]] = i;
  PartialLattice pl(restrict_poset(l.poset(), keep));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = i + 1; j < keep.size(); ++j) {
      Element jn = l.join(keep[i], keep[j]), mt = l.meet(keep[i], keep[j]);
      if (local[jn] < l.size() && rng() % 2) pl.declare_join({Element(i), Element(j)}, local[jn]);
      if (local[mt] < l.size() && rng() % 2) pl.declare_meet({Element(i), Element(j)}, local[mt]);
    }
  pl.validate();
  return pl;
}

std::optional<std::vector<Element>> random_valuation(const PartialLattice& pl, const FiniteLattice& l,
                                                     std::mt19937_64& rng) {
  std::vector<Element> v(pl.size());
  for (int attempt = 0; attempt < 400; ++attempt) {
    for (auto& x : v) x = static_cast<Element>(rng() % l.size());
    try {
      check_valuation(pl, l, v);
      return v;
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

Outcome c1_soundness() {
  std::mt19937_64 rng(20240601);
  auto sources = lattices_up_to(6);
  auto targets = lattices_up_to(5);
  std::size_t true_triples = 0, decided = 0, violations = 0, partials = 0;
  auto start = Clock::now();
  while ((true_triples < 20000 || partials < 500) && since(start) < 50) {
    const FiniteLattice& src = sources[1 + rng() % (sources.size() - 1)];
    PartialLattice pl = random_partial(src, 6, rng);
    ++partials;
    TermStore store;
    FreeLattice fl(pl, store);
    for (const auto& target : targets) {
      auto v = random_valuation(pl, target, rng);
      if (!v) continue;
      for (int k = 0; k < 8; ++k) {
        TermId s = random_term(store, pl.size(), 3, rng);
        TermId t = random_term(store, pl.size(), 3, rng);
        if (k % 4 == 0) t = store.join(t, s);
        if (k % 4 == 1) s = store.meet(s, t);
        ++decided;
        if (!fl.leq(s, t)) continue;
        ++true_triples;
        if (!target.leq(eval_term(store, s, target, *v), eval_term(store, t, target, *v))) ++violations;
      }
    }
  }
  double secs = since(start);
  Outcome o;
  o.pass = true_triples >= 1000 && violations == 0 && secs < 60;
  o.detail = fmt("%zu true triples (of %zu decided, %zu partial lattices), %zu violations, %.1f s", true_triples,
                 decided, partials, violations, secs);
  return o;
}

std::vector<PartialLattice> small_partial_pool() {
  std::vector<PartialLattice> pool;
  for (const auto& l : lattices_up_to(4)) {
    pool.push_back(PartialLattice::from_lattice(l));
    pool.push_back(PartialLattice(l.poset()));
  }
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("g" + std::to_string(i));
    pool.emplace_back(Poset::from_relation(names, {}, true));
  }
  PartialLattice v(Poset::from_relation({"x", "y", "u"}, {{0, 2}, {1, 2}}, true));
  pool.push_back(v);
  v.declare_join({0, 1}, 2);
  pool.push_back(v);
  PartialLattice w(Poset::from_relation({"x", "y", "u", "z"}, {{0, 2}, {1, 2}, {3, 0}}, true));
  w.declare_join({0, 1}, 2);
  pool.push_back(w);
  return pool;
}

Outcome c2_reference_agreement() {
  auto start = Clock::now();
  auto pool = small_partial_pool();
  std::size_t pairs = 0, disagreements = 0;
  std::size_t exhaustive2 = 0, exhaustive3 = 0, sampled4 = 0;
  auto compare = [&](FreeLattice& fast, oracle::NaiveFreeLattice& naive, TermId s, TermId t) {
    ++pairs;
    if (fast.leq(s, t) != naive.leq(s, t)) ++disagreements;
  };
  std::mt19937_64 rng(77);
  for (const auto& pl : pool) {
    TermStore store;
    FreeLattice fast(pl, store);
    oracle::NaiveFreeLattice naive(pl, store);
    const std::size_t depth = pl.size() <= 3 ? 3 : 2;
    auto terms = enumerate_terms(store, iota_elements(pl.size()), depth);
    std::size_t before = pairs;
    for (auto s : terms)
      for (auto t : terms) compare(fast, naive, s, t);
    (depth == 3 ? exhaustive3 : exhaustive2) += pairs - before;
    before = pairs;
    for (int k = 0; k < 20000; ++k)
      compare(fast, naive, random_term(store, pl.size(), 4, rng, true), random_term(store, pl.size(), 4, rng, k % 2));
    sampled4 += pairs - before;
  }
  Outcome o;
  o.reduced_clean = disagreements == 0;
  o.pass = false;
  o.detail = fmt("exhaustive depth 4 over |P| <= 4 not run: %zu terms over 4 generators, %zu over 2; "
                 "reduced evidence on %zu partial lattices: %zu exhaustive depth<=2 pairs, %zu exhaustive depth<=3 "
                 "pairs, %zu sampled depth-4 pairs, %zu disagreements, %.1f s",
                 term_count(4, 4), term_count(2, 4), pool.size(), exhaustive2, exhaustive3, sampled4, disagreements,
                 since(start));
  return o;
}

Outcome c3_known_fact() {
  PartialLattice pl(Poset::from_relation({"x", "y", "z"}, {}, true));
  TermStore store;
  auto lookup = [&](const std::string& n) { return pl.find(n); };
  TermId lhs = parse_sexpr("(meet x (join y z))", store, lookup);
  TermId rhs = parse_sexpr("(join (meet x y) (meet x z))", store, lookup);
  const bool decided = decide_leq(store, lhs, rhs, pl);
  std::vector<FiniteLattice> pool{m3()};
  auto sep = find_separating_valuation(store, lhs, rhs, pl, pool);
  const FiniteLattice& l = pool[0];
  Outcome o;
  if (!sep) {
    o.detail = "no separating valuation into M3";
    return o;
  }
  const bool atom = sep->left != l.zero() && sep->left != l.one();
  const bool independent = eval_term(store, lhs, l, sep->values) == sep->left &&
                           eval_term(store, rhs, l, sep->values) == sep->right;
  o.pass = !decided && atom && sep->right == l.zero() && independent;
  o.detail = fmt("decide=%s, valuation x,y,z -> %s,%s,%s, left -> %s, right -> %s", decided ? "true" : "false",
                 l.name(sep->values[0]).c_str(), l.name(sep->values[1]).c_str(), l.name(sep->values[2]).c_str(),
                 l.name(sep->left).c_str(), l.name(sep->right).c_str());
  return o;
}

struct AdjointSweep {
  std::size_t lattice_pairs = 0;
  std::size_t terms = 0;
  std::size_t adjoint_mismatches = 0;
  std::size_t galois_checks = 0;
  std::size_t galois_failures = 0;
  double seconds = 0;
};

AdjointSweep adjoint_sweep() {
  auto start = Clock::now();
  AdjointSweep sw;
  auto pool = lattices_up_to(4);
  for (std::size_t p = 0; p < pool.size(); ++p)
    for (std::size_t q = p; q < pool.size(); ++q) {
      ++sw.lattice_pairs;
      Coproduct c = Coproduct::zero_coproduct({rename(pool[p], "A."), rename(pool[q], "B.")});
      std::vector<std::vector<TermId>> embedded(2);
      for (std::size_t i = 0; i < 2; ++i)
        for (Element a = 0; a < c.component(i).size(); ++a) embedded[i].push_back(c.embed(i, a));
      auto check = [&](TermId t) {
        ++sw.terms;
        for (std::size_t i = 0; i < 2; ++i) {
          const FiniteLattice& l = c.component(i);
          std::vector<char> below(l.size()), above(l.size());
          for (Element a = 0; a < l.size(); ++a) {
            below[a] = c.leq(embedded[i][a], t);
            above[a] = c.leq(t, embedded[i][a]);
          }
          std::optional<Element> max, min;
          for (Element a = 0; a < l.size(); ++a) {
            bool is_max = below[a], is_min = above[a];
            for (Element b = 0; b < l.size(); ++b) {
              if (below[b] && !l.leq(b, a)) is_max = false;
              if (above[b] && !l.leq(a, b)) is_min = false;
            }
            if (is_max) max = a;
            if (is_min) min = a;
          }
          const bool none_above = std::none_of(above.begin(), above.end(), [](char x) { return x; });
          Element lower = c.lower_adjoint(t, i);
          Extended upper = c.upper_adjoint(t, i);
          if (!max || *max != lower) ++sw.adjoint_mismatches;
          if (none_above ? !upper.is_infinity() : (!min || upper != Extended::of(*min))) ++sw.adjoint_mismatches;
          for (Element a = 0; a < l.size(); ++a) {
            sw.galois_checks += 2;
            if (static_cast<bool>(below[a]) != l.leq(a, lower)) ++sw.galois_failures;
            if (static_cast<bool>(above[a]) != ext_leq(l, upper, Extended::of(a))) ++sw.galois_failures;
          }
        }
      };
      auto base = enumerate_terms(c.store(), iota_elements(c.glue().size()), 2);
      for (auto t : base) check(t);
      const std::size_t mark = c.mark();
      TermStore& s = c.store();
      for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t j = i + 1; j < base.size(); ++j) {
          if (s.depth(base[i]) < 2 && s.depth(base[j]) < 2) continue;
          for (int kind = 0; kind < 2; ++kind) {
            TermId t = kind ? s.meet(base[i], base[j]) : s.join(base[i], base[j]);
            check(t);
            c.rollback(mark);
          }
        }
    }
  sw.seconds = since(start);
  return sw;
}

Outcome c6_functoriality() {
  auto start = Clock::now();
  std::vector<FiniteLattice> big{chain(3), chain(3)};
  std::size_t pairs = 0, disagreements = 0, configs = 0;
  for (auto sub : std::vector<std::vector<std::vector<Element>>>{{{0, 1}, {0, 2}}, {{0, 2}, {0, 2}}}) {
    auto rep = verify_sublattice_functoriality(big, sub, 3);
    ++configs;
    pairs += rep.pairs;
    disagreements += rep.disagreements;
  }
  Outcome o;
  o.pass = disagreements == 0 && pairs > 0;
  o.detail = fmt("%zu embeddings of two 2-chains into two 3-chains, %zu depth<=3 term pairs, %zu disagreements, %.1f s",
                 configs, pairs, disagreements, since(start));
  return o;
}

Outcome c7_eps() {
  auto start = Clock::now();
  auto pool = lattices_up_to(4);
  std::size_t checks = 0, tf = 0, ft = 0, both_true = 0;
  TermStore patterns;
  auto terms = enumerate_terms(patterns, {0, 1}, 2);
  for (std::size_t p = 0; p < pool.size(); ++p)
    for (std::size_t q = p; q < pool.size(); ++q) {
      EpsContext ctx({rename(pool[p], "A."), rename(pool[q], "B.")});
      for (Element a = 0; a < pool[p].size(); ++a)
        for (Element b = 0; b < pool[q].size(); ++b) {
          IdealAssignment x{{0, 1}, {FinGenIdeal{0, {a}}, FinGenIdeal{1, {b}}}};
          for (auto s : terms)
            for (auto t : terms) {
              EpsOutcome r = eps_order_check(ctx, patterns, s, t, x);
              ++checks;
              if (r.left && !r.right) ++tf;
              if (!r.left && r.right) ++ft;
              both_true += r.left && r.right;
            }
        }
    }
  Outcome o;
  o.pass = tf == 0 && ft == 0 && checks > 0;
  o.detail = fmt("%zu checks over %zu component pairs (%zu both true), %zu (true,false), %zu (false,true), %.1f s",
                 checks, pool.size() * (pool.size() + 1) / 2, both_true, tf, ft, since(start));
  return o;
}

Outcome c8_counterexample() {
  auto start = Clock::now();
  CounterexampleReport r = run_counterexample(6);
  double secs = since(start);
  const bool chain = r.chain.size() == 7 && r.chain_holds();
  Outcome o;
  o.pass = r.verdict() == "NON_EMBEDDING_WITNESSED" && chain && r.witness.decided_false &&
           r.witness.join_closed && r.witness.lower && r.witness.closure_excludes_a && secs < 30;
  o.detail = fmt("%s; a_n <= b0 v c0 for n <= 6: %s; IdA <= down(b0) v down(c0): %s; witness closed: %s; %.2f s",
                 r.verdict().c_str(), chain ? "true" : "false", r.witness.decided_false ? "false" : "true",
                 r.witness.ok() ? "yes" : "no", secs);
  return o;
}

struct JonssonRun {
  FiniteLattice eq = eq_lattice(3);
  std::optional<DeltaTable<FiniteLatticeOracle>> table;
  ClosureReport report;
  double seconds = 0;
};

Outcome c9_jonsson(JonssonRun& run) {
  auto start = Clock::now();
  const FiniteLattice& eq = run.eq;
  std::vector<Element> sample;
  for (Element e = 0; e < eq.size(); ++e)
    if (e != eq.zero()) sample.push_back(e);
  run.table.emplace(JonssonBuilder<FiniteLatticeOracle>::seed(FiniteLatticeOracle{&eq}, sample));
  auto& t = *run.table;
  ObligationPolicy pol;
  pol.max_points = 1024;
  run.report = JonssonBuilder<FiniteLatticeOracle>::close(t, 2, pol);
  run.seconds = since(start);

  // Conditions (1)-(3) re-checked on the lattice elements themselves.
  const std::size_t n = t.size();
  std::vector<Element> d(n * n);
  for (PointId x = 0; x < n; ++x)
    for (PointId y = 0; y < n; ++y) d[x * n + y] = t.values().value(t.delta(x, y));
  std::size_t c1 = 0, c2 = 0, c3 = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      c1 += (d[x * n + y] == eq.zero()) != (x == y);
      c2 += d[x * n + y] != d[y * n + x];
    }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const Element xy = d[x * n + y];
      for (std::size_t z = 0; z < n; ++z) c3 += !eq.leq(d[x * n + z], eq.join(xy, d[y * n + z]));
    }
  std::size_t closed = 0, c4 = 0;
  for (const auto& o : t.obligations()) {
    if (!o.closed) continue;
    ++closed;
    auto at = [&](PointId a, PointId b) { return d[a * n + b]; };
    const Element a = t.values().value(o.a), b = t.values().value(o.b);
    c4 += !(at(o.x, o.z1) == a && at(o.z1, o.z2) == b && at(o.z2, o.z3) == a && at(o.z3, o.y) == b);
  }
  Outcome o;
  o.pass = c1 + c2 + c3 + c4 == 0 && n <= 10000 && !run.report.budget_exhausted() && run.seconds < 300;
  o.detail = fmt("|Omega| = %zu after 2 rounds; %zu pairs, %zu triples checked; failures (1) %zu, (2) %zu, (3) %zu; "
                 "condition (4) on %zu closed obligations: %zu failures (%zu open, %zu at seed level); %.1f s",
                 n, n * n, n * n * n, c1, c2, c3, closed, c4, run.report.open, run.report.round1_open, since(start));
  return o;
}

Outcome c10_phi(JonssonRun& run) {
  auto start = Clock::now();
  auto& t = *run.table;
  IdealLattice ideals = id_of_finite_lattice(run.eq);
  std::vector<ValueId> gens;
  for (Element x = 0; x < run.eq.size(); ++x) gens.push_back(t.values().intern(x));
  EmbeddingReport rep = verify_embedding(t, gens);
  Outcome o;
  o.pass = rep.ok() && rep.ideal_pairs == ideals.lattice.size() * ideals.lattice.size();
  o.detail = fmt("%zu ideal pairs; meet %zu, preserve %zu, reflect %zu, join containment %zu failures; join equality "
                 "on %zu closed-obligation pairs: %zu failures; %.1f s",
                 rep.ideal_pairs, rep.meet_failures, rep.preserve_failures, rep.reflect_failures,
                 rep.join_containment_failures, rep.join_pairs_checked, rep.join_equality_failures, since(start));
  return o;
}

Outcome c11_demo() {
  auto start = Clock::now();
  DemoReport rep = pipeline_embed_coproduct_demo(DemoConfig{.n = 3, .term_depth = 2, .budget = 2, .pairs = 60, .seed = 1});
  std::size_t comparable = 0;
  for (const auto& p : rep.pairs) comparable += p.closed && p.leq;
  Outcome o;
  o.pass = rep.closed >= 50 && rep.failures == 0;
  o.detail = fmt("%zu sampled, %zu closed (%zu with s <= t), preserve %zu/%zu, reflect %zu/%zu, %zu failures, %.1f s",
                 rep.sampled, rep.closed, comparable, rep.preserve_pass, rep.closed, rep.reflect_pass, rep.closed,
                 rep.failures, since(start));
  return o;
}

Outcome c12_duality() {
  std::size_t lattices = 0, failures = 0;
  for (const auto& l : lattices_up_to(6)) {
    ++lattices;
    FiniteLattice d = dualize(l);
    if (!(dualize(d) == l)) ++failures;
    for (Element x = 0; x < l.size(); ++x)
      for (Element y = 0; y < l.size(); ++y)
        if (l.leq(x, y) != d.leq(y, x) || l.join(x, y) != d.meet(x, y) || l.meet(x, y) != d.join(x, y)) ++failures;
  }
  Outcome o;
  o.pass = failures == 0 && lattices == 25;
  o.detail = fmt("%zu lattices with at most 6 elements, %zu failures", lattices, failures);
  return o;
}

}  // namespace

int main() {
  std::map<int, Outcome> results;
  auto report = [&](int id, const char* name, Outcome o) {
    std::string note = kInfeasible.count(id) && !o.pass ? " [infeasible as stated; see notes]" : "";
    std::printf("%s C%d %s: %s%s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), note.c_str());
    std::fflush(stdout);
    results[id] = std::move(o);
  };
  auto guarded = [&](int id, const char* name, const std::function<Outcome()>& f) {
    try {
      report(id, name, f());
    } catch (const std::exception& e) {
      report(id, name, Outcome{false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, "word-solver soundness", c1_soundness);
  guarded(2, "word-solver reference agreement", c2_reference_agreement);
  guarded(3, "free-lattice known fact", c3_known_fact);
  AdjointSweep sweep;
  bool sweep_ok = true;
  std::string sweep_error;
  try {
    sweep = adjoint_sweep();
  } catch (const std::exception& e) {
    sweep_ok = false;
    sweep_error = e.what();
  }
  guarded(4, "adjoint correctness", [&] {
    if (!sweep_ok) return Outcome{false, "exception: " + sweep_error};
    return Outcome{sweep.adjoint_mismatches == 0 && sweep.terms > 0 && sweep.seconds < 300,
                   fmt("%zu lattice pairs, %zu terms of depth <= 3, %zu mismatches, %.1f s", sweep.lattice_pairs,
                       sweep.terms, sweep.adjoint_mismatches, sweep.seconds)};
  });
  guarded(5, "Galois property", [&] {
    if (!sweep_ok) return Outcome{false, "exception: " + sweep_error};
    return Outcome{sweep.galois_failures == 0 && sweep.galois_checks > 0,
                   fmt("%zu checks, %zu failures", sweep.galois_checks, sweep.galois_failures)};
  });
  guarded(6, "sublattice functoriality", c6_functoriality);
  guarded(7, "eps consistency", c7_eps);
  guarded(8, "counterexample", c8_counterexample);
  JonssonRun run;
  guarded(9, "Jonsson invariants", [&] { return c9_jonsson(run); });
  guarded(10, "phi embedding", [&] {
    if (!run.table) return Outcome{false, "no table"};
    return c10_phi(run);
  });
  guarded(11, "pipeline demo", c11_demo);
  guarded(12, "duality", c12_duality);

  std::size_t passed = 0, documented = 0, other = 0;
  for (const auto& [id, o] : results) {
    if (o.pass)
      ++passed;
    else if (kInfeasible.count(id) && o.reduced_clean)
      ++documented;
    else
      ++other;
  }
  std::printf("summary: %zu/%zu PASS, %zu FAIL documented as infeasible, %zu other FAIL\n", passed, results.size(),
              documented, other);
  return other == 0 ? 0 : 1;
}
