#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "latkit/latkit.hpp"

namespace {

using namespace latkit;
using nlohmann::json;

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kInputError = 2;
constexpr int kBudget = 3;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

/// A builtin name, or a path to a lattice JSON file.
FiniteLattice load_lattice(const std::string& spec) {
  if (spec.size() > 5 && spec.ends_with(".json")) return lattice_from_json(read_json_file(spec));
  return named_lattice(spec);
}

std::optional<std::size_t> env_budget() {
  const char* v = std::getenv("LATKIT_BUDGET");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t pos = 0;
    auto n = std::stoul(v, &pos);
    if (pos == std::string(v).size()) return n;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "LATKIT_BUDGET must be a nonnegative integer");
}

struct Runner {
  std::vector<std::string> args;
  std::ostream& out;
  std::ostream& err;
  bool as_json = false;

  json config() const {
    json c{{"argv", args}};
    if (auto b = env_budget()) c["LATKIT_BUDGET"] = *b;
    return c;
  }

  void emit(json report, const std::string& text, double seconds) {
    if (as_json) {
      report["config"] = config();
      out << report.dump(2) << "\n";
    } else {
      out << text;
      out << "runtime: " << seconds << " s\n";
    }
  }

  Coproduct coproduct_from(const std::vector<std::string>& lattices, const std::string& components_file,
                           const std::string& amalgam_file) {
    if (!amalgam_file.empty()) {
      json j = read_json_file(amalgam_file);
      return Coproduct::amalgam(partial_lattice_from_json(detail::field(j, "left")),
                                partial_lattice_from_json(detail::field(j, "right")),
                                detail::field(j, "shared").get<std::vector<std::string>>(), j.value("require_ideal", true));
    }
    std::vector<FiniteLattice> comps;
    if (!components_file.empty()) {
      const json j = read_json_file(components_file);
      for (const auto& c : detail::field(j, "components")) comps.push_back(lattice_from_json(c));
    } else {
      for (std::size_t i = 0; i < lattices.size(); ++i)
        comps.push_back(rename(load_lattice(lattices[i]), "L" + std::to_string(i + 1) + "."));
    }
    if (comps.empty()) throw Error(ErrorCode::InvalidArgument, "no components given");
    return Coproduct::zero_coproduct(std::move(comps));
  }

  int run() {
    CLI::App app{"Lattice toolkit: free lattices, coproducts, ideal maps and partition embeddings"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    // free decide
    auto* free = app.add_subcommand("free", "Word problem of free lattices over partial lattices");
    free->require_subcommand(1);
    auto* free_decide = free->add_subcommand("decide", "Decide s <= t");
    std::string pl_file, s_text, t_text;
    bool trace = false;
    std::size_t depth_budget = DecisionOptions{}.depth_budget;
    free_decide->add_option("--pl", pl_file, "Partial lattice JSON")->required();
    free_decide->add_option("--s", s_text, "Left term")->required();
    free_decide->add_option("--t", t_text, "Right term")->required();
    free_decide->add_flag("--trace", trace, "Print the decision trace");
    free_decide->add_option("--depth-budget", depth_budget, "Recursion depth limit");
    free_decide->add_flag("--json", as_json);

    // coprod adjoint|decide|support
    auto* coprod = app.add_subcommand("coprod", "0-coproducts and amalgams");
    coprod->require_subcommand(1);
    std::vector<std::string> lattices;
    std::string components_file, amalgam_file, term_text;
    std::size_t component = 1;
    auto add_context = [&](CLI::App* sub) {
      sub->add_option("--lattice", lattices, "Component: eqN, chainN, m3, n5 or a JSON file (repeatable)");
      sub->add_option("--components", components_file, "JSON file with a \"components\" list");
      sub->add_option("--amalgam", amalgam_file, "JSON file with \"left\", \"right\", \"shared\"");
      sub->add_flag("--json", as_json);
    };
    auto* adj = coprod->add_subcommand("adjoint", "Canonical lower and upper adjoints of a term");
    add_context(adj);
    adj->add_option("--term", term_text)->required();
    adj->add_option("--component", component, "Component index, from 1")->required();
    auto* cdecide = coprod->add_subcommand("decide", "Decide s <= t in the coproduct");
    add_context(cdecide);
    cdecide->add_option("--s", s_text)->required();
    cdecide->add_option("--t", t_text)->required();
    auto* support = coprod->add_subcommand("support", "Components whose generators occur in a term");
    add_context(support);
    support->add_option("--term", term_text)->required();

    // eps check
    auto* eps = app.add_subcommand("eps", "Ideal lattices and the map into the ideal lattice of a coproduct");
    eps->require_subcommand(1);
    auto* eps_check = eps->add_subcommand("check", "Compare s(X) <= t(X) with s(εX) ⊆ t(εX)");
    std::string ideals_file;
    eps_check->add_option("--lattice", lattices, "Component (repeatable)");
    eps_check->add_option("--ideals", ideals_file, "JSON with \"variables\": [{name, component, generators}]")->required();
    eps_check->add_option("--s", s_text)->required();
    eps_check->add_option("--t", t_text)->required();
    eps_check->add_flag("--json", as_json);

    // jonsson build|verify|demo
    auto* jon = app.add_subcommand("jonsson", "Distance tables and partition embeddings");
    jon->require_subcommand(1);
    std::string lattice_name = "eq3", out_file, table_file;
    std::size_t rounds = env_budget().value_or(2);
    std::size_t max_points = ObligationPolicy{}.max_points;
    auto* jbuild = jon->add_subcommand("build", "Seed with every nonzero element and close");
    jbuild->add_option("--lattice", lattice_name);
    jbuild->add_option("--budget", rounds, "Closure rounds");
    jbuild->add_option("--max-points", max_points);
    jbuild->add_option("--out", out_file, "Write the table as JSON");
    jbuild->add_flag("--json", as_json);
    auto* jverify = jon->add_subcommand("verify", "Check distance conditions of a stored table");
    jverify->add_option("--lattice", lattice_name);
    jverify->add_option("--table", table_file)->required();
    jverify->add_flag("--json", as_json);
    auto* jdemo = jon->add_subcommand("demo", "Embed sampled coproduct terms into a partition lattice");
    DemoConfig demo;
    demo.budget = rounds;
    jdemo->add_option("--n", demo.n);
    jdemo->add_option("--depth", demo.term_depth);
    jdemo->add_option("--budget", demo.budget);
    jdemo->add_option("--pairs", demo.pairs);
    jdemo->add_option("--seed", demo.seed);
    jdemo->add_option("--max-points", demo.max_points);
    jdemo->add_flag("--json", as_json);

    // counterexample run
    auto* cex = app.add_subcommand("counterexample", "Amalgam over a common ideal whose ideal map is not an embedding");
    cex->require_subcommand(1);
    auto* cex_run = cex->add_subcommand("run");
    std::size_t depth = 6;
    cex_run->add_option("--depth", depth, "Truncation depth N >= 1");
    cex_run->add_flag("--json", as_json);

    // lattice enumerate|validate
    auto* lat = app.add_subcommand("lattice", "Finite lattices");
    lat->require_subcommand(1);
    auto* lenum = lat->add_subcommand("enumerate", "Lattices of a given size up to isomorphism");
    std::size_t size = 4;
    lenum->add_option("--size", size)->required();
    lenum->add_flag("--json", as_json);
    auto* lval = lat->add_subcommand("validate", "Check a poset or partial lattice file");
    std::string file;
    bool partial = false;
    lval->add_option("--file", file)->required();
    lval->add_flag("--partial", partial, "Validate declared joins and meets instead of lattice completeness");
    lval->add_flag("--json", as_json);

    // replay
    auto* replay = app.add_subcommand("replay", "Re-run a JSON report from its embedded config and compare");
    std::string report_file;
    replay->add_option("--report", report_file)->required();

    try {
      std::vector<std::string> rev(args.rbegin(), args.rend());
      app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
      out << app.help();
      return kTrue;
    } catch (const CLI::CallForAllHelp& e) {
      out << app.help("", CLI::AppFormatMode::All);
      return kTrue;
    } catch (const CLI::ParseError& e) {
      err << e.what() << "\n";
      return kInputError;
    }

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    if (*free_decide) {
      PartialLattice pl = partial_lattice_from_json(read_json_file(pl_file));
      TermStore store;
      auto lookup = [&](const std::string& n) { return pl.find(n); };
      TermId s = parse_sexpr(s_text, store, lookup);
      TermId t = parse_sexpr(t_text, store, lookup);
      FreeLattice fl(pl, store, DecisionOptions{.depth_budget = depth_budget});
      std::vector<TraceStep> steps;
      bool r = trace ? fl.leq_traced(s, t, steps) : fl.leq(s, t);
      auto lines = detail::render_trace(steps, store, pl);
      json rep{{"command", "free decide"}, {"s", s_text}, {"t", t_text}, {"result", r}};
      std::string text = std::string(r ? "true" : "false") + "\n";
      if (trace) {
        rep["trace"] = lines;
        for (const auto& l : lines) text += l + "\n";
      }
      emit(rep, text, elapsed());
      return r ? kTrue : kFalse;
    }

    if (*adj || *cdecide || *support) {
      Coproduct c = coproduct_from(lattices, components_file, amalgam_file);
      if (*adj) {
        TermId t = c.parse(term_text);
        if (component < 1 || component > c.component_count())
          throw Error(ErrorCode::InvalidComponent, "component must lie in 1.." + std::to_string(c.component_count()));
        const std::size_t i = component - 1;
        Element lower = c.lower_adjoint(t, i);
        Extended upper = c.upper_adjoint(t, i);
        const FiniteLattice& l = c.component(i);
        std::string up = upper.is_infinity() ? "inf" : l.name(*upper.value);
        json rep{{"command", "coprod adjoint"}, {"term", term_text}, {"component", component},
                 {"lower", l.name(lower)}, {"upper", up}};
        emit(rep, "lower=" + l.name(lower) + " upper=" + up + "\n", elapsed());
        return kTrue;
      }
      if (*cdecide) {
        bool r = c.leq(c.parse(s_text), c.parse(t_text));
        emit(json{{"command", "coprod decide"}, {"s", s_text}, {"t", t_text}, {"result", r}},
             std::string(r ? "true" : "false") + "\n", elapsed());
        return r ? kTrue : kFalse;
      }
      std::vector<std::size_t> sup;
      for (auto i : c.support(c.parse(term_text))) sup.push_back(i + 1);
      std::string text = "support={";
      for (std::size_t k = 0; k < sup.size(); ++k) text += (k ? "," : "") + std::to_string(sup[k]);
      emit(json{{"command", "coprod support"}, {"term", term_text}, {"support", sup}}, text + "}\n", elapsed());
      return kTrue;
    }

    if (*eps_check) {
      json j = read_json_file(ideals_file);
      std::vector<FiniteLattice> comps;
      if (j.contains("components"))
        for (const auto& c : j.at("components")) comps.push_back(lattice_from_json(c));
      else
        for (std::size_t i = 0; i < lattices.size(); ++i)
          comps.push_back(rename(load_lattice(lattices[i]), "L" + std::to_string(i + 1) + "."));
      if (comps.empty()) throw Error(ErrorCode::InvalidArgument, "no components given");
      EpsContext ctx(comps);
      IdealAssignment x;
      std::vector<std::string> var_names;
      for (const auto& v : detail::field(j, "variables")) {
        auto comp = detail::field(v, "component").get<std::size_t>();
        if (comp < 1 || comp > comps.size()) throw Error(ErrorCode::InvalidComponent, "variable component out of range");
        FinGenIdeal ideal{comp - 1, {}};
        for (const auto& g : detail::field(v, "generators")) {
          const FiniteLattice& l = comps[comp - 1];
          auto e = l.find(g.get<std::string>());
          if (!e) e = l.find("L" + std::to_string(comp) + "." + g.get<std::string>());
          if (!e) throw Error(ErrorCode::UnknownGenerator, "unknown element '" + g.get<std::string>() + "'");
          ideal.generators.push_back(*e);
        }
        var_names.push_back(detail::field(v, "name").get<std::string>());
        x.variable_component.push_back(comp - 1);
        x.entries.push_back(std::move(ideal));
      }
      TermStore patterns;
      auto lookup = [&](const std::string& n) -> std::optional<Element> {
        for (std::size_t k = 0; k < var_names.size(); ++k)
          if (var_names[k] == n) return k;
        return std::nullopt;
      };
      TermId s = parse_sexpr(s_text, patterns, lookup);
      TermId t = parse_sexpr(t_text, patterns, lookup);
      EpsOutcome o = eps_order_check(ctx, patterns, s, t, x);
      json rep{{"command", "eps check"}, {"s", s_text}, {"t", t_text}, {"left", o.left}, {"right", o.right},
               {"agree", o.agree()}};
      emit(rep,
           std::string("left=") + (o.left ? "true" : "false") + " right=" + (o.right ? "true" : "false") +
               (o.agree() ? "\n" : " DISAGREE\n"),
           elapsed());
      return o.agree() ? (o.left ? kTrue : kFalse) : kFalse;
    }

    if (*jbuild || *jverify) {
      FiniteLattice l = load_lattice(lattice_name);
      if (*jverify) {
        auto table = delta_table_from_json(read_json_file(table_file), l);
        auto v = table.verify_metric();
        json rep{{"command", "jonsson verify"}, {"points", table.size()}, {"violations", v}, {"ok", v.empty()}};
        std::string text = std::to_string(table.size()) + " points, " +
                           (v.empty() ? std::string("conditions (1)-(3) hold\n") : v.front() + "\n");
        emit(rep, text, elapsed());
        return v.empty() ? kTrue : kFalse;
      }
      std::vector<Element> sample;
      for (Element e = 0; e < l.size(); ++e)
        if (e != l.zero()) sample.push_back(e);
      if (sample.empty()) sample.push_back(l.zero());
      auto table = JonssonBuilder<FiniteLatticeOracle>::seed(FiniteLatticeOracle{&l}, sample);
      const std::size_t seeded = table.size();
      ObligationPolicy pol;
      pol.max_points = max_points;
      ClosureReport cr = JonssonBuilder<FiniteLatticeOracle>::close(table, rounds, pol);
      std::vector<ValueId> gens;
      for (Element e = 0; e < l.size(); ++e) gens.push_back(table.values().intern(e));
      EmbeddingReport er = verify_embedding(table, gens);
      std::size_t cond4 = 0;
      for (const auto& o : table.obligations()) cond4 += o.closed && table.verify_obligation(o);
      json open = json::array();
      for (const auto& o : cr.open_sample)
        open.push_back({{"x", o.x}, {"y", o.y}, {"a", table.values().render(o.a)}, {"b", table.values().render(o.b)},
                        {"round", o.round}});
      json rep{{"command", "jonsson build"},
               {"lattice", lattice_name},
               {"rounds", cr.rounds},
               {"seed_points", seeded},
               {"points", cr.points},
               {"closed", cr.closed},
               {"open", cr.open},
               {"round1_open", cr.round1_open},
               {"open_sample", open},
               {"condition4_verified", cond4},
               {"violations", cr.violations},
               {"embedding", {{"ideal_pairs", er.ideal_pairs},
                              {"meet_failures", er.meet_failures},
                              {"preserve_failures", er.preserve_failures},
                              {"reflect_failures", er.reflect_failures},
                              {"join_containment_failures", er.join_containment_failures},
                              {"join_pairs_checked", er.join_pairs_checked},
                              {"join_equality_failures", er.join_equality_failures}}},
               {"invariants_pass", cr.violations.empty() && er.ok()}};
      if (!out_file.empty()) {
        std::ofstream f(out_file);
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + out_file + "'");
        json tj = delta_table_to_json(table);
        tj["lattice"] = lattice_name;
        f << tj.dump() << "\n";
      }
      std::ostringstream text;
      text << "points: " << seeded << " seeded, " << cr.points << " after " << cr.rounds << " rounds\n"
           << "obligations: " << cr.closed << " closed, " << cr.open << " open (" << cr.round1_open
           << " at seed level)\n"
           << "conditions (1)-(3): " << (cr.violations.empty() ? "pass" : "FAIL") << "\n"
           << "condition (4) re-read: " << cond4 << "/" << cr.closed << "\n"
           << "embedding checks: " << (er.ok() ? "pass" : "FAIL") << " (" << er.ideal_pairs << " ideal pairs, "
           << er.join_pairs_checked << " join witnesses)\n";
      emit(rep, text.str(), elapsed());
      if (cr.budget_exhausted()) return kBudget;
      return rep["invariants_pass"].get<bool>() ? kTrue : kFalse;
    }

    if (*jdemo) {
      DemoReport dr = pipeline_embed_coproduct_demo(demo);
      json pairs = json::array();
      for (const auto& p : dr.pairs)
        pairs.push_back({{"s", p.s}, {"t", p.t}, {"leq", p.leq}, {"closed", p.closed}, {"preserved", p.preserved},
                         {"reflected", p.reflected}, {"points", p.points}});
      json rep{{"command", "jonsson demo"}, {"n", demo.n}, {"depth", demo.term_depth}, {"budget", demo.budget},
               {"seed", demo.seed}, {"sampled", dr.sampled}, {"closed", dr.closed},
               {"preserve_pass", dr.preserve_pass}, {"reflect_pass", dr.reflect_pass}, {"failures", dr.failures},
               {"pairs", pairs}};
      std::ostringstream text;
      text << "sampled " << dr.sampled << " pairs, " << dr.closed << " closed\n"
           << "preserve: " << dr.preserve_pass << "/" << dr.closed << "\n"
           << "reflect: " << dr.reflect_pass << "/" << dr.closed << "\n";
      emit(rep, text.str(), elapsed());
      if (dr.closed < dr.sampled) return kBudget;
      return dr.failures == 0 ? kTrue : kFalse;
    }

    if (*cex_run) {
      CounterexampleReport r = run_counterexample(depth);
      json chain = json::array();
      for (std::size_t n = 0; n < r.chain.size(); ++n)
        chain.push_back({{"n", n}, {"a_n <= b0 v c0", static_cast<bool>(r.chain[n])},
                         {"down(a_n) <= down(b0) v down(c0)", static_cast<bool>(r.principal_chain[n])}});
      json rep{{"command", "counterexample run"},
               {"depth", depth},
               {"verdict", r.verdict()},
               {"chain", chain},
               {"failing_pair", {{"left", r.failing_left}, {"right", r.failing_right}, {"decided", false}}},
               {"witness_set", r.witness_set},
               {"witness_checks", {{"lower", r.witness.lower},
                                   {"join_closed", r.witness.join_closed},
                                   {"contains_generators", r.witness.contains_generators},
                                   {"excludes_IdA", r.witness.excludes_a},
                                   {"closure_excludes_IdA", r.witness.closure_excludes_a},
                                   {"decided_false", r.witness.decided_false}}},
               {"closure", r.closure_set},
               {"chain_trace", r.chain_trace},
               {"witness_trace", r.witness_trace}};
      std::ostringstream text;
      text << r.verdict() << " at depth " << depth << "\n"
           << "a_n <= b0 v c0 for n = 0.." << depth << ": " << (r.chain_holds() ? "true" : "false") << "\n"
           << r.failing_left << " <= " << r.failing_right << ": false\n"
           << "witness o-ideal: " << r.witness_set.size() << " principal ideals, "
           << (r.witness.ok() ? "verified" : "NOT verified") << "\n";
      emit(rep, text.str(), elapsed());
      return r.witnessed() ? kTrue : kFalse;
    }

    if (*lenum) {
      auto ls = enumerate_lattices(size);
      json arr = json::array();
      std::ostringstream text;
      text << ls.size() << " lattices with " << size << " elements\n";
      for (const auto& l : ls) {
        arr.push_back(lattice_to_json(l));
        text << poset_to_json(l.poset())["order"].dump() << "\n";
      }
      emit(json{{"command", "lattice enumerate"}, {"size", size}, {"count", ls.size()}, {"lattices", arr}}, text.str(),
           elapsed());
      return kTrue;
    }

    if (*lval) {
      json j = read_json_file(file);
      if (partial) {
        PartialLattice pl = partial_lattice_from_json(j);
        emit(json{{"command", "lattice validate"}, {"valid", true}, {"elements", pl.size()}, {"joins", pl.joins().size()},
                  {"meets", pl.meets().size()}},
             "valid partial lattice with " + std::to_string(pl.size()) + " elements\n", elapsed());
      } else {
        FiniteLattice l = lattice_from_json(j);
        emit(json{{"command", "lattice validate"}, {"valid", true}, {"elements", l.size()}, {"zero", l.name(l.zero())},
                  {"one", l.name(l.one())}},
             "valid lattice with " + std::to_string(l.size()) + " elements\n", elapsed());
      }
      return kTrue;
    }

    if (*replay) {
      json original = read_json_file(report_file);
      const json& cfg = detail::field(original, "config");
      std::vector<std::string> again = detail::field(cfg, "argv").get<std::vector<std::string>>();
      std::optional<std::string> saved;
      if (const char* v = std::getenv("LATKIT_BUDGET")) saved = v;
      if (cfg.contains("LATKIT_BUDGET"))
        setenv("LATKIT_BUDGET", std::to_string(cfg.at("LATKIT_BUDGET").get<std::size_t>()).c_str(), 1);
      else
        unsetenv("LATKIT_BUDGET");
      std::ostringstream captured, captured_err;
      Runner inner{again, captured, captured_err};
      inner.run();
      if (saved)
        setenv("LATKIT_BUDGET", saved->c_str(), 1);
      else
        unsetenv("LATKIT_BUDGET");
      json fresh;
      try {
        fresh = json::parse(captured.str());
      } catch (const json::parse_error&) {
        err << "replayed command did not produce a JSON report\n";
        return kInputError;
      }
      const bool same = fresh.dump() == original.dump();
      out << (same ? "identical\n" : "DIFFERENT\n");
      return same ? kTrue : kFalse;
    }
    return kInputError;
  }
};

int dispatch(std::vector<std::string> args) {
  Runner r{std::move(args), std::cout, std::cerr};
  try {
    return r.run();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::BudgetExhausted || e.code() == ErrorCode::DepthBudgetExceeded ? kBudget
                                                                                                  : kInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) { return dispatch(std::vector<std::string>(argv + 1, argv + argc)); }
