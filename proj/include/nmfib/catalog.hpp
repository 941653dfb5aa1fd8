#pragma once

#include <functional>
#include <map>
#include <set>
#include <random>
#include <string>
#include <vector>

#include "nmfib/boolfun.hpp"
#include "nmfib/calculus.hpp"
#include "nmfib/fibring.hpp"
#include "nmfib/matrix_ops.hpp"
#include "nmfib/semantics.hpp"
#include "nmfib/syntax.hpp"

namespace nmfib {

// Single-connective fragments under their usual names.
inline fragment standard_fragment(const std::string& name) {
  static const std::map<std::string, boolean_function> table = {
      {"top", bf::top()},       {"bot", bf::bot()},          {"bot1", bf::bot()},
      {"bot2", bf::bot()},      {"neg", bf::neg()},          {"sim", bf::neg()},
      {"and", bf::conj()},      {"and2", bf::conj()},        {"or", bf::disj()},
      {"or2", bf::disj()},      {"imp", bf::imp()},          {"coimp", bf::coimp()},
      {"iff", bf::iff()},       {"xor", bf::xor2()},         {"xor3", bf::xor3()},
      {"if3", bf::if3()},       {"thr32", bf::threshold(3, 2)},
      {"bowtie", bf::bowtie()}, {"ubot", boolean_function::constant(1, false)}};
  auto it = table.find(name);
  if (it == table.end()) throw error("no standard connective " + name);
  fragment fr;
  fr.add(name, it->second);
  return fr;
}

inline fragment standard_fragment(std::initializer_list<std::string> names) {
  fragment out;
  for (const auto& n : names) out = fragment::unite(out, standard_fragment(n));
  return out;
}

// Random formula over the signature with the given variables, depth at most d.
inline formula random_formula(const signature& sig, const std::vector<std::string>& vs,
                              std::size_t d, std::mt19937& rng) {
  auto cs = sig.connectives();
  std::uniform_int_distribution<std::size_t> coin(0, 2);
  if (d == 0 || cs.empty() || coin(rng) == 0) {
    std::vector<connective> nullary;
    for (const auto& c : cs)
      if (c.arity == 0) nullary.push_back(c);
    std::uniform_int_distribution<std::size_t> pick(0, vs.size() + nullary.size() - 1);
    auto i = pick(rng);
    return i < vs.size() ? var(vs[i]) : formula::make(nullary[i - vs.size()].name);
  }
  std::uniform_int_distribution<std::size_t> pick(0, cs.size() - 1);
  const auto& c = cs[pick(rng)];
  std::vector<formula> args;
  for (std::size_t i = 0; i < c.arity; ++i) args.push_back(random_formula(sig, vs, d - 1, rng));
  return formula::make(c.name, std::move(args));
}

inline sequent random_sequent(const signature& sig, const std::vector<std::string>& vs,
                              std::size_t d, std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> n(0, 2);
  sequent s;
  for (std::size_t i = n(rng); i > 0; --i) s.premises.push_back(random_formula(sig, vs, d, rng));
  s.conclusion = random_formula(sig, vs, d, rng);
  return s;
}

struct check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct report {
  std::string id;
  std::string title;
  std::vector<check> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return !checks.empty();
  }
};

struct catalog_entry {
  std::string id;
  std::string title;
  fragment f1, f2;
  std::optional<char> classical;  // expected condition; nullopt when subclassical
};

inline const std::vector<catalog_entry>& catalog() {
  static const std::vector<catalog_entry> entries = {
      {"two_conj", "two conjunctions", standard_fragment("and"), standard_fragment("and2"), 'b'},
      {"two_disj", "two disjunctions", standard_fragment("or"), standard_fragment("or2"), {}},
      {"two_neg", "two negations", standard_fragment("neg"), standard_fragment("sim"), {}},
      {"conj_disj", "conjunction and disjunction", standard_fragment("and"), standard_fragment("or"), {}},
      {"disj_neg", "disjunction and negation", standard_fragment("or"), standard_fragment("neg"), {}},
      {"coimp_top", "coimplication and top", standard_fragment("coimp"), standard_fragment("top"), 'a'},
      {"coimp_bot", "coimplication and bottom", standard_fragment("coimp"), standard_fragment("bot"), {}},
      {"imp_bot", "implication and bottom", standard_fragment("imp"), standard_fragment("bot"), {}},
      {"biimp_bot", "bi-implication and bottom", standard_fragment("iff"), standard_fragment("bot"), 'c'},
      {"biimp_bot1", "bi-implication and unary bottom", standard_fragment("iff"),
       standard_fragment("ubot"), {}},
      {"xor3_two_bots", "ternary parity and two bottoms", standard_fragment("xor3"),
       standard_fragment({"bot1", "bot2"}), {}},
      {"neg_bot", "negation and bottom", standard_fragment("neg"), standard_fragment("bot"), {}},
  };
  return entries;
}

inline std::vector<std::string> catalog_ids() {
  std::vector<std::string> out;
  for (const auto& e : catalog()) out.push_back(e.id);
  return out;
}

inline const catalog_entry& catalog_lookup(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  throw error("unknown example " + id);
}

namespace detail {

inline std::string one_line(std::string s) {
  while (!s.empty() && s.back() == '\n') s.pop_back();
  std::string out;
  for (char c : s) out += c == '\n' ? std::string("; ") : std::string(1, c);
  return out;
}

class reporter {
 public:
  explicit reporter(const catalog_entry& e) : e_(e) {
    r_.id = e.id;
    r_.title = e.title;
    sig_ = signature::unite(e.f1.sig(), e.f2.sig());
  }

  formula f(const std::string& text) const { return parse(text, sig_); }
  std::vector<formula> fs(const std::string& text) const { return parse_list(text, sig_); }

  void add(std::string name, bool ok, std::string detail = "") {
    r_.checks.push_back({std::move(name), ok, std::move(detail)});
  }

  // Guards each check against exceptions.
  void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
    try {
      auto [ok, d] = fn();
      add(name, ok, std::move(d));
    } catch (const std::exception& ex) {
      add(name, false, std::string("error: ") + ex.what());
    }
  }

  void verdict() {
    run("recovery verdict", [&] {
      auto v = decide_recovery(e_.f1, e_.f2);
      if (e_.classical) {
        bool ok = v.kind == recovery_kind::classical && v.condition == *e_.classical;
        return std::pair{ok, std::string("condition ") + (v.condition ? v.condition : '-')};
      }
      if (v.kind != recovery_kind::subclassical || !v.w) return std::pair{false, v.note};
      bool ok = verify_countermodel(*v.w->product, v.w->s.premises, v.w->s.conclusion,
                                    v.w->countermodel);
      return std::pair{ok, describe(v.w->s) + " at power " + std::to_string(v.w->power)};
    });
  }

  // Γ ⊬ φ in the product at power n.
  void fails(const std::string& name, const std::string& gamma, const std::string& phi,
             std::size_t n) {
    run(name, [&] {
      auto fb = fibred_semantics(e_.f1, e_.f2, n);
      auto g = fs(gamma);
      auto r = entails(*fb.matrix, g, f(phi));
      bool ok = !r.holds && verify_countermodel(*fb.matrix, g, f(phi), *r.countermodel);
      return std::pair{ok, ok ? one_line(describe(*r.countermodel, *fb.matrix)) : std::string("holds")};
    });
  }

  void holds(const std::string& name, const std::string& gamma, const std::string& phi,
             std::size_t n) {
    run(name, [&] {
      auto fb = fibred_semantics(e_.f1, e_.f2, n);
      return std::pair{entails(*fb.matrix, fs(gamma), f(phi)).holds, std::string()};
    });
  }

  // Derivable once the interaction rules of calculus `id` are added; an empty
  // id adds none.
  void derivable(const std::string& name, const std::string& id, const std::string& gamma,
                 const std::string& phi) {
    run(name, [&] {
      std::vector<rule> extra;
      if (!id.empty()) extra = builtin_calculus(id).rules();
      auto cert = certify_entailment(e_.f1, e_.f2, extra, fs(gamma), f(phi));
      bool ok = cert.kind == certificate_kind::yes;
      std::string how = cert.proof ? "derivation" : cert.chain ? "component chain" : "none";
      if (ok && cert.proof) {
        auto g = fs(gamma);
        ok = verify(*cert.proof, *cert.proof_calculus, g, f(phi)).ok;
      }
      return std::pair{ok, how};
    });
  }

  void classical_agreement(std::size_t samples, std::size_t n) {
    run("agrees with the classical matrix on random sequents", [&] {
      auto fb = fibred_semantics(e_.f1, e_.f2, n);
      nmatrix two = classical_matrix(fragment::unite(e_.f1, e_.f2));
      std::mt19937 rng(20240601);
      for (std::size_t i = 0; i < samples; ++i) {
        auto s = random_sequent(sig_, {"p", "q", "r"}, 3, rng);
        if (entails(*fb.matrix, s.premises, s.conclusion).holds !=
            entails(two, s.premises, s.conclusion).holds)
          return std::pair{false, describe(s)};
      }
      return std::pair{true, std::to_string(samples) + " sequents"};
    });
  }

  report take() { return std::move(r_); }

  const catalog_entry& e_;
  report r_;
  signature sig_;
};

// Cell-by-cell comparison with a table given as value-id rows.
inline bool table_matches(const nmatrix& m, const std::string& name,
                          const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& rows) {
  for (const auto& [args, out] : rows) {
    std::vector<value_index> a;
    for (const auto& x : args) a.push_back(m.index_of(x));
    value_set want;
    for (const auto& x : out) want.push_back(m.index_of(x));
    std::sort(want.begin(), want.end());
    if (m.cell(name, a) != want) return false;
  }
  return true;
}

inline report reproduce_entry(const catalog_entry& e) {
  reporter r(e);
  r.verdict();
  const std::string& id = e.id;
  if (id == "two_conj") {
    r.run("product is 2-valued", [&] {
      auto fb = fibred_semantics(e.f1, e.f2, 2);
      return std::pair{fb.matrix->size() == 2, std::to_string(fb.matrix->size()) + " values"};
    });
    r.holds("and(p,q) entails and2(p,q)", "and(p,q)", "and2(p,q)", 2);
    r.holds("and2(p,q) entails and(p,q)", "and2(p,q)", "and(p,q)", 2);
    r.derivable("merged calculi derive and2(p,q) from and(p,q)", "", "and(p,q)", "and2(p,q)");
  } else if (id == "two_disj") {
    r.fails("or(p,q) does not entail or2(p,q)", "or(p,q)", "or2(p,q)", 2);
    r.derivable("or_pair derives or(p,or2(q,r))", "or_pair", "or(p,or(q,r))", "or(p,or2(q,r))");
    r.run("phi_0..phi_2 pairwise non-equivalent at power 3", [&] {
      auto fam = phi_t_family("or", bf::disj(), "or2", bf::disj(), 2);
      auto fb = fibred_semantics(e.f1, e.f2, 3);
      auto rep = pairwise_nonequivalent(fam, *fb.matrix, 3);
      return std::pair{rep.all_distinct, fam[1].str()};
    });
    r.run("not 1-determined", [&] {
      auto k = k_determinedness_probe(e.f1, e.f2, 1, 3);
      return std::pair{k.violation, k.violation ? describe(k.s) : k.note};
    });
  } else if (id == "two_neg") {
    r.run("5-valued table", [&] {
      auto fb = fibred_semantics(e.f1, e.f2, 1);
      const nmatrix& m = *fb.matrix;
      const std::string a = "(0,0)", b = "(0,1/2)", c = "(1/2,0)", d = "(1/2,1/2)", t = "(1,1)";
      bool ok = m.size() == 5 &&
                table_matches(m, "neg", {{{a}, {t}}, {{b}, {t}}, {{c}, {c, d}}, {{d}, {c, d}}, {{t}, {a, b}}}) &&
                table_matches(m, "sim", {{{a}, {t}}, {{b}, {b, d}}, {{c}, {t}}, {{d}, {b, d}}, {{t}, {a, c}}});
      return std::pair{ok, std::to_string(m.size()) + " values"};
    });
    r.fails("neg(p) does not entail sim(p)", "neg(p)", "sim(p)", 1);
    r.run("neg_pair removes (0,1/2) and (1/2,0)", [&] {
      auto fb = fibred_semantics(e.f1, e.f2, 1);
      auto rules = builtin_calculus("neg_pair").rules();
      formula p = var("p");
      formula roots[] = {r.f("neg(p)"), r.f("sim(p)")};
      formula uni[] = {p};
      std::set<std::string> used;
      for (const auto& v : surviving_valuations(*fb.matrix, rules, roots, uni))
        used.insert(fb.matrix->value(v.get(p)));
      std::set<std::string> want = {"(0,0)", "(1/2,1/2)", "(1,1)"};
      std::string got;
      for (const auto& u : used) got += u + " ";
      return std::pair{used == want, got};
    });
    r.run("filtered semantics validates neg(p) / sim(p)", [&] {
      auto fb = fibred_semantics(e.f1, e.f2, 1);
      auto rules = builtin_calculus("neg_pair").rules();
      formula g[] = {r.f("neg(p)")};
      formula uni[] = {var("p")};
      auto res = filter_valuations_by_rules(*fb.matrix, rules, g, r.f("sim(p)"), uni);
      return std::pair{res.verdict.holds, std::string()};
    });
  } else if (id == "conj_disj") {
    r.fails("distribution fails", "or(p,and(q,r))", "and(or(p,q),or(p,r))", 2);
    r.derivable("and_or derives distribution", "and_or", "or(p,and(q,r))", "and(or(p,q),or(p,r))");
  } else if (id == "disj_neg") {
    r.fails("excluded middle fails", "", "or(p,neg(p))", 2);
    r.derivable("or_neg derives excluded middle", "or_neg", "", "or(p,neg(p))");
    r.run("union functionally complete", [&] {
      return std::pair{functionally_complete(fragment::unite(e.f1, e.f2)).complete, std::string()};
    });
  } else if (id == "coimp_top") {
    r.run("product is the classical matrix", [&] {
      auto fb = fibred_semantics(e.f1, e.f2, 1);
      return std::pair{fb.matrix->size() == 2, std::to_string(fb.matrix->size()) + " values"};
    });
    r.run("functional completeness recovered", [&] {
      auto v = decide_fc_recovery(e.f1, e.f2);
      return std::pair{v.outcome == fc_outcome::recovered && v.clone == "T0^inf", v.clone};
    });
    r.classical_agreement(100, 2);
  } else if (id == "coimp_bot") {
    r.run("4-valued table", [&] {
      auto fb = fibred_semantics(e.f1, e.f2, 2);
      const nmatrix& m = *fb.matrix;
      const std::vector<std::string> v = {"((0,0),0)", "((0,1),0)", "((1,0),0)", "((1,1),1)"};
      // Rows are the first argument.
      const int t[4][4] = {{0, 1, 2, 3}, {0, 0, 2, 2}, {0, 1, 0, 1}, {0, 0, 0, 0}};
      std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> rows;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rows.push_back({{v[i], v[j]}, {v[t[i][j]]}});
      bool ok = m.size() == 4 && table_matches(m, "coimp", rows) &&
                table_matches(m, "bot", {{{}, {v[0], v[1], v[2]}}});
      return std::pair{ok, std::string()};
    });
    r.holds("coimp(q,bot), p entails coimp(p,bot)", "coimp(q,bot);p", "coimp(p,bot)", 2);
    r.fails("p does not entail coimp(p,bot)", "p", "coimp(p,bot)", 2);
    // With coimp(a,b) = not a and b the premise coimp(q,bot) is unsatisfiable, so the
    // instance that actually breaks cancellation puts bot first.
    r.holds("coimp(bot,q), p entails coimp(bot,p)", "coimp(bot,q);p", "coimp(bot,p)", 2);
    r.fails("p does not entail coimp(bot,p)", "p", "coimp(bot,p)", 2);
    r.run("coimp(bot,q) is satisfiable", [&] {
      auto fb = fibred_semantics(e.f1, e.f2, 2);
      formula q = var("q");
      bool sat = !entails(*fb.matrix, {app("coimp", {app("bot"), q})}, app("bot")).holds;
      return std::pair{sat, std::string()};
    });
    r.derivable("coimp_bot derives coimp(bot,p) from p", "coimp_bot", "p", "coimp(bot,p)");
  } else if (id == "imp_bot") {
    r.run("4-valued matrix", [&] {
      nmatrix m = truth_preserving_bot_matrix(e.f1, "bot");
      const std::vector<std::string> v = {"(0,0)", "(0,1)", "(1,0)", "(1,1)"};
      const int t[4][4] = {{3, 3, 3, 3}, {2, 3, 2, 3}, {1, 1, 3, 3}, {0, 1, 2, 3}};
      std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> rows;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rows.push_back({{v[i], v[j]}, {v[t[i][j]]}});
      bool ok = m.deterministic() && table_matches(m, "imp", rows) &&
                table_matches(m, "bot", {{{}, {v[2]}}});
      return std::pair{ok, std::string()};
    });
    r.run("imp(bot,p) is not valid in the 4-valued matrix", [&] {
      nmatrix m = truth_preserving_bot_matrix(e.f1, "bot");
      return std::pair{!entails(m, {}, r.f("imp(bot,p)")).holds, std::string()};
    });
    r.fails("imp(bot,p) is not valid in the product", "", "imp(bot,p)", 2);
    r.run("axiom imp(bot,p) restores the classical logic", [&] {
      nmatrix m = truth_preserving_bot_matrix(e.f1, "bot");
      nmatrix two = classical_matrix(fragment::unite(e.f1, e.f2));
      auto rules = builtin_calculus("imp_bot").rules();
      std::mt19937 rng(7);
      for (int i = 0; i < 100; ++i) {
        auto s = random_sequent(r.sig_, {"p", "q", "r"}, 3, rng);
        std::vector<formula> roots = s.premises;
        roots.push_back(s.conclusion);
        auto uni = subformulas(roots);
        auto res = filter_valuations_by_rules(m, rules, s.premises, s.conclusion, uni, proviso::axioms);
        if (res.verdict.holds != entails(two, s.premises, s.conclusion).holds)
          return std::pair{false, describe(s)};
      }
      return std::pair{true, std::string("100 sequents")};
    });
  } else if (id == "biimp_bot") {
    r.classical_agreement(100, 2);
  } else if (id == "biimp_bot1") {
    r.run("not 1-determined", [&] {
      auto k = k_determinedness_probe(e.f1, e.f2, 1, 2);
      return std::pair{k.violation, k.violation ? k.family : k.note};
    });
    r.derivable("axiom iff(ubot(p),ubot(q)) derives it", "biimp_bot1", "", "iff(ubot(p),ubot(q))");
  } else if (id == "xor3_two_bots") {
    r.run("countermodel with v(p)=(0,1,1), v(bot1)=(1,0,0), v(bot2)=(0,0,0)", [&] {
      auto fb = fibred_semantics(e.f1, e.f2, 3);
      const nmatrix& m = *fb.matrix;
      partial_valuation v;
      const formula p = var("p"), b1 = formula::make("bot1"), b2 = formula::make("bot2");
      const formula x = formula::make("xor3", {p, b1, b2});
      std::map<formula, std::string> want = {{p, "((0,1,1),0)"}, {b1, "((1,0,0),0)"},
                                             {b2, "((0,0,0),0)"}, {x, "((1,1,1),1)"}};
      for (const auto& [k, val] : want) {
        v.domain.push_back(k);
        v.values.push_back(m.index_of(val));
      }
      formula g[] = {x};
      bool ok = is_partial_valuation(m, v) && verify_countermodel(m, g, p, v);
      return std::pair{ok, std::to_string(m.size()) + " values"};
    });
    r.fails("xor3(p,bot1,bot2) does not entail p", "xor3(p,bot1,bot2)", "p", 3);
    r.derivable("xor3_bots rules apply", "xor3_bots", "xor3(bot1,p,q)", "xor3(bot2,p,q)");
  } else if (id == "neg_bot") {
    r.run("3-valued with bot in {(0,0),(1/2,0)}", [&] {
      auto fb = fibred_semantics(e.f1, e.f2, 2);
      const nmatrix& m = *fb.matrix;
      bool ok = m.size() == 3 && table_matches(m, "bot", {{{}, {"(0,0)", "(1/2,0)"}}});
      return std::pair{ok, std::to_string(m.size()) + " values"};
    });
    r.run("neg(bot) is not valid, countermodel bot=(1/2,0)", [&] {
      auto fb = fibred_semantics(e.f1, e.f2, 2);
      auto res = entails(*fb.matrix, {}, r.f("neg(bot)"));
      bool ok = !res.holds &&
                fb.matrix->value(res.countermodel->get(formula::make("bot"))) == "(1/2,0)";
      return std::pair{ok, std::string()};
    });
    r.holds("neg(bot) entails neg(bot)", "neg(bot)", "neg(bot)", 2);
    r.derivable("axiom neg(bot)", "neg_bot", "", "neg(bot)");
  }
  return r.take();
}

}  // namespace detail

inline report reproduce(const std::string& id) { return detail::reproduce_entry(catalog_lookup(id)); }

inline std::string describe(const report& r) {
  std::string out = r.id + " (" + r.title + ")\n";
  for (const auto& c : r.checks) {
    out += std::string(c.passed ? "  pass  " : "  FAIL  ") + c.name;
    if (!c.detail.empty()) out += "  [" + c.detail + "]";
    out += "\n";
  }
  return out;
}

}  // namespace nmfib
