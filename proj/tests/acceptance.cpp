// One line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nmfib/nmfib.hpp"

using namespace nmfib;

namespace {

using outcome = std::pair<bool, std::string>;

// Classical oracle independent of boolean_function: connectives as lambdas.
using bool_op = std::function<bool(const std::vector<bool>&)>;

const std::map<std::string, bool_op>& ops() {
  static const std::map<std::string, bool_op> m = {
      {"top", [](const auto&) { return true; }},
      {"bot", [](const auto&) { return false; }},
      {"neg", [](const auto& a) { return !a[0]; }},
      {"and", [](const auto& a) { return a[0] && a[1]; }},
      {"or", [](const auto& a) { return a[0] || a[1]; }},
      {"imp", [](const auto& a) { return !a[0] || a[1]; }},
      {"iff", [](const auto& a) { return a[0] == a[1]; }},
      {"xor", [](const auto& a) { return a[0] != a[1]; }},
      {"thr32", [](const auto& a) { return int(a[0]) + int(a[1]) + int(a[2]) >= 2; }},
      {"bowtie", [](const auto& a) { return a[0] && (a[1] || a[2]); }},
  };
  return m;
}

bool eval(const formula& f, const std::map<std::string, bool>& v) {
  if (f.is_var()) return v.at(f.symbol());
  std::vector<bool> a;
  for (const auto& x : f.args()) a.push_back(eval(x, v));
  return ops().at(f.symbol())(a);
}

bool classically_valid(const std::vector<formula>& gamma, const formula& phi) {
  std::vector<formula> all = gamma;
  all.push_back(phi);
  auto vs = vars(all);
  for (std::size_t m = 0; m < (std::size_t{1} << vs.size()); ++m) {
    std::map<std::string, bool> v;
    for (std::size_t i = 0; i < vs.size(); ++i) v[vs[i]] = (m >> i) & 1;
    bool prem = true;
    for (const auto& g : gamma) prem = prem && eval(g, v);
    if (prem && !eval(phi, v)) return false;
  }
  return true;
}

bool same_bits(const boolean_function& f, const std::string& bits) {
  return f.str() == bits;
}

// ---- 1 -------------------------------------------------------------------------

outcome truth_tables() {
  // Rows ordered with the first argument most significant.
  const std::vector<std::pair<boolean_function, std::string>> printed = {
      {bf::top(), "1"}, {bf::bot(), "0"}, {bf::neg(), "10"},
      {bf::conj(), "0001"}, {bf::disj(), "0111"}, {bf::imp(), "1101"}};
  for (const auto& [f, bits] : printed)
    if (!same_bits(f, bits)) return {false, "printed table " + bits + " got " + f.str()};

  // Derived ones through their defining terms, evaluated by the oracle.
  auto by_term = [](std::size_t k, const std::function<bool(const std::vector<bool>&)>& t) {
    std::string s;
    for (std::size_t r = 0; r < (std::size_t{1} << k); ++r) {
      std::vector<bool> a(k);
      for (std::size_t j = 0; j < k; ++j) a[j] = (r >> (k - 1 - j)) & 1;
      s += t(a) ? '1' : '0';
    }
    return s;
  };
  auto I = [](bool a, bool b) { return !a || b; };
  const std::vector<std::tuple<std::string, boolean_function, std::string>> derived = {
      {"coimp", bf::coimp(), by_term(2, [&](const auto& a) { return !I(a[1], a[0]); })},
      {"iff", bf::iff(), by_term(2, [&](const auto& a) { return I(a[0], a[1]) && I(a[1], a[0]); })},
      {"xor", bf::xor2(),
       by_term(2, [&](const auto& a) { return !(I(a[0], a[1]) && I(a[1], a[0])); })},
      {"xor3", bf::xor3(), by_term(3, [](const auto& a) { return a[0] != (a[1] != a[2]); })},
      {"if", bf::if3(), by_term(3, [&](const auto& a) { return I(a[0], a[1]) && I(!a[0], a[2]); })},
  };
  for (const auto& [name, f, bits] : derived)
    if (!same_bits(f, bits)) return {false, name + " expected " + bits + " got " + f.str()};

  // T^k_n by the recursive definition.
  std::function<bool(std::size_t, std::size_t, const std::vector<bool>&, std::size_t)> thr =
      [&](std::size_t k, std::size_t n, const std::vector<bool>& a, std::size_t from) -> bool {
    if (n == 0) return true;
    if (n == k) {
      for (std::size_t i = from; i < a.size(); ++i)
        if (!a[i]) return false;
      return true;
    }
    return (a[from] && thr(k - 1, n - 1, a, from + 1)) || thr(k - 1, n, a, from + 1);
  };
  std::size_t count = 0;
  for (std::size_t k = 0; k <= 4; ++k)
    for (std::size_t n = 0; n <= k; ++n) {
      auto bits = by_term(k, [&](const auto& a) { return thr(k, n, a, 0); });
      if (!same_bits(bf::threshold(k, n), bits))
        return {false, "T^" + std::to_string(k) + "_" + std::to_string(n)};
      ++count;
    }

  // The translation mechanism gives the same tables from a base matrix.
  signature base;
  for (auto [n, a] : std::vector<std::pair<std::string, std::size_t>>{
           {"neg", 1}, {"and", 2}, {"or", 2}, {"imp", 2}})
    base.add(n, a);
  translation t;
  t.set("coimp", 2, parse("neg(imp(p2,p1))", base));
  t.set("iff", 2, parse("and(imp(p1,p2),imp(p2,p1))", base));
  t.set("if3", 3, parse("and(imp(p1,p2),imp(neg(p1),p3))", base));
  nmatrix two = classical_matrix(
      fragment{{"neg", bf::neg()}, {"and", bf::conj()}, {"or", bf::disj()}, {"imp", bf::imp()}});
  nmatrix img = translate_matrix(two, t);
  nmatrix want = classical_matrix(fragment{{"coimp", bf::coimp()}, {"iff", bf::iff()}, {"if3", bf::if3()}});
  if (!isomorphic_by(img, want, {0, 1})) return {false, "translated matrix differs"};
  return {true, std::to_string(count) + " threshold tables"};
}

// ---- 2 -------------------------------------------------------------------------

outcome collapse() {
  fragment a = standard_fragment("and"), b = standard_fragment("and2");
  auto fb = fibred_semantics(a, b, 2);
  signature sig = signature::unite(a.sig(), b.sig());
  formula x = parse("and(p,q)", sig), y = parse("and2(p,q)", sig);
  bool eq = entails(*fb.matrix, {x}, y).holds && entails(*fb.matrix, {y}, x).holds;
  auto v = decide_recovery(a, b);
  bool ok = eq && v.kind == recovery_kind::classical && v.condition == 'b';
  return {ok, std::string("condition ") + (v.condition ? v.condition : '-')};
}

// ---- 3 -------------------------------------------------------------------------

outcome non_collapse() {
  fragment a = standard_fragment("neg"), b = standard_fragment("sim");
  auto fb = fibred_semantics(a, b, 1);
  const nmatrix& m = *fb.matrix;
  const std::string A = "(0,0)", B = "(0,1/2)", C = "(1/2,0)", D = "(1/2,1/2)", T = "(1,1)";
  if (m.size() != 5) return {false, std::to_string(m.size()) + " values"};
  if (m.designated_values() != std::vector<value_index>{m.index_of(T)}) return {false, "designation"};
  const std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>> table = {
      {A, {{T}, {T}}}, {B, {{T}, {B, D}}}, {C, {{C, D}, {T}}}, {D, {{C, D}, {B, D}}}, {T, {{A, B}, {A, C}}}};
  for (const auto& [in, outs] : table) {
    auto names = [&](const value_set& s) {
      std::set<std::string> r;
      for (auto x : s) r.insert(m.value(x));
      return r;
    };
    value_index args[] = {m.index_of(in)};
    if (names(m.cell("neg", args)) != outs.first) return {false, "neg at " + in};
    if (names(m.cell("sim", args)) != outs.second) return {false, "sim at " + in};
  }
  signature sig = m.sig();
  formula np = parse("neg(p)", sig), sp = parse("sim(p)", sig), p = var("p");
  formula g[] = {np};
  auto r = entails(m, g, sp);
  if (r.holds || !verify_countermodel(m, g, sp, *r.countermodel)) return {false, "neg(p) entails sim(p)"};

  auto rules = builtin_calculus("neg_pair").rules();
  formula roots[] = {np, sp};
  formula uni[] = {p};
  std::set<std::string> used;
  for (const auto& v : surviving_valuations(m, rules, roots, uni)) used.insert(m.value(v.get(p)));
  if (used != std::set<std::string>{A, D, T}) return {false, "filter kept other values"};
  auto f = filter_valuations_by_rules(m, rules, g, sp, uni);
  return {f.verdict.holds, "filtered to (0,0) (1/2,1/2) (1,1)"};
}

// ---- 4 -------------------------------------------------------------------------

outcome neg_bot() {
  fragment a = standard_fragment("neg"), b = standard_fragment("bot");
  auto fb = fibred_semantics(a, b, 2);
  const nmatrix& m = *fb.matrix;
  if (m.size() != 3) return {false, std::to_string(m.size()) + " values"};
  std::set<std::string> bots;
  for (auto x : m.cell("bot", {})) bots.insert(m.value(x));
  if (bots != std::set<std::string>{"(0,0)", "(1/2,0)"}) return {false, "bot cell"};
  formula nb = parse("neg(bot)", m.sig());
  auto r = entails(m, {}, nb);
  if (r.holds || !verify_countermodel(m, {}, nb, *r.countermodel)) return {false, "neg(bot) valid"};
  if (m.value(r.countermodel->get(formula::make("bot"))) != "(1/2,0)") return {false, "bot value"};
  return {entails(m, {nb}, nb).holds, "v(bot)=(1/2,0)"};
}

// ---- 5 -------------------------------------------------------------------------

outcome imp_bot() {
  fragment a = standard_fragment("imp");
  nmatrix m = truth_preserving_bot_matrix(a, "bot");
  // Printed table, rows first argument, values (0,0) (0,1) (1,0) (1,1).
  const char* vs[] = {"(0,0)", "(0,1)", "(1,0)", "(1,1)"};
  const int t[4][4] = {{3, 3, 3, 3}, {2, 3, 2, 3}, {1, 1, 3, 3}, {0, 1, 2, 3}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      value_index args[] = {m.index_of(vs[i]), m.index_of(vs[j])};
      if (m.cell("imp", args) != value_set{m.index_of(vs[t[i][j]])}) return {false, "imp cell"};
    }
  if (m.cell("bot", {}) != value_set{m.index_of("(1,0)")}) return {false, "bot cell"};
  if (m.designated_values() != std::vector<value_index>{m.index_of("(1,1)")}) return {false, "designation"};
  signature sig = m.sig();
  formula ax = parse("imp(bot,p)", sig);
  if (entails(m, {}, ax).holds) return {false, "imp(bot,p) valid"};

  auto rules = builtin_calculus("imp_bot").rules();
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    auto s = random_sequent(sig, {"p", "q", "r"}, 3, rng);
    std::vector<formula> roots = s.premises;
    roots.push_back(s.conclusion);
    auto uni = subformulas(roots);
    auto res = filter_valuations_by_rules(m, rules, s.premises, s.conclusion, uni, proviso::axioms);
    if (res.verdict.holds != classically_valid(s.premises, s.conclusion)) return {false, describe(s)};
  }
  return {true, "100 random sequents"};
}

// ---- 6 -------------------------------------------------------------------------

outcome recovery_catalog() {
  auto F = [](std::initializer_list<std::string> n) { return standard_fragment(n); };
  struct row {
    fragment f1, f2;
    char want;  // 0 for subclassical
    std::string label;
  };
  const std::vector<row> rows = {
      {F({"coimp"}), F({"top"}), 'a', "coimp|top"},
      {F({"and"}), F({"and2"}), 'b', "and|and2"},
      {F({"and"}), F({"top", "bot"}), 'b', "and|top,bot"},
      {F({"iff"}), F({"bot"}), 'c', "iff|bot"},
      {F({"xor3"}), F({"bot"}), 'c', "xor3|bot"},
      {F({"or"}), F({"or2"}), 0, "or|or2"},
      {F({"neg"}), F({"sim"}), 0, "neg|sim"},
      {F({"and"}), F({"or"}), 0, "and|or"},
      {F({"or"}), F({"neg"}), 0, "or|neg"},
      {F({"neg"}), F({"bot"}), 0, "neg|bot"},
      {F({"coimp"}), F({"bot"}), 0, "coimp|bot"},
      {F({"iff"}), F({"ubot"}), 0, "iff|ubot"},
      {F({"xor3"}), F({"bot1", "bot2"}), 0, "xor3|bot1,bot2"},
  };
  std::size_t agree = 0;
  for (const auto& r : rows) {
    auto v = decide_recovery(r.f1, r.f2);
    if (r.want) {
      if (v.kind != recovery_kind::classical || v.condition != r.want) return {false, r.label};
    } else {
      if (v.kind != recovery_kind::subclassical || !v.w) return {false, r.label + " no witness"};
      const auto& w = *v.w;
      nmatrix two = classical_matrix(fragment::unite(r.f1, r.f2));
      if (!entails(two, w.s.premises, w.s.conclusion).holds) return {false, r.label + " not valid"};
      if (!verify_countermodel(*w.product, w.s.premises, w.s.conclusion, w.countermodel))
        return {false, r.label + " countermodel"};
    }
    ++agree;
  }
  return {agree == 13, std::to_string(agree) + "/13"};
}

// ---- 7 -------------------------------------------------------------------------

outcome bad_bottoms() {
  struct item {
    std::string conn;
    std::string premise;  // empty when none
    std::string conclusion;
    std::map<std::string, std::string> at;  // expected values in the first coordinate
    std::string compound;                    // the formula whose value is forced
    std::string forced;
  };
  const std::vector<item> items = {
      {"or", "or(bot,p)", "p", {{"bot", "(0,1)"}, {"p", "(1,0)"}}, "or(bot,p)", "(1,1)"},
      {"thr32", "thr32(bot,p,q)", "p", {{"bot", "(0,1)"}, {"p", "(1,0)"}, {"q", "(1,1)"}},
       "thr32(bot,p,q)", "(1,1)"},
      {"neg", "", "neg(bot)", {{"bot", "(0,1)"}}, "neg(bot)", "(1,0)"},
      {"xor", "xor(bot,p)", "p", {{"bot", "(0,1)"}, {"p", "(1,0)"}}, "xor(bot,p)", "(1,1)"},
      {"bowtie", "bowtie(p,bot,q)", "q", {{"bot", "(0,1)"}, {"p", "(1,1)"}, {"q", "(1,0)"}},
       "bowtie(p,bot,q)", "(1,1)"},
  };
  // Product value id from the first coordinate: designated iff it is (1,1).
  auto id = [](const std::string& c) { return "(" + c + (c == "(1,1)" ? ",1)" : ",0)"); };
  for (const auto& it : items) {
    fragment a = standard_fragment(it.conn), b = standard_fragment("bot");
    // The square of the 2-valued matrix, also for negation.
    auto fb = fibred_semantics(component_of(classical_matrix(a), false), component_of(b), 2);
    const nmatrix& m = *fb.matrix;
    if (m.size() != 4) return {false, it.conn + " product size"};
    signature sig = m.sig();
    std::vector<formula> gamma;
    if (!it.premise.empty()) gamma.push_back(parse(it.premise, sig));
    formula phi = parse(it.conclusion, sig);
    if (!classically_valid(gamma, phi)) return {false, it.conn + " not classically valid"};

    formula comp = parse(it.compound, sig);
    std::vector<value_index> args;
    for (const auto& x : comp.args()) {
      args.push_back(m.index_of(id(it.at.at(x.symbol()))));
    }
    const auto& cell = m.cell(comp.symbol(), args);
    if (cell != value_set{m.index_of(id(it.forced))}) return {false, it.conn + " cell not forced"};

    partial_valuation v;
    std::vector<std::pair<formula, value_index>> pts;
    for (const auto& [k, val] : it.at)
      pts.push_back({k == "bot" ? formula::make("bot") : var(k), m.index_of(id(val))});
    pts.push_back({comp, cell[0]});
    std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [f, x] : pts) {
      v.domain.push_back(f);
      v.values.push_back(x);
    }
    if (!verify_countermodel(m, gamma, phi, v)) return {false, it.conn + " valuation rejected"};
  }
  return {true, "5 sequents"};
}

// ---- 8 -------------------------------------------------------------------------

// Complete iff the binary part of the clone has all 16 functions; otherwise
// every ternary member satisfies the named Post predicate.
outcome functional_completeness() {
  auto check = [](const fragment& fr, const std::string& want) -> std::pair<bool, std::string> {
    auto got = functionally_complete(fr);
    auto gens = generators_of(fr);
    std::vector<boolean_function> g2;
    for (const auto& g : gens) g2.push_back(g.arity() == 0 ? boolean_function::constant(1, g.at(0)) : g);
    bool full = clone_closure_at_arity(g2, 2).size() == 16;
    if (want.empty()) return {got.complete && full, fr.label()};
    if (got.complete || got.witness != want || full) return {false, fr.label() + " " + got.witness};
    for (const auto& f : clone_closure_at_arity(g2, 3)) {
      auto p = post_predicates(f);
      bool in = want == "M" ? p.monotone : want == "A" ? p.affine : false;
      if (!in) return {false, fr.label() + " closure leaves " + want};
    }
    return {true, ""};
  };
  const std::vector<std::pair<fragment, std::string>> cases = {
      {standard_fragment({"or", "neg"}), ""},
      {standard_fragment({"coimp", "top"}), ""},
      {standard_fragment({"and", "or", "top", "bot"}), "M"},
      {standard_fragment({"iff", "bot"}), "A"},
  };
  for (const auto& [fr, want] : cases) {
    auto [ok, d] = check(fr, want);
    if (!ok) return {false, d};
  }
  return {true, "4 fragments"};
}

// ---- 9 -------------------------------------------------------------------------

outcome clone_criteria() {
  struct crit {
    std::string name;
    bool (*closed)(const boolean_function&);
    std::vector<boolean_function> gens;
  };
  const std::vector<crit> crits = {
      {"top", in_clone_top, {boolean_function::constant(1, true)}},
      {"and,top,bot", in_clone_and_top_bot,
       {bf::conj(), boolean_function::constant(1, true), boolean_function::constant(1, false)}},
      {"iff", in_clone_biimp, {bf::iff()}},
  };
  std::size_t compared = 0;
  for (const auto& c : crits)
    for (std::size_t k = 1; k <= 3; ++k) {
      std::set<std::string> closure;
      for (const auto& f : clone_closure_at_arity(c.gens, k)) closure.insert(f.str());
      const std::size_t rows = std::size_t{1} << k;
      for (std::size_t m = 0; m < (std::size_t{1} << rows); ++m) {
        std::vector<std::uint8_t> bits(rows);
        for (std::size_t r = 0; r < rows; ++r) bits[r] = (m >> r) & 1;
        boolean_function f(k, bits);
        if (c.closed(f) != (closure.count(f.str()) != 0))
          return {false, c.name + " disagrees on " + f.str()};
        ++compared;
      }
    }
  return {true, std::to_string(compared) + " comparisons, 0 discrepancies"};
}

// ---- 10 ------------------------------------------------------------------------

bool very_significant_by_definition(const boolean_function& f) {
  const std::size_t k = f.arity();
  bool any1 = false;
  for (std::size_t r = 0; r < f.rows(); ++r) any1 = any1 || f.at(r);
  if (!any1) return false;
  // A projection-conjunction: f is the conjunction of some subset J.
  for (std::size_t J = 0; J < (std::size_t{1} << k); ++J) {
    bool match = true;
    for (std::size_t r = 0; r < f.rows() && match; ++r) {
      bool all = true;
      for (std::size_t j = 0; j < k; ++j)
        if ((J >> j) & 1) all = all && ((r >> (k - 1 - j)) & 1);
      match = all == f.at(r);
    }
    if (match) return false;
  }
  return true;
}

outcome saturation() {
  std::size_t tested = 0;
  for (std::size_t k = 1; k <= 2; ++k)
    for (std::size_t m = 0; m < (std::size_t{1} << (std::size_t{1} << k)); ++m) {
      std::vector<std::uint8_t> bits(std::size_t{1} << k);
      for (std::size_t r = 0; r < bits.size(); ++r) bits[r] = (m >> r) & 1;
      boolean_function f(k, bits);
      nmatrix two = classical_matrix(fragment{{"c", f}});
      std::vector<formula> xs, ys;
      for (std::size_t i = 1; i <= k; ++i) {
        xs.push_back(var("x" + std::to_string(i)));
        ys.push_back(var("y" + std::to_string(i)));
      }
      std::vector<formula> gpool = {formula::make("c", xs)};
      std::vector<formula> dpool = xs;
      dpool.insert(dpool.end(), ys.begin(), ys.end());
      for (std::size_t z = 0; z < (std::size_t{1} << k); ++z) {
        std::vector<formula> args;
        for (std::size_t i = 0; i < k; ++i) args.push_back(((z >> i) & 1) ? ys[i] : xs[i]);
        dpool.push_back(formula::make("c", args));
      }
      auto cx = bounded_saturation_check(two, 2 * k + 1, gpool, dpool);
      if (cx.has_value() != very_significant_by_definition(f))
        return {false, "arity " + std::to_string(k) + " table " + f.str()};
      ++tested;
    }
  return {true, std::to_string(tested) + " connectives"};
}

// ---- 11 ------------------------------------------------------------------------

outcome hilbert() {
  struct job {
    calculus c;
    fragment fr;
    std::string gamma, phi;
  };
  calculus sim = rename_connectives(builtin_calculus("B_neg"), {{"neg", "sim"}}, "[sim]");
  const std::vector<job> jobs = {
      {builtin_calculus("B_and"), standard_fragment("and"), "p;q", "and(p,q)"},
      {merge(merge(builtin_calculus("B_neg"), sim), builtin_calculus("neg_pair")),
       standard_fragment({"neg", "sim"}), "neg(p)", "sim(p)"},
      {merge(merge(builtin_calculus("B_and"), builtin_calculus("B_or")), builtin_calculus("and_or")),
       standard_fragment({"and", "or"}), "or(p,and(q,r))", "and(or(p,q),or(p,r))"},
  };
  std::string sizes;
  for (const auto& j : jobs) {
    auto g = parse_list(j.gamma, j.c.sig());
    formula phi = parse(j.phi, j.c.sig());
    auto r = derive(j.c, g, phi);
    if (!r.proof) return {false, j.phi + " not derived"};
    if (!verify(*r.proof, j.c, g, phi)) return {false, j.phi + " does not re-verify"};
    if (!entails(classical_matrix(j.fr), g, phi).holds) return {false, j.phi + " unsound"};
    sizes += (sizes.empty() ? "" : ",") + std::to_string(r.proof->steps.size());
  }
  return {true, "steps " + sizes};
}

// ---- 12 ------------------------------------------------------------------------

outcome k_determinedness() {
  std::string d;
  for (auto [a, b] : std::vector<std::pair<std::string, std::string>>{{"or", "or2"}, {"iff", "ubot"}}) {
    fragment f1 = standard_fragment(a), f2 = standard_fragment(b);
    auto r = k_determinedness_probe(f1, f2, 1, 3);
    if (!r.violation) return {false, a + "|" + b + ": " + r.note};
    if (!verify_countermodel(*r.product, r.s.premises, r.s.conclusion, *r.countermodel))
      return {false, a + "|" + b + " countermodel"};
    if (r.instances.size() != 1) return {false, a + "|" + b + " instance count"};
    const auto& inst = r.instances[0];
    if (inst.cert.kind != certificate_kind::yes) return {false, a + "|" + b + " instance"};
    if (inst.cert.proof &&
        !verify(*inst.cert.proof, *inst.cert.proof_calculus, inst.s.premises, inst.s.conclusion))
      return {false, a + "|" + b + " proof"};
    if (inst.cert.chain && !verify_chain(*inst.cert.chain, f1, f2, {}, inst.s.premises, inst.s.conclusion))
      return {false, a + "|" + b + " chain"};
    d += (d.empty() ? "" : "; ") + r.family;
  }
  return {true, d};
}

// ---- 13 ------------------------------------------------------------------------

outcome phi_t() {
  fragment a = standard_fragment("or"), b = standard_fragment("or2");
  auto fam = phi_t_family("or", bf::disj(), "or2", bf::disj(), 2);
  auto fb = fibred_semantics(a, b, 3);
  auto rep = pairwise_nonequivalent(fam, *fb.matrix, 3);
  return {rep.all_distinct && fam.size() == 3, std::to_string(fb.matrix->size()) + " values"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<outcome()>>> criteria = {
      {"Truth tables", truth_tables},
      {"Collapse of two conjunctions", collapse},
      {"Non-collapse of two negations", non_collapse},
      {"Negation and bottom", neg_bot},
      {"Implication and bottom", imp_bot},
      {"Recovery verdicts", recovery_catalog},
      {"Bottom witnesses in the 4-valued product", bad_bottoms},
      {"Functional completeness", functional_completeness},
      {"Clone criteria against closure", clone_criteria},
      {"Saturation iff no very significant connective", saturation},
      {"Hilbert derivations", hilbert},
      {"k-determinedness at k=1", k_determinedness},
      {"phi_t non-equivalence at power 3", phi_t},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [name, fn] = criteria[i];
    auto t0 = std::chrono::steady_clock::now();
    outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > 5.0) {
      o.first = false;
      o.second += " (over 5 s)";
    }
    if (!o.first) ++failures;
    std::printf("%s %zu. %s [%s] %.2fs\n", o.first ? "PASS" : "FAIL", i + 1, name.c_str(),
                o.second.c_str(), secs);
  }
  return failures;
}
