#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "nmfib/boolfun.hpp"
#include "nmfib/syntax.hpp"

namespace nmfib {

class calculus {
 public:
  calculus() = default;
  calculus(signature sig, std::vector<rule> rules) : sig_(std::move(sig)) {
    for (auto& r : rules) add(std::move(r));
  }

  const signature& sig() const { return sig_; }
  const std::vector<rule>& rules() const { return rules_; }

  void add(rule r) {
    for (const auto& p : r.premises) check(p, r.name);
    check(r.conclusion, r.name);
    for (const auto& q : rules_)
      if (q.name == r.name) throw error("duplicate rule name " + r.name);
    rules_.push_back(std::move(r));
  }

  const rule* find(const std::string& name) const {
    for (const auto& r : rules_)
      if (r.name == name) return &r;
    return nullptr;
  }

 private:
  void check(const formula& f, const std::string& rule_name) const {
    if (!over_signature(f, sig_))
      throw error("rule " + rule_name + " is not well formed over its signature");
  }

  signature sig_;
  std::vector<rule> rules_;
};

// Adds a rule written as text over sig.
inline rule make_rule(const std::string& name, const std::vector<std::string>& premises,
                      const std::string& conclusion, const signature& sig) {
  rule r;
  r.name = name;
  for (const auto& p : premises) r.premises.push_back(parse(p, sig));
  r.conclusion = parse(conclusion, sig);
  return r;
}

// Rule names collide when a calculus is merged with a renamed copy of itself,
// so later duplicates get a suffix.
inline calculus merge(const calculus& a, const calculus& b) {
  signature sig = signature::unite(a.sig(), b.sig());
  calculus out(sig, a.rules());
  for (auto r : b.rules()) {
    bool same = false;
    for (const auto& q : out.rules())
      if (q.name == r.name) {
        same = q.premises == r.premises && q.conclusion == r.conclusion;
        if (!same) {
          std::string base = r.name;
          std::size_t i = 2;
          while (out.find(base + "'" + std::to_string(i))) ++i;
          r.name = base + "'" + std::to_string(i);
        }
        break;
      }
    if (!same) out.add(std::move(r));
  }
  return out;
}

namespace detail {
inline formula rename_heads(const formula& f, const std::map<std::string, std::string>& m) {
  if (f.is_var()) return f;
  std::vector<formula> args;
  for (const auto& a : f.args()) args.push_back(rename_heads(a, m));
  auto it = m.find(f.symbol());
  return formula::make(it == m.end() ? f.symbol() : it->second, std::move(args));
}
}  // namespace detail

// Renames connectives; rule names get the new connective name as a suffix so
// that a merged copy stays distinguishable.
inline calculus rename_connectives(const calculus& c, const std::map<std::string, std::string>& m,
                                   const std::string& rule_suffix = "") {
  signature sig;
  for (const auto& x : c.sig().connectives()) {
    auto it = m.find(x.name);
    sig.add(it == m.end() ? x.name : it->second, x.arity);
  }
  std::vector<rule> rules;
  for (const auto& r : c.rules()) {
    rule q;
    q.name = r.name + rule_suffix;
    for (const auto& p : r.premises) q.premises.push_back(detail::rename_heads(p, m));
    q.conclusion = detail::rename_heads(r.conclusion, m);
    rules.push_back(std::move(q));
  }
  return calculus(sig, std::move(rules));
}

inline formula rename_connectives(const formula& f, const std::map<std::string, std::string>& m) {
  return detail::rename_heads(f, m);
}

inline const std::vector<std::string>& builtin_calculus_ids() {
  static const std::vector<std::string> ids = {
      "B_top",  "B_bot",    "B_neg",     "B_and",   "B_or",    "B_imp",
      "neg_pair", "or_pair", "and_or",  "or_neg",    "coimp_bot", "imp_bot",
      "neg_bot", "xor3_bots", "biimp_bot1"};
  return ids;
}

inline calculus builtin_calculus(const std::string& id) {
  auto build = [](signature sig,
                  std::vector<std::tuple<std::string, std::vector<std::string>, std::string>> rs) {
    std::vector<rule> rules;
    for (auto& [n, ps, c] : rs) rules.push_back(make_rule(n, ps, c, sig));
    return calculus(sig, std::move(rules));
  };
  if (id == "B_top") return build({{"top", 0}}, {{"t1", {}, "top"}});
  if (id == "B_bot") return build({{"bot", 0}}, {{"b1", {"bot"}, "p"}});
  if (id == "B_neg")
    return build({{"neg", 1}}, {{"n1", {"p"}, "neg(neg(p))"},
                                {"n2", {"neg(neg(p))"}, "p"},
                                {"n3", {"p", "neg(p)"}, "q"}});
  if (id == "B_and")
    return build({{"and", 2}}, {{"c1", {"and(p,q)"}, "p"},
                                {"c2", {"and(p,q)"}, "q"},
                                {"c3", {"p", "q"}, "and(p,q)"}});
  if (id == "B_or")
    return build({{"or", 2}}, {{"d1", {"p"}, "or(p,q)"},
                               {"d2", {"or(p,p)"}, "p"},
                               {"d3", {"or(p,q)"}, "or(q,p)"},
                               {"d4", {"or(p,or(q,r))"}, "or(or(p,q),r)"}});
  if (id == "B_imp")
    return build({{"imp", 2}}, {{"i1", {}, "imp(p,imp(q,p))"},
                                {"i2", {}, "imp(imp(p,imp(q,r)),imp(imp(p,q),imp(p,r)))"},
                                {"i3", {}, "imp(imp(imp(p,q),p),p)"},
                                {"i4", {"p", "imp(p,q)"}, "q"}});
  if (id == "neg_pair")
    return build({{"neg", 1}, {"sim", 1}},
                 {{"np1", {"neg(p)"}, "sim(p)"}, {"np2", {"sim(p)"}, "neg(p)"}});
  if (id == "or_pair")
    return build({{"or", 2}, {"or2", 2}}, {{"op1", {"or(p,or(q,r))"}, "or(p,or2(q,r))"},
                                           {"op2", {"or(p,or2(q,r))"}, "or(p,or(q,r))"}});
  if (id == "and_or")
    return build({{"and", 2}, {"or", 2}},
                 {{"ao1", {"or(p,q)", "or(p,r)"}, "or(p,and(q,r))"},
                  {"ao2", {"or(p,and(q,r))"}, "or(p,q)"},
                  {"ao3", {"or(p,and(q,r))"}, "or(p,r)"}});
  if (id == "or_neg")
    return build({{"or", 2}, {"neg", 1}}, {{"on1", {}, "or(p,neg(p))"},
                                           {"on2", {"or(p,q)"}, "or(p,neg(neg(q)))"},
                                           {"on3", {"or(p,neg(neg(q)))"}, "or(p,q)"},
                                           {"on4", {"or(p,q)", "or(p,neg(q))"}, "p"}});
  if (id == "coimp_bot")
    return build({{"coimp", 2}, {"bot", 0}}, {{"cb1", {"p"}, "coimp(bot,p)"}});
  if (id == "imp_bot") return build({{"imp", 2}, {"bot", 0}}, {{"ib1", {}, "imp(bot,p)"}});
  if (id == "neg_bot") return build({{"neg", 1}, {"bot", 0}}, {{"nb1", {}, "neg(bot)"}});
  if (id == "xor3_bots")
    return build({{"xor3", 3}, {"bot1", 0}, {"bot2", 0}},
                 {{"xb1", {"xor3(bot1,p,q)"}, "xor3(bot2,p,q)"},
                  {"xb2", {"xor3(bot2,p,q)"}, "xor3(bot1,p,q)"}});
  if (id == "biimp_bot1")
    return build({{"iff", 2}, {"ubot", 1}}, {{"bb1", {}, "iff(ubot(p),ubot(q))"}});
  throw error("unknown calculus " + id);
}

// A sound calculus for a single classical connective, when one is known:
// the built-in displays, or the generic ones for constant functions.
inline std::optional<calculus> calculus_for(const std::string& name, const boolean_function& f) {
  const std::size_t k = f.arity();
  auto renamed = [&](const std::string& id, const std::string& original) {
    return rename_connectives(builtin_calculus(id), {{original, name}},
                              name == original ? "" : "[" + name + "]");
  };
  if (f == bf::top()) return renamed("B_top", "top");
  if (f == bf::bot()) return renamed("B_bot", "bot");
  if (f == bf::neg()) return renamed("B_neg", "neg");
  if (f == bf::conj()) return renamed("B_and", "and");
  if (f == bf::disj()) return renamed("B_or", "or");
  if (f == bf::imp()) return renamed("B_imp", "imp");
  auto cls = classify(f);
  if (cls.top_like || cls.bottom_like) {
    signature sig;
    sig.add(name, k);
    std::vector<formula> args;
    for (std::size_t i = 1; i <= k; ++i) args.push_back(var(pvar(i)));
    formula head = formula::make(name, args);
    rule r;
    if (cls.top_like) {
      r.name = "top[" + name + "]";
      r.conclusion = head;
    } else {
      r.name = "bot[" + name + "]";
      r.premises = {head};
      r.conclusion = var(pvar(k + 1));
    }
    return calculus(sig, {r});
  }
  return std::nullopt;
}

// ---- derivations -------------------------------------------------------------

struct derivation_step {
  formula f;
  bool premise = false;
  std::string rule;
  substitution sigma;
  std::vector<std::size_t> from;
};

struct derivation {
  std::vector<derivation_step> steps;
};

struct derive_bounds {
  std::size_t universe_depth = 2;
  std::size_t step_cap = 10000;
  std::uint64_t match_cap = 50'000'000;
};

enum class derive_status { derived, universe_saturated, cap_exhausted };

struct derive_result {
  derive_status status = derive_status::universe_saturated;
  std::optional<derivation> proof;
  std::size_t formulas_derived = 0;
  derive_bounds bounds;
};

namespace detail {
inline bool match(const formula& pattern, const formula& f, substitution& s) {
  if (pattern.is_var()) {
    auto it = s.find(pattern.symbol());
    if (it == s.end()) {
      s.emplace(pattern.symbol(), f);
      return true;
    }
    return it->second == f;
  }
  if (f.is_var() || f.symbol() != pattern.symbol() || f.arity() != pattern.arity()) return false;
  for (std::size_t i = 0; i < f.arity(); ++i)
    if (!match(pattern.arg(i), f.arg(i), s)) return false;
  return true;
}

class forward_chainer {
 public:
  forward_chainer(const calculus& c, std::span<const formula> gamma, const formula& goal,
                  derive_bounds b)
      : c_(c), goal_(goal), b_(b) {
    std::vector<formula> roots(gamma.begin(), gamma.end());
    roots.push_back(goal);
    pool_ = subformulas(roots);
    auto used = vars(roots);
    std::size_t i = 0;
    while (std::find(used.begin(), used.end(), "z" + std::to_string(i)) != used.end()) ++i;
    pool_.push_back(var("z" + std::to_string(i)));
    base_.insert(pool_.begin(), pool_.end());
    for (const auto& g : gamma) add({g, true, "", {}, {}});
  }

  derive_result run() {
    derive_result out;
    out.bounds = b_;
    std::size_t lo = 0;
    bool first = true;
    while (!known_.count(goal_)) {
      const std::size_t hi = steps_.size();
      if (!first && lo == hi) break;
      for (const auto& r : c_.rules()) {
        if (r.premises.empty() && !first) continue;
        if (!apply(r, lo, hi)) {
          out.status = derive_status::cap_exhausted;
          out.formulas_derived = steps_.size();
          return finish(out);
        }
        if (known_.count(goal_)) break;
      }
      first = false;
      lo = hi;
    }
    out.formulas_derived = steps_.size();
    out.status = known_.count(goal_) ? derive_status::derived : derive_status::universe_saturated;
    return finish(out);
  }

 private:
  derive_result& finish(derive_result& out) {
    auto it = known_.find(goal_);
    if (it == known_.end()) return out;
    out.status = derive_status::derived;
    // Keep only the ancestors of the goal.
    std::vector<bool> need(steps_.size(), false);
    need[it->second] = true;
    for (std::size_t i = steps_.size(); i-- > 0;)
      if (need[i])
        for (auto j : steps_[i].from) need[j] = true;
    std::vector<std::size_t> renum(steps_.size());
    derivation d;
    for (std::size_t i = 0; i < steps_.size(); ++i)
      if (need[i]) {
        renum[i] = d.steps.size();
        auto s = steps_[i];
        for (auto& j : s.from) j = renum[j];
        d.steps.push_back(std::move(s));
      }
    out.proof = std::move(d);
    return out;
  }

  bool admissible(const formula& f) { return height(f) <= b_.universe_depth; }

  std::size_t height(const formula& f) {
    if (base_.count(f)) return 0;
    if (f.is_var() || f.arity() == 0) return std::numeric_limits<std::size_t>::max() / 2;
    auto it = height_.find(f);
    if (it != height_.end()) return it->second;
    std::size_t h = 0;
    for (const auto& a : f.args()) h = std::max(h, height(a));
    h = h + 1;
    height_.emplace(f, h);
    return h;
  }

  bool add(derivation_step s) {
    if (known_.count(s.f)) return false;
    known_.emplace(s.f, steps_.size());
    by_head_[s.f.is_var() ? std::string() : s.f.symbol()].push_back(steps_.size());
    steps_.push_back(std::move(s));
    return true;
  }

  // Candidate step indices for a premise pattern.
  std::vector<std::size_t> candidates(const formula& pattern, std::size_t limit) const {
    std::vector<std::size_t> out;
    if (pattern.is_var()) {
      for (std::size_t i = 0; i < limit; ++i) out.push_back(i);
      return out;
    }
    auto it = by_head_.find(pattern.symbol());
    if (it == by_head_.end()) return out;
    for (auto i : it->second)
      if (i < limit) out.push_back(i);
    return out;
  }

  // One semi-naive pass of rule r: premise tuples over [0,hi) with at least
  // one entry in [lo,hi). Returns false when a cap is hit.
  bool apply(const rule& r, std::size_t lo, std::size_t hi) {
    std::vector<std::string> all_vars = rule_vars_of(r);
    if (r.premises.empty()) return instantiate(r, {}, {}, all_vars);
    std::vector<std::vector<std::size_t>> cands;
    for (const auto& p : r.premises) cands.push_back(candidates(p, hi));
    std::vector<std::size_t> chosen;
    return walk(r, cands, 0, false, lo, substitution{}, chosen, all_vars);
  }

  static std::vector<std::string> rule_vars_of(const rule& r) {
    std::vector<formula> all = r.premises;
    all.push_back(r.conclusion);
    return vars(all);
  }

  bool walk(const rule& r, const std::vector<std::vector<std::size_t>>& cands, std::size_t i,
            bool has_new, std::size_t lo, const substitution& s, std::vector<std::size_t>& chosen,
            const std::vector<std::string>& all_vars) {
    if (i == r.premises.size()) {
      if (!has_new) return true;
      return instantiate(r, s, chosen, all_vars);
    }
    for (auto idx : cands[i]) {
      if (++work_ > b_.match_cap) return false;
      // The last premise must supply a new step if none did yet.
      if (i + 1 == r.premises.size() && !has_new && idx < lo) continue;
      substitution t = s;
      if (!match(r.premises[i], steps_[idx].f, t)) continue;
      chosen.push_back(idx);
      bool ok = walk(r, cands, i + 1, has_new || idx >= lo, lo, t, chosen, all_vars);
      chosen.pop_back();
      if (!ok) return false;
      if (known_.count(goal_)) return true;
    }
    return true;
  }

  bool instantiate(const rule& r, const substitution& s, const std::vector<std::size_t>& from,
                   const std::vector<std::string>& all_vars) {
    std::vector<std::string> free;
    for (const auto& v : all_vars)
      if (!s.count(v)) free.push_back(v);
    std::vector<std::size_t> idx(free.size(), 0);
    while (true) {
      substitution t = s;
      for (std::size_t i = 0; i < free.size(); ++i) t.emplace(free[i], pool_[idx[i]]);
      formula c = apply_substitution(t, r.conclusion);
      if (++work_ > b_.match_cap) return false;
      if (!known_.count(c) && admissible(c)) {
        add({c, false, r.name, t, from});
        if (steps_.size() > b_.step_cap) return false;
        if (c == goal_) return true;
      }
      std::size_t i = free.size();
      while (i > 0) {
        --i;
        if (++idx[i] < pool_.size()) break;
        idx[i] = 0;
        if (i == 0) return true;
      }
      if (free.empty()) return true;
    }
  }

  const calculus& c_;
  formula goal_;
  derive_bounds b_;
  std::vector<formula> pool_;
  formula_set base_;
  formula_map<std::size_t> height_;
  formula_map<std::size_t> known_;
  std::map<std::string, std::vector<std::size_t>> by_head_;
  std::vector<derivation_step> steps_;
  std::uint64_t work_ = 0;
};
}  // namespace detail

inline derive_result derive(const calculus& c, std::span<const formula> gamma, const formula& phi,
                            derive_bounds b = {}) {
  if (b.universe_depth == 0 && b.step_cap == 0) throw error("bounds must be positive");
  return detail::forward_chainer(c, gamma, phi, b).run();
}

inline derive_result derive(const calculus& c, std::initializer_list<formula> gamma,
                            const formula& phi, derive_bounds b = {}) {
  std::vector<formula> g(gamma);
  return derive(c, g, phi, b);
}

struct verify_result {
  bool ok = true;
  std::optional<std::size_t> bad_step;
  std::string reason;
  explicit operator bool() const { return ok; }
};

inline verify_result verify(const derivation& d, const calculus& c, std::span<const formula> gamma,
                            const formula& phi) {
  auto fail = [](std::size_t i, std::string why) { return verify_result{false, i, std::move(why)}; };
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const auto& s = d.steps[i];
    if (s.premise) {
      if (std::find(gamma.begin(), gamma.end(), s.f) == gamma.end())
        return fail(i, "premise not in Γ");
      continue;
    }
    const rule* r = c.find(s.rule);
    if (!r) return fail(i, "unknown rule " + s.rule);
    if (s.from.size() != r->premises.size()) return fail(i, "wrong number of premises");
    for (std::size_t j = 0; j < s.from.size(); ++j) {
      if (s.from[j] >= i) return fail(i, "premise refers to a later step");
      if (!(apply_substitution(s.sigma, r->premises[j]) == d.steps[s.from[j]].f))
        return fail(i, "premise instance mismatch");
    }
    if (!(apply_substitution(s.sigma, r->conclusion) == s.f))
      return fail(i, "conclusion instance mismatch");
  }
  if (d.steps.empty() || !(d.steps.back().f == phi))
    return fail(d.steps.empty() ? 0 : d.steps.size() - 1, "last step is not the goal");
  return {};
}

inline std::string describe(const derivation& d) {
  std::string out;
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const auto& s = d.steps[i];
    out += std::to_string(i + 1) + ". " + s.f.str() + "  ";
    if (s.premise) {
      out += "premise";
    } else {
      out += s.rule;
      if (!s.from.empty()) {
        out += " from";
        for (auto j : s.from) out += " " + std::to_string(j + 1);
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace nmfib
