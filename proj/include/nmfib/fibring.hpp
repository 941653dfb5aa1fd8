#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nmfib/boolfun.hpp"
#include "nmfib/calculus.hpp"
#include "nmfib/matrix_ops.hpp"
#include "nmfib/semantics.hpp"
#include "nmfib/syntax.hpp"

namespace nmfib {

inline std::string describe(const sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.premises.size(); ++i) out += (i ? ", " : "") + s.premises[i].str();
  out += out.empty() ? "⊢ " : " ⊢ ";
  return out + s.conclusion.str();
}

// ---- combined semantics ----------------------------------------------------------

// A component's semantics. Saturated components are used as they are; the
// others are raised to the requested power.
struct component {
  nmatrix matrix;
  bool saturated = false;
  std::string label;
};

inline component component_of(const fragment& fr) {
  bool tame = true;
  for (const auto& c : fr.connectives()) tame = tame && !classify(c.fn).very_significant;
  if (tame) return {classical_matrix(fr), true, "2_" + fr.label()};
  const auto& cs = fr.connectives();
  if (cs.size() == 1 && cs[0].fn == bf::neg())
    return {m3_negation(cs[0].name), true, "M3_" + cs[0].name};
  return {classical_matrix(fr), false, "2_" + fr.label()};
}

inline component component_of(nmatrix m, bool saturated, std::string label = "M") {
  return {std::move(m), saturated, std::move(label)};
}

struct fibred {
  std::shared_ptr<const nmatrix> matrix;
  std::size_t power1 = 1;
  std::size_t power2 = 1;
  std::size_t n = 1;  // requested power
};

inline fibred fibred_semantics(const component& c1, const component& c2, std::size_t n) {
  if (n < 1) throw error("power must be at least 1");
  if (!c1.matrix.sig().disjoint_from(c2.matrix.sig()))
    throw error("fibring needs disjoint signatures");
  fibred out;
  out.n = n;
  out.power1 = c1.saturated ? 1 : n;
  out.power2 = c2.saturated ? 1 : n;
  nmatrix a = out.power1 == 1 ? c1.matrix : power(c1.matrix, out.power1);
  nmatrix b = out.power2 == 1 ? c2.matrix : power(c2.matrix, out.power2);
  out.matrix = std::make_shared<const nmatrix>(strict_product(a, b));
  return out;
}

inline fibred fibred_semantics(const fragment& f1, const fragment& f2, std::size_t n) {
  return fibred_semantics(component_of(f1), component_of(f2), n);
}

// Deterministic four-valued matrix for a truth-preserving fragment with a
// bottom: values {0,1}², connectives componentwise, the bottom at (1,0).
inline nmatrix truth_preserving_bot_matrix(const fragment& fr, const std::string& bot) {
  for (const auto& c : fr.connectives())
    if (!classify(c.fn).truth_preserving)
      throw error("connective " + c.name + " is not truth-preserving");
  if (fr.sig().contains(bot)) throw error("bottom name " + bot + " clashes with the fragment");
  std::vector<std::string> names = {"(0,0)", "(0,1)", "(1,0)", "(1,1)"};
  std::map<std::string, interpretation> interp;
  for (const auto& c : fr.connectives())
    interp[c.name] = make_interpretation(4, c.fn.arity(), [&](const auto& args) {
      std::size_t r1 = 0, r2 = 0;
      for (auto a : args) {
        r1 = (r1 << 1) | (a >> 1);
        r2 = (r2 << 1) | (a & 1);
      }
      return value_set{static_cast<value_index>((c.fn.at(r1) << 1) | c.fn.at(r2))};
    });
  interp[bot] = make_interpretation(4, 0, [](const auto&) { return value_set{2}; });
  return nmatrix(names, std::vector<std::string>{"(1,1)"}, std::move(interp));
}

// ---- derived connectives -------------------------------------------------------

inline std::vector<boolean_function> generators_of(const fragment& fr) {
  std::vector<boolean_function> out;
  for (const auto& c : fr.connectives()) out.push_back(c.fn);
  return out;
}

inline std::vector<std::string> names_of(const fragment& fr) {
  std::vector<std::string> out;
  for (const auto& c : fr.connectives()) out.push_back(c.name);
  return out;
}

// A formula over p1..pk in the fragment's connectives computing target, of
// minimal nesting depth.
inline std::optional<formula> find_expression(const fragment& fr, const boolean_function& target,
                                              std::uint64_t budget = 50'000'000ULL) {
  if (target.arity() == 0 || target.arity() > clone_closure::max_arity) return std::nullopt;
  for (const auto& c : fr.connectives())
    if (c.fn == target) {
      std::vector<formula> args;
      for (std::size_t i = 1; i <= target.arity(); ++i) args.push_back(var(pvar(i)));
      return formula::make(c.name, std::move(args));
    }
  auto mask = clone_closure::to_mask(target);
  clone_closure cl(generators_of(fr), target.arity(), mask, budget);
  if (!cl.contains(mask)) return std::nullopt;
  return cl.build(mask, names_of(fr));
}

// Instantiates an expression over p1..pk with the given arguments.
inline formula instantiate(const formula& expr, const std::vector<formula>& args) {
  substitution s;
  for (std::size_t i = 0; i < args.size(); ++i) s.emplace(pvar(i + 1), args[i]);
  return apply_substitution(s, expr);
}

// ---- classical recovery ----------------------------------------------------------

enum class recovery_kind { classical, subclassical };

struct witness {
  sequent s;
  std::size_t power = 1;
  partial_valuation countermodel;
  std::shared_ptr<const nmatrix> product;
  std::string source;
};

struct recovery_verdict {
  recovery_kind kind = recovery_kind::subclassical;
  char condition = 0;  // 'a', 'b' or 'c' when classical
  std::optional<witness> w;
  std::string note;
};

namespace detail {
inline bool all_projection_or_top(const fragment& fr) { return fragment_inside(fr, in_clone_top); }
inline bool inside_and_top_bot(const fragment& fr) { return fragment_inside(fr, in_clone_and_top_bot); }
inline bool inside_biimp(const fragment& fr) { return fragment_inside(fr, in_clone_biimp); }

// Exactly one 0-ary connective with value 0, every other one constant 1.
inline bool single_bottom_rest_top(const fragment& fr) {
  std::size_t bottoms = 0;
  for (const auto& c : fr.connectives()) {
    if (c.fn.arity() == 0 && !c.fn.at(0))
      ++bottoms;
    else if (!classify(c.fn).top_like)
      return false;
  }
  return bottoms == 1;
}

inline std::vector<std::string> bottoms_of(const fragment& fr) {
  std::vector<std::string> out;
  for (const auto& c : fr.connectives())
    if (c.fn.arity() == 0 && !c.fn.at(0)) out.push_back(c.name);
  return out;
}
}  // namespace detail

inline std::optional<char> recovery_condition(const fragment& f1, const fragment& f2) {
  if (detail::all_projection_or_top(f1) || detail::all_projection_or_top(f2)) return 'a';
  if (detail::inside_and_top_bot(f1) && detail::inside_and_top_bot(f2)) return 'b';
  if ((detail::inside_biimp(f1) && detail::single_bottom_rest_top(f2)) ||
      (detail::inside_biimp(f2) && detail::single_bottom_rest_top(f1)))
    return 'c';
  return std::nullopt;
}

struct witness_options {
  std::size_t power = 2;
  std::size_t max_power = 3;
  std::size_t search_depth = 2;
  std::size_t t_max = 3;
  std::size_t search_cap = 20000;
};

namespace detail {

class witness_finder {
 public:
  witness_finder(const fragment& f1, const fragment& f2, witness_options o)
      : f1_(f1), f2_(f2), o_(o), c1_(component_of(f1)), c2_(component_of(f2)),
        classical_(classical_matrix(fragment::unite(f1, f2))) {}

  std::optional<witness> run() {
    if (auto w = cross_copy()) return w;
    for (int side = 0; side < 2; ++side)
      if (auto w = bottom_family(side)) return w;
    for (int side = 0; side < 2; ++side)
      if (auto w = two_bottoms(side)) return w;
    for (int side = 0; side < 2; ++side)
      if (auto w = phi_t(side)) return w;
    return exhaustive();
  }

  std::optional<witness> attempt(const sequent& s, const std::string& source) {
    if (!entails(classical_, s.premises, s.conclusion).holds) return std::nullopt;
    const bool both_saturated = c1_.saturated && c2_.saturated;
    const std::size_t top = both_saturated ? o_.power : std::max(o_.power, o_.max_power);
    for (std::size_t n = o_.power; n <= top; ++n) {
      const fibred& fb = product(n);
      auto r = entails(*fb.matrix, s.premises, s.conclusion);
      if (!r.holds) return witness{s, n, *r.countermodel, fb.matrix, source};
    }
    return std::nullopt;
  }

 private:
  const fibred& product(std::size_t n) {
    auto it = cache_.find(n);
    if (it == cache_.end()) it = cache_.emplace(n, fibred_semantics(c1_, c2_, n)).first;
    return it->second;
  }

  const fragment& side_frag(int side) const { return side == 0 ? f1_ : f2_; }

  static std::vector<formula> letters(std::size_t k) {
    static const char* names[] = {"p", "q", "r", "s"};
    std::vector<formula> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(var(i < 4 ? names[i] : pvar(i + 1)));
    return out;
  }

  std::optional<witness> cross_copy() {
    for (const auto& a : f1_.connectives())
      for (const auto& b : f2_.connectives()) {
        if (a.fn != b.fn || !classify(a.fn).very_significant) continue;
        auto xs = letters(a.fn.arity());
        sequent s{{formula::make(a.name, xs)}, formula::make(b.name, xs)};
        if (auto w = attempt(s, "copies")) return w;
        sequent t{{formula::make(b.name, xs)}, formula::make(a.name, xs)};
        if (auto w = attempt(t, "copies")) return w;
      }
    return std::nullopt;
  }

  std::optional<witness> bottom_family(int side) {
    const fragment& ex = side_frag(side);
    const fragment& bt = side_frag(1 - side);
    auto bots = bottoms_of(bt);
    if (bots.empty()) return std::nullopt;
    const formula bot = formula::make(bots[0]);
    const formula p = var("p"), q = var("q");
    struct item {
      boolean_function fn;
      std::function<sequent(const formula&)> make;
      std::string name;
    };
    std::vector<item> items = {
        {bf::disj(), [&](const formula& e) { return sequent{{instantiate(e, {bot, p})}, p}; }, "or"},
        {bf::threshold(3, 2),
         [&](const formula& e) { return sequent{{instantiate(e, {bot, p, q})}, p}; }, "thr_3_2"},
        {bf::neg(), [&](const formula& e) { return sequent{{}, instantiate(e, {bot})}; }, "neg"},
        {bf::xor2(), [&](const formula& e) { return sequent{{instantiate(e, {bot, p})}, p}; }, "xor"},
        {bf::bowtie(),
         [&](const formula& e) { return sequent{{instantiate(e, {p, bot, q})}, q}; }, "bowtie"},
    };
    for (const auto& it : items) {
      auto e = find_expression(ex, it.fn);
      if (!e) continue;
      if (auto w = attempt(it.make(*e), "bottom:" + it.name)) return w;
    }
    return std::nullopt;
  }

  std::optional<witness> two_bottoms(int side) {
    const fragment& ex = side_frag(side);
    auto bots = bottoms_of(side_frag(1 - side));
    if (bots.size() < 2) return std::nullopt;
    auto e = find_expression(ex, bf::xor3());
    if (!e) return std::nullopt;
    const formula p = var("p");
    sequent s{{instantiate(*e, {p, formula::make(bots[0]), formula::make(bots[1])})}, p};
    return attempt(s, "two bottoms");
  }

  std::optional<witness> phi_t(int side);

  std::optional<witness> exhaustive() {
    signature sig = signature::unite(f1_.sig(), f2_.sig());
    std::vector<formula> level = {var("p"), var("q")};
    for (const auto& c : sig.connectives())
      if (c.arity == 0) level.push_back(formula::make(c.name));
    std::vector<formula> all = level;
    for (std::size_t d = 1; d <= o_.search_depth; ++d) {
      std::vector<formula> next;
      for (const auto& c : sig.connectives()) {
        if (c.arity == 0) continue;
        std::vector<std::size_t> idx(c.arity, 0);
        while (true) {
          std::vector<formula> args;
          bool fresh = false;
          for (auto i : idx) {
            args.push_back(all[i]);
            fresh = fresh || all[i].depth() + 1 == d;
          }
          if (fresh) next.push_back(formula::make(c.name, args));
          if (next.size() + all.size() > 4000) break;
          std::size_t i = c.arity;
          while (i > 0) {
            --i;
            if (++idx[i] < all.size()) break;
            idx[i] = 0;
            if (i == 0) {
              i = c.arity + 1;
              break;
            }
          }
          if (i == c.arity + 1) break;
        }
      }
      all.insert(all.end(), next.begin(), next.end());
    }
    std::stable_sort(all.begin(), all.end(), [](const formula& a, const formula& b) {
      return a.str().size() < b.str().size();
    });
    std::size_t tried = 0;
    for (const auto& c : all) {
      if (++tried > o_.search_cap) return std::nullopt;
      if (auto w = attempt({{}, c}, "search")) return w;
    }
    for (const auto& a : all)
      for (const auto& c : all) {
        if (a == c) continue;
        if (++tried > o_.search_cap) return std::nullopt;
        if (auto w = attempt({{a}, c}, "search")) return w;
      }
    return std::nullopt;
  }

  const fragment& f1_;
  const fragment& f2_;
  witness_options o_;
  component c1_, c2_;
  nmatrix classical_;
  std::map<std::size_t, fibred> cache_;
};

}  // namespace detail

// φ_0..φ_tmax for a very significant ©1 and a non-top-like, non-0-ary ©2.
inline std::vector<formula> phi_t_family(const std::string& n1, const boolean_function& f1,
                                         const std::string& n2, const boolean_function& f2,
                                         std::size_t t_max) {
  auto c1 = classify(f1);
  if (!c1.very_significant) throw error(n1 + " is not very significant");
  if (f2.arity() == 0) throw error(n2 + " must not be 0-ary");
  if (classify(f2).top_like) throw error(n2 + " is top-like");
  formula theta = nontop_unary_witness(f2, n2);
  const std::size_t k = f1.arity();
  std::vector<bool> proj(k, false);
  for (auto j : c1.projective_indices) proj[j - 1] = true;
  const std::size_t s = k - c1.projective_indices.size();
  const formula p = var("p");
  std::vector<formula> out;
  for (std::size_t t = 0; t <= t_max; ++t) {
    std::vector<formula> args(k);
    std::size_t pj = 0, slot = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (proj[i])
        args[i] = var(pvar(++pj));
      else
        args[i] = nest(theta, t * s + (++slot), p);
    }
    out.push_back(formula::make(n1, std::move(args)));
  }
  return out;
}

inline std::optional<witness> detail::witness_finder::phi_t(int side) {
  const fragment& a = side_frag(side);
  const fragment& b = side_frag(1 - side);
  for (const auto& c1 : a.connectives()) {
    if (!classify(c1.fn).very_significant) continue;
    for (const auto& c2 : b.connectives()) {
      if (c2.fn.arity() == 0 || classify(c2.fn).top_like) continue;
      auto fam = phi_t_family(c1.name, c1.fn, c2.name, c2.fn, o_.t_max);
      for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = i + 1; j < fam.size(); ++j) {
          if (auto w = attempt({{fam[i]}, fam[j]}, "phi_t")) return w;
          if (auto w = attempt({{fam[j]}, fam[i]}, "phi_t")) return w;
        }
    }
  }
  return std::nullopt;
}

inline std::optional<witness> subclassical_witness(const fragment& f1, const fragment& f2,
                                                   witness_options o = {}) {
  if (!f1.sig().disjoint_from(f2.sig())) throw error("fragments share a connective");
  return detail::witness_finder(f1, f2, o).run();
}

inline recovery_verdict decide_recovery(const fragment& f1, const fragment& f2,
                                        witness_options o = {}) {
  if (!f1.sig().disjoint_from(f2.sig())) throw error("fragments share a connective");
  recovery_verdict v;
  if (auto c = recovery_condition(f1, f2)) {
    v.kind = recovery_kind::classical;
    v.condition = *c;
    return v;
  }
  v.kind = recovery_kind::subclassical;
  v.w = subclassical_witness(f1, f2, o);
  if (!v.w)
    v.note = "no witness found within power " + std::to_string(o.max_power) + " and depth " +
             std::to_string(o.search_depth);
  return v;
}

// ---- certification ---------------------------------------------------------------

// A proof in the fibring made of steps each justified by one component logic
// applied to skeletons, or by an extra rule instance.
struct chain_step {
  formula f;
  int component = -1;  // -1 premise, 0 or 1 a component, 2 an extra rule
  std::vector<std::size_t> from;
  std::string rule;
  substitution sigma;
};

struct component_chain {
  std::vector<chain_step> steps;
};

namespace detail {
inline bool component_step_holds(const nmatrix& two, const signature& sig,
                                 const std::vector<formula>& premises, const formula& f) {
  return entails(two, skeleton(premises, sig), skeleton(f, sig)).holds;
}
}  // namespace detail

inline std::optional<component_chain> find_component_chain(const fragment& f1, const fragment& f2,
                                                           std::span<const rule> extra,
                                                           std::span<const formula> gamma,
                                                           const formula& phi) {
  const nmatrix m1 = classical_matrix(f1), m2 = classical_matrix(f2);
  const signature s1 = f1.sig(), s2 = f2.sig();
  std::vector<formula> roots(gamma.begin(), gamma.end());
  roots.push_back(phi);
  auto pool = detail::topological(roots);
  component_chain ch;
  formula_map<std::size_t> known;
  auto add = [&](chain_step s) {
    known.emplace(s.f, ch.steps.size());
    ch.steps.push_back(std::move(s));
  };
  for (const auto& g : gamma)
    if (!known.count(g)) add({g, -1, {}, "", {}});
  auto premises_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<formula> out;
    for (auto i : idx) out.push_back(ch.steps[i].f);
    return out;
  };
  bool progress = true;
  while (!known.count(phi) && progress) {
    progress = false;
    for (const auto& cand : pool) {
      if (known.count(cand)) continue;
      std::vector<std::size_t> all(ch.steps.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      for (int c = 0; c < 2; ++c) {
        const nmatrix& m = c == 0 ? m1 : m2;
        const signature& s = c == 0 ? s1 : s2;
        if (!detail::component_step_holds(m, s, premises_of(all), cand)) continue;
        // Drop premises that are not needed.
        std::vector<std::size_t> used = all;
        for (std::size_t i = used.size(); i-- > 0;) {
          auto trial = used;
          trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
          if (detail::component_step_holds(m, s, premises_of(trial), cand)) used = trial;
        }
        add({cand, c, used, "", {}});
        progress = true;
        break;
      }
      if (known.count(phi)) break;
    }
    if (known.count(phi)) break;
    for (const auto& r : extra) {
      std::vector<std::string> vs = detail::rule_vars(r);
      detail::for_each_assignment(vs, pool, [&](const substitution& sg) {
        formula c = apply_substitution(sg, r.conclusion);
        if (known.count(c) || std::find(pool.begin(), pool.end(), c) == pool.end()) return true;
        std::vector<std::size_t> from;
        for (const auto& p : r.premises) {
          auto it = known.find(apply_substitution(sg, p));
          if (it == known.end()) return true;
          from.push_back(it->second);
        }
        add({c, 2, from, r.name, sg});
        progress = true;
        return true;
      });
    }
  }
  if (!known.count(phi)) return std::nullopt;
  // Keep ancestors of phi only.
  std::vector<bool> need(ch.steps.size(), false);
  need[known.at(phi)] = true;
  for (std::size_t i = ch.steps.size(); i-- > 0;)
    if (need[i])
      for (auto j : ch.steps[i].from) need[j] = true;
  std::vector<std::size_t> renum(ch.steps.size());
  component_chain out;
  for (std::size_t i = 0; i < ch.steps.size(); ++i)
    if (need[i]) {
      renum[i] = out.steps.size();
      auto s = ch.steps[i];
      for (auto& j : s.from) j = renum[j];
      out.steps.push_back(std::move(s));
    }
  return out;
}

inline verify_result verify_chain(const component_chain& ch, const fragment& f1,
                                  const fragment& f2, std::span<const rule> extra,
                                  std::span<const formula> gamma, const formula& phi) {
  const nmatrix m1 = classical_matrix(f1), m2 = classical_matrix(f2);
  auto fail = [](std::size_t i, std::string why) { return verify_result{false, i, std::move(why)}; };
  for (std::size_t i = 0; i < ch.steps.size(); ++i) {
    const auto& s = ch.steps[i];
    std::vector<formula> prem;
    for (auto j : s.from) {
      if (j >= i) return fail(i, "premise refers to a later step");
      prem.push_back(ch.steps[j].f);
    }
    if (s.component == -1) {
      if (std::find(gamma.begin(), gamma.end(), s.f) == gamma.end())
        return fail(i, "premise not in Γ");
    } else if (s.component == 0 || s.component == 1) {
      const nmatrix& m = s.component == 0 ? m1 : m2;
      const signature sig = s.component == 0 ? f1.sig() : f2.sig();
      if (!detail::component_step_holds(m, sig, prem, s.f))
        return fail(i, "component entailment fails");
    } else {
      const rule* r = nullptr;
      for (const auto& x : extra)
        if (x.name == s.rule) r = &x;
      if (!r) return fail(i, "unknown rule " + s.rule);
      if (r->premises.size() != prem.size()) return fail(i, "wrong number of premises");
      for (std::size_t j = 0; j < prem.size(); ++j)
        if (!(apply_substitution(s.sigma, r->premises[j]) == prem[j]))
          return fail(i, "premise instance mismatch");
      if (!(apply_substitution(s.sigma, r->conclusion) == s.f))
        return fail(i, "conclusion instance mismatch");
    }
  }
  if (ch.steps.empty() || !(ch.steps.back().f == phi))
    return fail(ch.steps.empty() ? 0 : ch.steps.size() - 1, "last step is not the goal");
  return {};
}

inline std::string describe(const component_chain& ch, const fragment& f1, const fragment& f2) {
  std::string out;
  for (std::size_t i = 0; i < ch.steps.size(); ++i) {
    const auto& s = ch.steps[i];
    out += std::to_string(i + 1) + ". " + s.f.str() + "  ";
    if (s.component == -1)
      out += "premise";
    else if (s.component == 2)
      out += s.rule;
    else
      out += "by " + (s.component == 0 ? f1.label() : f2.label());
    if (!s.from.empty()) {
      out += " from";
      for (auto j : s.from) out += " " + std::to_string(j + 1);
    }
    out += "\n";
  }
  return out;
}

// Merged calculus of the per-connective calculi, when every connective has one.
inline std::optional<calculus> fragment_calculus(const fragment& fr) {
  calculus out(fr.sig(), {});
  for (const auto& c : fr.connectives()) {
    auto k = calculus_for(c.name, c.fn);
    if (!k) return std::nullopt;
    out = merge(out, *k);
  }
  return out;
}

enum class certificate_kind { yes, no, unknown };

struct certificate {
  certificate_kind kind = certificate_kind::unknown;
  std::optional<derivation> proof;
  std::optional<calculus> proof_calculus;
  std::optional<component_chain> chain;
  std::optional<partial_valuation> countermodel;
  std::shared_ptr<const nmatrix> product;
  std::size_t power = 0;
  derive_bounds bounds;
  std::string note;
};

struct certify_options {
  std::size_t power = 2;
  derive_bounds bounds;
  bool hilbert = true;
  bool chain = true;
  bool countermodel = true;
};

inline certificate certify_yes(const fragment& f1, const fragment& f2, std::span<const rule> extra,
                               std::span<const formula> gamma, const formula& phi,
                               const certify_options& o) {
  certificate out;
  out.bounds = o.bounds;
  if (o.hilbert) {
    auto k1 = fragment_calculus(f1), k2 = fragment_calculus(f2);
    if (k1 && k2) {
      calculus c = merge(*k1, *k2);
      if (!extra.empty()) {
        signature sig = c.sig();
        for (const auto& r : extra) {
          std::vector<formula> fs = r.premises;
          fs.push_back(r.conclusion);
          sig = signature::unite(sig, signature_of(fs));
        }
        c = merge(c, calculus(sig, std::vector<rule>(extra.begin(), extra.end())));
      }
      auto r = derive(c, gamma, phi, o.bounds);
      if (r.proof) {
        out.kind = certificate_kind::yes;
        out.proof = r.proof;
        out.proof_calculus = c;
        return out;
      }
      if (r.status == derive_status::cap_exhausted) out.note = "derivation search hit its cap";
    }
  }
  if (o.chain) {
    if (auto ch = find_component_chain(f1, f2, extra, gamma, phi)) {
      out.kind = certificate_kind::yes;
      out.chain = std::move(ch);
      return out;
    }
  }
  return out;
}

inline certificate certify_entailment(const fragment& f1, const fragment& f2,
                                      std::span<const rule> extra, std::span<const formula> gamma,
                                      const formula& phi, certify_options o = {}) {
  if (!f1.sig().disjoint_from(f2.sig())) throw error("fragments share a connective");
  certificate out = certify_yes(f1, f2, extra, gamma, phi, o);
  if (out.kind == certificate_kind::yes) return out;
  // With extra rules a product countermodel need not respect them, so no
  // negative verdict is issued.
  if (o.countermodel && extra.empty()) {
    fibred fb = fibred_semantics(f1, f2, o.power);
    auto r = entails(*fb.matrix, gamma, phi);
    if (!r.holds) {
      out.kind = certificate_kind::no;
      out.countermodel = r.countermodel;
      out.product = fb.matrix;
      out.power = o.power;
      return out;
    }
  }
  out.kind = certificate_kind::unknown;
  return out;
}

// ---- recovery of functional completeness ---------------------------------------

enum class fc_outcome { recovered, not_recovered, out_of_bound };

struct fc_verdict {
  fc_outcome outcome = fc_outcome::not_recovered;
  std::string clone;  // D, T0^inf or T0^<n+1> when recovered
  int up1_side = 0;   // 1 or 2
  std::string note;
};

namespace detail {
inline bool is_up1(const fragment& fr) {
  if (!fragment_inside(fr, in_clone_top)) return false;
  for (const auto& c : fr.connectives())
    if (classify(c.fn).top_like) return true;
  return false;
}

// nullopt when the closure engine cannot decide.
inline std::optional<bool> same_clone(const std::vector<boolean_function>& a,
                                      const std::vector<boolean_function>& b) {
  for (const auto& g : b) {
    auto in = clone_contains(a, g);
    if (!in) return std::nullopt;
    if (!*in) return false;
  }
  for (const auto& g : a) {
    auto in = clone_contains(b, g);
    if (!in) return std::nullopt;
    if (!*in) return false;
  }
  return true;
}
}  // namespace detail

inline fc_verdict decide_fc_recovery(const fragment& f1, const fragment& f2, std::size_t n_max = 2) {
  if (!f1.sig().disjoint_from(f2.sig())) throw error("fragments share a connective");
  if (!functionally_complete(fragment::unite(f1, f2)).complete)
    throw error("precondition violated: the union of the fragments is not functionally complete");
  if (functionally_complete(f1).complete)
    throw error("precondition violated: " + f1.label() + " is already functionally complete");
  if (functionally_complete(f2).complete)
    throw error("precondition violated: " + f2.label() + " is already functionally complete");
  fc_verdict v;
  bool undecided = false;
  for (int side = 1; side <= 2; ++side) {
    const fragment& up = side == 1 ? f1 : f2;
    const fragment& other = side == 1 ? f2 : f1;
    if (!detail::is_up1(up)) continue;
    auto gens = generators_of(other);
    std::vector<std::pair<std::string, std::vector<boolean_function>>> targets = {
        {"D", {bf::threshold(3, 2), bf::neg()}}, {"T0^inf", {bf::coimp()}}};
    for (std::size_t n = 0; n <= n_max; ++n) {
      if (n + 2 > clone_closure::max_arity) {
        undecided = true;
        break;
      }
      targets.push_back({"T0^" + std::to_string(n + 1), {bf::threshold(n + 2, n + 1), bf::coimp()}});
    }
    for (const auto& [name, tg] : targets) {
      auto same = detail::same_clone(gens, tg);
      if (!same) {
        undecided = true;
        continue;
      }
      if (*same) {
        v.outcome = fc_outcome::recovered;
        v.clone = name;
        v.up1_side = side;
        return v;
      }
    }
    // Every clone above T0^inf inside P0 is some T0^m; past n_max it is out
    // of reach.
    bool p0 = true;
    for (const auto& c : other.connectives()) p0 = p0 && post_predicates(c.fn).preserves0;
    auto has_coimp = clone_contains(gens, bf::coimp());
    if (p0 && has_coimp && *has_coimp) undecided = true;
  }
  if (undecided) {
    v.outcome = fc_outcome::out_of_bound;
    v.note = "equality would need a threshold generator beyond n_max=" + std::to_string(n_max);
    return v;
  }
  v.outcome = fc_outcome::not_recovered;
  return v;
}

// ---- k-determinedness -------------------------------------------------------------

struct kdet_instance {
  sequent s;
  substitution sigma;
  certificate cert;
};

struct kdet_result {
  bool violation = false;
  std::string family;
  sequent s;
  std::optional<partial_valuation> countermodel;
  std::shared_ptr<const nmatrix> product;
  std::size_t power = 0;
  std::vector<kdet_instance> instances;
  std::string note;
};

namespace detail {
inline formula fold_right(const formula& expr, const std::vector<formula>& xs) {
  formula acc = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) acc = instantiate(expr, {xs[i], acc});
  return acc;
}

inline std::optional<formula> unary_bottom(const fragment& fr) {
  for (const auto& c : fr.connectives())
    if (c.fn.arity() == 1 && classify(c.fn).bottom_like) return formula::make(c.name, {var(pvar(1))});
  return find_expression(fr, boolean_function::constant(1, false));
}
}  // namespace detail

inline kdet_result k_determinedness_probe(const fragment& f1, const fragment& f2, std::size_t k,
                                          std::size_t n = 3, certify_options o = {}) {
  if (k < 1) throw error("k must be at least 1");
  if (!f1.sig().disjoint_from(f2.sig())) throw error("fragments share a connective");
  std::vector<std::pair<std::string, sequent>> families;
  for (int side = 0; side < 2; ++side) {
    const fragment& a = side == 0 ? f1 : f2;
    const fragment& b = side == 0 ? f2 : f1;
    auto or_a = find_expression(a, bf::disj());
    auto or_b = find_expression(b, bf::disj());
    if (or_a && or_b) {
      sequent s;
      const formula q = var("q");
      std::vector<formula> disjuncts;
      for (std::size_t i = 1; i <= k + 1; ++i) {
        for (std::size_t j = i + 1; j <= k + 1; ++j)
          s.premises.push_back(instantiate(*or_a, {var(pvar(i)), var(pvar(j))}));
        disjuncts.push_back(instantiate(*or_b, {q, instantiate(*or_a, {var(pvar(i)), q})}));
      }
      s.conclusion = detail::fold_right(*or_a, disjuncts);
      families.push_back({"disjunctions", s});
    }
    auto iff_a = find_expression(a, bf::iff());
    auto ubot = detail::unary_bottom(b);
    if (iff_a && ubot) {
      // At least three bottoms so that the premise set is never empty.
      const std::size_t m = std::max<std::size_t>(k + 1, 3);
      std::vector<formula> psi;
      for (std::size_t i = 1; i <= m; ++i) psi.push_back(instantiate(*ubot, {var(pvar(i))}));
      sequent s;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t l = 0; l < m; ++l)
            if (i != j && j != l && i != l)
              s.premises.push_back(instantiate(*iff_a, {instantiate(*iff_a, {psi[i], psi[j]}), psi[l]}));
      s.conclusion = var(pvar(m + 1));
      families.push_back({"biimplication with unary bottom", s});
    }
  }
  kdet_result out;
  if (families.empty()) {
    out.note = "no generator family applies to these fragments";
    return out;
  }
  for (const auto& [name, s] : families) {
    fibred fb = fibred_semantics(f1, f2, n);
    auto r = entails(*fb.matrix, s.premises, s.conclusion);
    if (r.holds) continue;
    auto vs = vars([&] {
      auto all = s.premises;
      all.push_back(s.conclusion);
      return all;
    }());
    std::vector<kdet_instance> instances;
    bool all_yes = true;
    std::vector<std::size_t> idx(vs.size(), 0);
    while (all_yes) {
      substitution sg;
      for (std::size_t i = 0; i < vs.size(); ++i) sg.emplace(vs[i], var(pvar(idx[i] + 1)));
      sequent inst;
      for (const auto& p : s.premises) inst.premises.push_back(apply_substitution(sg, p));
      inst.conclusion = apply_substitution(sg, s.conclusion);
      certificate c = certify_yes(f1, f2, {}, inst.premises, inst.conclusion, o);
      if (c.kind != certificate_kind::yes) all_yes = false;
      instances.push_back({inst, sg, std::move(c)});
      std::size_t i = vs.size();
      bool done = true;
      while (i > 0) {
        --i;
        if (++idx[i] < k) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
      if (done) break;
    }
    if (!all_yes) continue;
    out.violation = true;
    out.family = name;
    out.s = s;
    out.countermodel = r.countermodel;
    out.product = fb.matrix;
    out.power = n;
    out.instances = std::move(instances);
    return out;
  }
  out.note = "no family instance separated the logic at power " + std::to_string(n);
  return out;
}

// Pairwise non-equivalence of a formula list in the combined semantics.
struct nonequivalence_report {
  bool all_distinct = true;
  std::size_t power = 0;
  std::vector<std::pair<std::size_t, std::size_t>> equivalent_pairs;
};

inline nonequivalence_report pairwise_nonequivalent(const std::vector<formula>& fs,
                                                    const nmatrix& m, std::size_t power) {
  nonequivalence_report r;
  r.power = power;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      formula a[1] = {fs[i]}, b[1] = {fs[j]};
      if (logically_equivalent(m, a, b)) {
        r.all_distinct = false;
        r.equivalent_pairs.emplace_back(i, j);
      }
    }
  return r;
}

}  // namespace nmfib
