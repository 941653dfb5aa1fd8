#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nmfib/syntax.hpp"

namespace nmfib {

using value_index = std::uint32_t;
using value_set = std::vector<value_index>;  // sorted, unique

struct interpretation {
  std::size_t arity = 0;
  std::vector<value_set> cells;  // mixed radix index, first argument most significant
};

struct nmatrix_options {
  bool allow_degenerate = false;
};

class nmatrix {
 public:
  nmatrix() = default;

  nmatrix(std::vector<std::string> values, const std::vector<std::string>& designated,
          std::map<std::string, interpretation> interp, nmatrix_options opt = {})
      : values_(std::move(values)), interp_(std::move(interp)) {
    for (value_index i = 0; i < values_.size(); ++i)
      if (!index_.emplace(values_[i], i).second) throw error("duplicate value " + values_[i]);
    designated_.assign(values_.size(), false);
    for (const auto& d : designated) designated_[index_of(d)] = true;
    validate(opt);
  }

  nmatrix(std::vector<std::string> values, std::vector<bool> designated,
          std::map<std::string, interpretation> interp, nmatrix_options opt = {})
      : values_(std::move(values)), designated_(std::move(designated)), interp_(std::move(interp)) {
    for (value_index i = 0; i < values_.size(); ++i)
      if (!index_.emplace(values_[i], i).second) throw error("duplicate value " + values_[i]);
    if (designated_.size() != values_.size()) throw error("designation vector has wrong size");
    validate(opt);
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<std::string>& values() const { return values_; }
  const std::string& value(value_index i) const { return values_.at(i); }
  bool has_value(const std::string& id) const { return index_.count(id) != 0; }
  value_index index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw error("unknown value " + id);
    return it->second;
  }
  bool designated(value_index i) const { return designated_[i]; }
  const std::vector<bool>& designation() const { return designated_; }
  std::vector<value_index> designated_values() const {
    std::vector<value_index> out;
    for (value_index i = 0; i < size(); ++i)
      if (designated_[i]) out.push_back(i);
    return out;
  }
  std::vector<value_index> undesignated_values() const {
    std::vector<value_index> out;
    for (value_index i = 0; i < size(); ++i)
      if (!designated_[i]) out.push_back(i);
    return out;
  }

  const std::map<std::string, interpretation>& interpretations() const { return interp_; }
  bool has_connective(const std::string& n) const { return interp_.count(n) != 0; }
  const interpretation& interp(const std::string& n) const {
    auto it = interp_.find(n);
    if (it == interp_.end()) throw error("matrix does not interpret " + n);
    return it->second;
  }

  signature sig() const {
    signature s;
    for (const auto& [n, t] : interp_) s.add(n, t.arity);
    return s;
  }

  std::size_t cell_index(std::span<const value_index> args) const {
    std::size_t idx = 0;
    for (auto a : args) idx = idx * values_.size() + a;
    return idx;
  }

  const value_set& cell(const std::string& name, std::span<const value_index> args) const {
    const auto& t = interp(name);
    if (args.size() != t.arity) throw error("arity mismatch applying " + name);
    return t.cells[cell_index(args)];
  }

  bool deterministic() const {
    for (const auto& [n, t] : interp_)
      for (const auto& c : t.cells)
        if (c.size() != 1) return false;
    return true;
  }
  bool unitary() const {
    std::size_t d = 0;
    for (bool b : designated_) d += b;
    return d == 1;
  }
  bool degenerate() const {
    bool any_d = false, any_u = false;
    for (bool b : designated_) (b ? any_d : any_u) = true;
    return !any_d || !any_u;
  }

  bool operator==(const nmatrix& o) const {
    if (values_ != o.values_ || designated_ != o.designated_ || interp_.size() != o.interp_.size())
      return false;
    for (const auto& [n, t] : interp_) {
      auto it = o.interp_.find(n);
      if (it == o.interp_.end() || it->second.arity != t.arity || it->second.cells != t.cells)
        return false;
    }
    return true;
  }

  // Number of cells a table of this arity needs.
  static std::size_t table_size(std::size_t values, std::size_t arity) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < arity; ++i) {
      if (n > (std::size_t{1} << 40) / std::max<std::size_t>(values, 1))
        throw error("interpretation table too large");
      n *= values;
    }
    return n;
  }

 private:
  void validate(const nmatrix_options& opt) {
    if (values_.empty()) throw error("matrix has no values");
    if (!opt.allow_degenerate && degenerate())
      throw error("degenerate matrix: designated and undesignated values must both exist");
    for (const auto& [n, t] : interp_) {
      if (t.cells.size() != table_size(values_.size(), t.arity))
        throw error("interpretation of " + n + " has the wrong number of cells");
      for (const auto& c : t.cells) {
        if (c.empty()) throw error("empty cell in interpretation of " + n);
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (c[i] >= values_.size()) throw error("cell of " + n + " names an unknown value");
          if (i && c[i] <= c[i - 1]) throw error("cell of " + n + " is not sorted and unique");
        }
      }
    }
  }

  std::vector<std::string> values_;
  std::vector<bool> designated_;
  std::map<std::string, interpretation> interp_;
  std::unordered_map<std::string, value_index> index_;
};

// Builds a table by calling fn on each argument tuple.
inline interpretation make_interpretation(
    std::size_t nvalues, std::size_t arity,
    const std::function<value_set(const std::vector<value_index>&)>& fn) {
  interpretation t;
  t.arity = arity;
  const std::size_t cells = nmatrix::table_size(nvalues, arity);
  t.cells.reserve(cells);
  std::vector<value_index> args(arity, 0);
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rest = c;
    for (std::size_t i = arity; i-- > 0;) {
      args[i] = static_cast<value_index>(rest % nvalues);
      rest /= nvalues;
    }
    value_set s = fn(args);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    t.cells.push_back(std::move(s));
  }
  return t;
}

// ---- partial valuations ----------------------------------------------------

struct partial_valuation {
  std::vector<formula> domain;  // canonical order
  std::vector<value_index> values;

  std::optional<value_index> at(const formula& f) const {
    auto it = std::lower_bound(domain.begin(), domain.end(), f);
    if (it == domain.end() || !(*it == f)) return std::nullopt;
    return values[static_cast<std::size_t>(it - domain.begin())];
  }

  value_index get(const formula& f) const {
    auto v = at(f);
    if (!v) throw error("formula outside valuation domain: " + f.str());
    return *v;
  }

  bool operator==(const partial_valuation&) const = default;
};

inline std::string describe(const partial_valuation& v, const nmatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < v.domain.size(); ++i)
    out += v.domain[i].str() + " ↦ " + m.value(v.values[i]) + "\n";
  return out;
}

inline bool subformula_closed(std::span<const formula> fs) {
  formula_set s(fs.begin(), fs.end());
  for (const auto& f : fs)
    for (const auto& a : f.args())
      if (!s.count(a)) return false;
  return true;
}

inline void require_signature(const nmatrix& m, std::span<const formula> fs) {
  for (const auto& f : fs) {
    if (f.is_var()) continue;
    if (!m.has_connective(f.symbol()))
      throw error("signature mismatch: matrix does not interpret " + f.symbol());
    if (m.interp(f.symbol()).arity != f.arity())
      throw error("signature mismatch: arity of " + f.symbol());
  }
}

// Checks that v respects every cell of m on its domain.
inline bool is_partial_valuation(const nmatrix& m, const partial_valuation& v) {
  if (v.domain.size() != v.values.size()) return false;
  if (!std::is_sorted(v.domain.begin(), v.domain.end())) return false;
  if (!subformula_closed(v.domain)) return false;
  for (std::size_t i = 0; i < v.domain.size(); ++i) {
    const auto& f = v.domain[i];
    if (v.values[i] >= m.size()) return false;
    if (f.is_var()) continue;
    if (!m.has_connective(f.symbol())) return false;
    std::vector<value_index> args;
    for (const auto& a : f.args()) args.push_back(v.get(a));
    const auto& c = m.cell(f.symbol(), args);
    if (!std::binary_search(c.begin(), c.end(), v.values[i])) return false;
  }
  return true;
}

enum class designation_constraint : std::uint8_t { none, designated, undesignated };

namespace detail {

// Depth-first search over partial valuations of a subformula-closed domain.
// Formulas are visited in a fixed topological order; candidate values in
// ascending index order, so results are canonical.
class valuation_search {
 public:
  valuation_search(const nmatrix& m, std::vector<formula> order,
                   std::vector<designation_constraint> constraints)
      : m_(m), order_(std::move(order)), constraints_(std::move(constraints)) {
    formula_map<std::size_t> pos;
    for (std::size_t i = 0; i < order_.size(); ++i) pos.emplace(order_[i], i);
    arg_pos_.resize(order_.size());
    for (std::size_t i = 0; i < order_.size(); ++i)
      for (const auto& a : order_[i].args()) {
        auto it = pos.find(a);
        if (it == pos.end() || it->second >= i)
          throw error("search order is not topological at " + order_[i].str());
        arg_pos_[i].push_back(it->second);
      }
    current_.assign(order_.size(), 0);
    for (value_index v = 0; v < m_.size(); ++v) all_values_.push_back(v);
  }

  // Visits every complete assignment; the visitor returns false to stop.
  // Returns false iff stopped early.
  bool run(const std::function<bool(const std::vector<value_index>&)>& visit) {
    return dfs(0, visit);
  }

  const std::vector<formula>& order() const { return order_; }

 private:
  bool dfs(std::size_t i, const std::function<bool(const std::vector<value_index>&)>& visit) {
    if (i == order_.size()) return visit(current_);
    const formula& f = order_[i];
    const value_set* cands = &all_values_;
    if (!f.is_var()) {
      args_.resize(arg_pos_[i].size());
      for (std::size_t j = 0; j < arg_pos_[i].size(); ++j) args_[j] = current_[arg_pos_[i][j]];
      cands = &m_.cell(f.symbol(), args_);
    }
    // Copy: args_ is reused below.
    const value_set choices = *cands;
    for (value_index v : choices) {
      if (constraints_[i] == designation_constraint::designated && !m_.designated(v)) continue;
      if (constraints_[i] == designation_constraint::undesignated && m_.designated(v)) continue;
      current_[i] = v;
      if (!dfs(i + 1, visit)) return false;
    }
    return true;
  }

  const nmatrix& m_;
  std::vector<formula> order_;
  std::vector<designation_constraint> constraints_;
  std::vector<std::vector<std::size_t>> arg_pos_;
  std::vector<value_index> current_;
  std::vector<value_index> args_;
  value_set all_values_;
};

inline void post_order(const formula& f, formula_set& seen, std::vector<formula>& out) {
  if (seen.count(f)) return;
  for (const auto& a : f.args()) post_order(a, seen, out);
  seen.insert(f);
  out.push_back(f);
}

// Topological order: the subformulas of each root in turn, post-order.
inline std::vector<formula> topological(std::span<const formula> roots) {
  formula_set seen;
  std::vector<formula> out;
  for (const auto& r : roots) post_order(r, seen, out);
  return out;
}

inline partial_valuation to_valuation(const std::vector<formula>& order,
                                      const std::vector<value_index>& vals) {
  std::vector<std::size_t> idx(order.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return order[a] < order[b]; });
  partial_valuation v;
  for (auto i : idx) {
    v.domain.push_back(order[i]);
    v.values.push_back(vals[i]);
  }
  return v;
}

}  // namespace detail

// All partial valuations on gamma, in canonical DFS order: formulas are taken
// by increasing depth, ties broken canonically.
inline std::vector<partial_valuation> enumerate_partial_valuations(const nmatrix& m,
                                                                   std::span<const formula> gamma,
                                                                   std::size_t limit = 1'000'000) {
  if (!subformula_closed(gamma)) throw error("domain is not closed under subformulas");
  require_signature(m, gamma);
  std::vector<formula> order(gamma.begin(), gamma.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const formula& a, const formula& b) { return a.depth() < b.depth(); });
  detail::valuation_search s(m, order,
                             std::vector<designation_constraint>(order.size()));
  std::vector<partial_valuation> out;
  s.run([&](const std::vector<value_index>& vals) {
    if (out.size() >= limit) throw error("valuation enumeration limit exceeded");
    out.push_back(detail::to_valuation(s.order(), vals));
    return true;
  });
  return out;
}

struct entailment {
  bool holds = true;
  std::optional<partial_valuation> countermodel;
};

// Finds a partial valuation on `domain_roots`' subformulas with the given
// designation constraints that also passes `accept`.
inline std::optional<partial_valuation> find_valuation(
    const nmatrix& m, std::span<const formula> designated_roots,
    std::span<const formula> undesignated_roots, std::span<const formula> extra_roots = {},
    const std::function<bool(const partial_valuation&)>& accept = {}) {
  std::vector<formula> roots(designated_roots.begin(), designated_roots.end());
  roots.insert(roots.end(), undesignated_roots.begin(), undesignated_roots.end());
  roots.insert(roots.end(), extra_roots.begin(), extra_roots.end());
  require_signature(m, subformulas(roots));
  auto order = detail::topological(roots);
  formula_set want_d(designated_roots.begin(), designated_roots.end());
  formula_set want_u(undesignated_roots.begin(), undesignated_roots.end());
  std::vector<designation_constraint> cons(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    bool d = want_d.count(order[i]) != 0, u = want_u.count(order[i]) != 0;
    if (d && u) return std::nullopt;
    cons[i] = d ? designation_constraint::designated
                : (u ? designation_constraint::undesignated : designation_constraint::none);
  }
  detail::valuation_search s(m, order, cons);
  std::optional<partial_valuation> found;
  s.run([&](const std::vector<value_index>& vals) {
    auto v = detail::to_valuation(s.order(), vals);
    if (accept && !accept(v)) return true;
    found = std::move(v);
    return false;
  });
  return found;
}

inline entailment entails(const nmatrix& m, std::span<const formula> gamma, const formula& phi) {
  formula one[1] = {phi};
  auto cm = find_valuation(m, gamma, one);
  if (cm) return {false, std::move(cm)};
  return {true, std::nullopt};
}

inline entailment entails(const nmatrix& m, std::initializer_list<formula> gamma,
                          const formula& phi) {
  std::vector<formula> g(gamma);
  return entails(m, g, phi);
}

inline bool verify_countermodel(const nmatrix& m, std::span<const formula> gamma,
                                const formula& phi, const partial_valuation& v) {
  if (!is_partial_valuation(m, v)) return false;
  for (const auto& g : gamma) {
    auto x = v.at(g);
    if (!x || !m.designated(*x)) return false;
  }
  auto y = v.at(phi);
  return y && !m.designated(*y);
}

inline bool logically_equivalent(const nmatrix& m, std::span<const formula> gamma,
                                 std::span<const formula> delta) {
  for (const auto& d : delta)
    if (!entails(m, gamma, d).holds) return false;
  for (const auto& g : gamma)
    if (!entails(m, delta, g).holds) return false;
  return true;
}

// ---- rules ----------------------------------------------------------------------

namespace detail {
inline void for_each_assignment(const std::vector<std::string>& names,
                                std::span<const formula> universe,
                                const std::function<bool(const substitution&)>& fn) {
  if (universe.empty() && !names.empty()) return;
  std::vector<std::size_t> idx(names.size(), 0);
  while (true) {
    substitution s;
    for (std::size_t i = 0; i < names.size(); ++i) s.emplace(names[i], universe[idx[i]]);
    if (!fn(s)) return;
    std::size_t i = names.size();
    while (i > 0) {
      --i;
      if (++idx[i] < universe.size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (names.empty()) return;
  }
}

inline std::vector<std::string> rule_vars(const rule& r) {
  std::vector<formula> all = r.premises;
  all.push_back(r.conclusion);
  return vars(all);
}
}  // namespace detail

// Bounded: only substitutions into `universe` are considered, and only
// instances lying inside v's domain.
inline bool respects_rule_within_universe(const nmatrix& m, const partial_valuation& v,
                                          const rule& r, std::span<const formula> universe) {
  bool ok = true;
  detail::for_each_assignment(detail::rule_vars(r), universe, [&](const substitution& s) {
    auto c = v.at(apply_substitution(s, r.conclusion));
    if (!c) return true;
    bool all = true;
    for (const auto& p : r.premises) {
      auto x = v.at(apply_substitution(s, p));
      if (!x) return true;
      if (!m.designated(*x)) all = false;
    }
    if (all && !m.designated(*c)) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

inline std::vector<formula> rule_instances(std::span<const rule> rules,
                                           std::span<const formula> universe,
                                           std::size_t limit = 200'000) {
  std::vector<formula> out;
  for (const auto& r : rules)
    detail::for_each_assignment(detail::rule_vars(r), universe, [&](const substitution& s) {
      for (const auto& p : r.premises) out.push_back(apply_substitution(s, p));
      out.push_back(apply_substitution(s, r.conclusion));
      if (out.size() > limit) throw error("too many rule instances for the universe");
      return true;
    });
  return out;
}

enum class proviso { none, saturated, axioms };

struct filtered_entailment {
  entailment verdict;
  bool exact = false;
};

// Entailment over partial valuations that respect every rule within the
// universe. The domain includes all rule instances over the universe.
inline filtered_entailment filter_valuations_by_rules(const nmatrix& m, std::span<const rule> rules,
                                                      std::span<const formula> gamma,
                                                      const formula& phi,
                                                      std::span<const formula> universe,
                                                      proviso declared = proviso::none) {
  bool axioms_only = true;
  for (const auto& r : rules) axioms_only = axioms_only && r.is_axiom();
  filtered_entailment out;
  out.exact = declared == proviso::saturated || (declared == proviso::axioms && axioms_only) ||
              rules.empty();
  auto extra = rule_instances(rules, universe);
  formula one[1] = {phi};
  auto cm = find_valuation(m, gamma, one, extra, [&](const partial_valuation& v) {
    for (const auto& r : rules)
      if (!respects_rule_within_universe(m, v, r, universe)) return false;
    return true;
  });
  if (cm) out.verdict = {false, std::move(cm)};
  return out;
}

// Every partial valuation on sub(roots) ∪ instances that respects the rules.
inline std::vector<partial_valuation> surviving_valuations(const nmatrix& m,
                                                           std::span<const rule> rules,
                                                           std::span<const formula> roots,
                                                           std::span<const formula> universe) {
  std::vector<formula> all(roots.begin(), roots.end());
  auto extra = rule_instances(rules, universe);
  all.insert(all.end(), extra.begin(), extra.end());
  auto dom = subformulas(all);
  std::vector<partial_valuation> out;
  for (auto& v : enumerate_partial_valuations(m, dom)) {
    bool ok = true;
    for (const auto& r : rules) ok = ok && respects_rule_within_universe(m, v, r, universe);
    if (ok) out.push_back(std::move(v));
  }
  return out;
}

// ---- bounded saturation --------------------------------------------------------

struct saturation_counterexample {
  std::vector<formula> gamma;
  std::vector<formula> delta;
};

// Searches Γ ⊆ Γ-pool and Δ ⊆ Δ-pool, |Δ| ≤ k, with Γ ⊬ ψ for every ψ in Δ
// yet no valuation designating Γ while undesignating all of Δ.
inline std::optional<saturation_counterexample> bounded_saturation_check(
    const nmatrix& m, std::size_t k, std::span<const formula> gamma_pool,
    std::span<const formula> delta_pool) {
  const std::size_t gp = gamma_pool.size();
  if (gp > 16) throw error("Γ-pool too large");
  std::vector<std::uint32_t> gmasks;
  for (std::uint32_t g = 0; g < (1u << gp); ++g) gmasks.push_back(g);
  std::stable_sort(gmasks.begin(), gmasks.end(),
                   [](auto a, auto b) { return std::popcount(a) < std::popcount(b); });
  for (auto gm : gmasks) {
    std::vector<formula> gamma;
    for (std::size_t i = 0; i < gp; ++i)
      if (gm & (1u << i)) gamma.push_back(gamma_pool[i]);
    std::vector<formula> candidates;
    for (const auto& d : delta_pool)
      if (!entails(m, gamma, d).holds) candidates.push_back(d);
    const std::size_t n = candidates.size();
    for (std::size_t size = 1; size <= std::min(k, n); ++size) {
      std::vector<std::size_t> pick(size);
      for (std::size_t i = 0; i < size; ++i) pick[i] = i;
      while (true) {
        std::vector<formula> delta;
        for (auto i : pick) delta.push_back(candidates[i]);
        if (!find_valuation(m, gamma, delta)) return saturation_counterexample{gamma, delta};
        std::size_t i = size;
        while (i > 0 && pick[i - 1] == n - size + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
  }
  return std::nullopt;
}

}  // namespace nmfib
