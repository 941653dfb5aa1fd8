#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "nmfib/boolfun.hpp"
#include "nmfib/semantics.hpp"

namespace nmfib {

inline std::size_t size_cap() {
  if (const char* env = std::getenv("NMFIB_SIZE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 10000;
}

inline std::string tuple_id(const std::vector<std::string>& parts) {
  std::string s = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s + ")";
}

// 2_Σ: the two-valued matrix of a classical fragment.
inline nmatrix classical_matrix(const fragment& fr) {
  std::map<std::string, interpretation> interp;
  for (const auto& c : fr.connectives())
    interp[c.name] = make_interpretation(2, c.fn.arity(), [&](const auto& args) {
      std::size_t row = 0;
      for (auto a : args) row = (row << 1) | a;
      return value_set{static_cast<value_index>(c.fn.at(row))};
    });
  return nmatrix({"0", "1"}, std::vector<std::string>{"1"}, std::move(interp));
}

// M³ for a negation-like connective: 0 ↦ 1, 1/2 ↦ 1/2, 1 ↦ 0, only 1 designated.
inline nmatrix m3_negation(const std::string& name) {
  std::map<std::string, interpretation> interp;
  interp[name] = make_interpretation(3, 1, [](const auto& a) {
    return value_set{static_cast<value_index>(2 - a[0])};
  });
  return nmatrix({"0", "1/2", "1"}, std::vector<std::string>{"1"}, std::move(interp));
}

enum class canonical_kind { top, bottom, unrestrained };

inline nmatrix canonical_matrix(canonical_kind kind, const std::string& name, std::size_t k) {
  std::map<std::string, interpretation> interp;
  interp[name] = make_interpretation(2, k, [kind](const auto&) {
    switch (kind) {
      case canonical_kind::top:
        return value_set{1};
      case canonical_kind::bottom:
        return value_set{0};
      default:
        return value_set{0, 1};
    }
  });
  return nmatrix({"0", "1"}, std::vector<std::string>{"1"}, std::move(interp));
}

// Value of f under a deterministic matrix and an assignment to its variables.
inline value_index evaluate(const nmatrix& m, const formula& f,
                            const std::map<std::string, value_index>& assignment) {
  if (f.is_var()) {
    auto it = assignment.find(f.symbol());
    if (it == assignment.end()) throw error("unassigned variable " + f.symbol());
    return it->second;
  }
  std::vector<value_index> args;
  for (const auto& a : f.args()) args.push_back(evaluate(m, a, assignment));
  const auto& c = m.cell(f.symbol(), args);
  if (c.size() != 1) throw error("evaluation hit a non-deterministic cell of " + f.symbol());
  return c[0];
}

inline nmatrix translate_matrix(const nmatrix& m, const translation& t) {
  if (!m.deterministic())
    throw error("translation image is only defined for deterministic matrices");
  std::map<std::string, interpretation> interp;
  for (const auto& c : t.source().connectives()) {
    const formula& body = t.body(c.name);
    if (!over_signature(body, m.sig()))
      throw error("translation of " + c.name + " leaves the matrix signature");
    interp[c.name] = make_interpretation(m.size(), c.arity, [&](const auto& args) {
      std::map<std::string, value_index> a;
      for (std::size_t i = 0; i < args.size(); ++i) a[pvar(i + 1)] = args[i];
      return value_set{evaluate(m, body, a)};
    });
  }
  return nmatrix(m.values(), m.designation(), std::move(interp));
}

inline nmatrix power(const nmatrix& m, std::size_t n) {
  if (n < 1) throw error("power needs n >= 1");
  const std::size_t base = m.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > size_cap() / base) throw error("size cap exceeded building a power");
    total *= base;
  }
  std::vector<std::vector<value_index>> coords(total, std::vector<value_index>(n));
  std::vector<std::string> names(total);
  std::vector<bool> designated(total);
  for (std::size_t v = 0; v < total; ++v) {
    std::size_t rest = v;
    for (std::size_t i = n; i-- > 0;) {
      coords[v][i] = static_cast<value_index>(rest % base);
      rest /= base;
    }
    std::vector<std::string> parts;
    bool d = true;
    for (auto c : coords[v]) {
      parts.push_back(m.value(c));
      d = d && m.designated(c);
    }
    names[v] = tuple_id(parts);
    designated[v] = d;
  }
  std::map<std::string, interpretation> interp;
  for (const auto& [name, t] : m.interpretations()) {
    const std::size_t k = t.arity;
    interp[name] = make_interpretation(total, k, [&](const auto& args) {
      // Cartesian product of per-coordinate cells, in index order.
      value_set out{0};
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<value_index> a(k);
        for (std::size_t j = 0; j < k; ++j) a[j] = coords[args[j]][i];
        const auto& cell = m.cell(name, a);
        value_set next;
        next.reserve(out.size() * cell.size());
        for (auto prefix : out)
          for (auto c : cell) next.push_back(static_cast<value_index>(prefix * base + c));
        out = std::move(next);
      }
      return out;
    });
  }
  return nmatrix(std::move(names), std::move(designated), std::move(interp));
}

// Index of pair (a,b) in a strict product, as laid out by strict_product.
class product_layout {
 public:
  product_layout(const nmatrix& m1, const nmatrix& m2) : n2_(m2.size()), index_(m1.size() * m2.size(), -1) {
    for (value_index a = 0; a < m1.size(); ++a)
      for (value_index b = 0; b < m2.size(); ++b)
        if (m1.designated(a) == m2.designated(b)) {
          index_[a * n2_ + b] = static_cast<std::int64_t>(pairs_.size());
          pairs_.emplace_back(a, b);
        }
  }
  std::size_t size() const { return pairs_.size(); }
  const std::pair<value_index, value_index>& pair(value_index v) const { return pairs_[v]; }
  std::optional<value_index> index(value_index a, value_index b) const {
    auto i = index_[a * n2_ + b];
    if (i < 0) return std::nullopt;
    return static_cast<value_index>(i);
  }

 private:
  std::size_t n2_;
  std::vector<std::int64_t> index_;
  std::vector<std::pair<value_index, value_index>> pairs_;
};

inline nmatrix strict_product(const nmatrix& m1, const nmatrix& m2) {
  if (!m1.sig().disjoint_from(m2.sig())) throw error("strict product needs disjoint signatures");
  if (m1.degenerate() || m2.degenerate()) throw error("strict product of a degenerate matrix");
  product_layout layout(m1, m2);
  if (layout.size() > size_cap()) throw error("size cap exceeded building a product");
  std::vector<std::string> names;
  std::vector<bool> designated;
  std::vector<std::vector<value_index>> by_first(m1.size()), by_second(m2.size());
  for (value_index v = 0; v < layout.size(); ++v) {
    auto [a, b] = layout.pair(v);
    names.push_back(tuple_id({m1.value(a), m2.value(b)}));
    designated.push_back(m1.designated(a));
    by_first[a].push_back(v);
    by_second[b].push_back(v);
  }
  std::map<std::string, interpretation> interp;
  auto build = [&](const nmatrix& m, bool first, const std::string& name, std::size_t k) {
    return make_interpretation(layout.size(), k, [&](const auto& args) {
      std::vector<value_index> proj(k);
      for (std::size_t j = 0; j < k; ++j)
        proj[j] = first ? layout.pair(args[j]).first : layout.pair(args[j]).second;
      value_set out;
      for (auto x : m.cell(name, proj))
        for (auto v : (first ? by_first : by_second)[x]) out.push_back(v);
      return out;
    });
  };
  for (const auto& [name, t] : m1.interpretations()) interp[name] = build(m1, true, name, t.arity);
  for (const auto& [name, t] : m2.interpretations()) interp[name] = build(m2, false, name, t.arity);
  return nmatrix(std::move(names), std::move(designated), std::move(interp));
}

// Combines component valuations on the skeletons of gamma into one valuation
// over the product.
inline partial_valuation merge_valuations(const nmatrix& m1, const partial_valuation& v1,
                                          const nmatrix& m2, const partial_valuation& v2,
                                          std::span<const formula> gamma, const nmatrix& product) {
  if (!subformula_closed(gamma)) throw error("merge needs a subformula-closed set");
  const signature s1 = m1.sig(), s2 = m2.sig();
  std::vector<formula> dom(gamma.begin(), gamma.end());
  std::sort(dom.begin(), dom.end());
  dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
  partial_valuation out;
  for (const auto& f : dom) {
    value_index a = v1.get(skeleton(f, s1));
    value_index b = v2.get(skeleton(f, s2));
    if (m1.designated(a) != m2.designated(b))
      throw error("incompatible valuations at " + f.str());
    out.domain.push_back(f);
    out.values.push_back(product.index_of(tuple_id({m1.value(a), m2.value(b)})));
  }
  return out;
}

// Is there a value bijection carrying a onto b?
inline bool isomorphic_by(const nmatrix& a, const nmatrix& b, const std::vector<value_index>& map) {
  if (a.size() != b.size() || map.size() != a.size()) return false;
  if (a.sig() != b.sig()) return false;
  for (value_index v = 0; v < a.size(); ++v)
    if (a.designated(v) != b.designated(map[v])) return false;
  for (const auto& [name, t] : a.interpretations()) {
    const auto& tb = b.interp(name);
    std::vector<value_index> args(t.arity), margs(t.arity);
    for (std::size_t c = 0; c < t.cells.size(); ++c) {
      std::size_t rest = c;
      for (std::size_t i = t.arity; i-- > 0;) {
        args[i] = static_cast<value_index>(rest % a.size());
        rest /= a.size();
        margs[i] = map[args[i]];
      }
      value_set img;
      for (auto x : t.cells[c]) img.push_back(map[x]);
      std::sort(img.begin(), img.end());
      if (img != tb.cells[b.cell_index(margs)]) return false;
    }
  }
  return true;
}

}  // namespace nmfib
