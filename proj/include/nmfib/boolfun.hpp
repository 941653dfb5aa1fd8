#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nmfib/syntax.hpp"

namespace nmfib {

// Truth table of a k-place Boolean function. Row i holds the value on the
// argument vector whose big-endian k-bit encoding is i.
class boolean_function {
 public:
  boolean_function() = default;
  boolean_function(std::size_t arity, std::vector<std::uint8_t> bits) : arity_(arity), bits_(std::move(bits)) {
    if (arity_ > 20) throw error("arity too large for a truth table");
    if (bits_.size() != (std::size_t{1} << arity_))
      throw error("table of arity " + std::to_string(arity_) + " needs " +
                  std::to_string(std::size_t{1} << arity_) + " bits");
    for (auto& b : bits_) b = b ? 1 : 0;
  }

  static boolean_function from_string(std::size_t arity, const std::string& table) {
    std::vector<std::uint8_t> bits;
    for (char c : table) {
      if (c == '0' || c == '1')
        bits.push_back(c == '1');
      else
        throw error(std::string("bad table character '") + c + "'");
    }
    return boolean_function(arity, std::move(bits));
  }

  static boolean_function from_lambda(std::size_t arity,
                                      const std::function<bool(const std::vector<bool>&)>& fn) {
    std::vector<std::uint8_t> bits(std::size_t{1} << arity);
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = fn(row(arity, i));
    return boolean_function(arity, std::move(bits));
  }

  static boolean_function constant(std::size_t arity, bool v) {
    return boolean_function(arity, std::vector<std::uint8_t>(std::size_t{1} << arity, v));
  }

  static boolean_function projection(std::size_t arity, std::size_t j) {
    return from_lambda(arity, [j](const std::vector<bool>& a) { return a[j]; });
  }

  // Argument vector of row i.
  static std::vector<bool> row(std::size_t arity, std::size_t i) {
    std::vector<bool> a(arity);
    for (std::size_t j = 0; j < arity; ++j) a[j] = (i >> (arity - 1 - j)) & 1;
    return a;
  }

  static std::size_t index(const std::vector<bool>& a) {
    std::size_t i = 0;
    for (bool b : a) i = (i << 1) | (b ? 1 : 0);
    return i;
  }

  std::size_t arity() const { return arity_; }
  std::size_t rows() const { return bits_.size(); }
  bool at(std::size_t i) const { return bits_[i]; }
  bool operator()(const std::vector<bool>& a) const { return bits_[index(a)]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::string str() const {
    std::string s;
    for (auto b : bits_) s += b ? '1' : '0';
    return s;
  }

  bool operator==(const boolean_function&) const = default;

 private:
  std::size_t arity_ = 0;
  std::vector<std::uint8_t> bits_{0};
};

// ---- the connectives used across the workbench ----------------------------------

namespace bf {
inline boolean_function top() { return boolean_function::constant(0, true); }
inline boolean_function bot() { return boolean_function::constant(0, false); }
inline boolean_function neg() {
  return boolean_function::from_lambda(1, [](const auto& a) { return !a[0]; });
}
inline boolean_function conj() {
  return boolean_function::from_lambda(2, [](const auto& a) { return a[0] && a[1]; });
}
inline boolean_function disj() {
  return boolean_function::from_lambda(2, [](const auto& a) { return a[0] || a[1]; });
}
inline boolean_function imp() {
  return boolean_function::from_lambda(2, [](const auto& a) { return !a[0] || a[1]; });
}
inline boolean_function coimp() {
  return boolean_function::from_lambda(2, [](const auto& a) { return !a[0] && a[1]; });
}
inline boolean_function iff() {
  return boolean_function::from_lambda(2, [](const auto& a) { return a[0] == a[1]; });
}
inline boolean_function xor2() {
  return boolean_function::from_lambda(2, [](const auto& a) { return a[0] != a[1]; });
}
inline boolean_function xor3() {
  return boolean_function::from_lambda(3, [](const auto& a) { return (a[0] ^ a[1]) ^ a[2]; });
}
inline boolean_function if3() {
  return boolean_function::from_lambda(3, [](const auto& a) { return a[0] ? a[1] : a[2]; });
}
inline boolean_function threshold(std::size_t k, std::size_t n) {
  if (n > k) throw error("threshold needs n <= k");
  return boolean_function::from_lambda(k, [n](const auto& a) {
    std::size_t ones = 0;
    for (bool b : a) ones += b;
    return ones >= n;
  });
}
// λp1p2p3. p1∧(p2∨p3)
inline boolean_function bowtie() {
  return boolean_function::from_lambda(3, [](const auto& a) { return a[0] && (a[1] || a[2]); });
}
}  // namespace bf

// ---- classification ------------------------------------------------------

struct classification {
  bool top_like = false;
  bool bottom_like = false;
  std::vector<std::size_t> projective_indices;  // 1-based
  std::optional<std::vector<std::size_t>> projection_conjunction;  // 1-based J
  bool significant = false;
  bool very_significant = false;
  bool truth_preserving = false;
};

inline classification classify(const boolean_function& f) {
  classification c;
  const std::size_t k = f.arity();
  bool any1 = false, any0 = false;
  for (std::size_t i = 0; i < f.rows(); ++i) (f.at(i) ? any1 : any0) = true;
  c.top_like = !any0;
  c.bottom_like = !any1;
  for (std::size_t j = 0; j < k; ++j) {
    bool proj = true;
    for (std::size_t i = 0; i < f.rows() && proj; ++i)
      if (f.at(i) && !((i >> (k - 1 - j)) & 1)) proj = false;
    if (proj) c.projective_indices.push_back(j + 1);
  }
  // The only candidate J is the set of projective indices.
  if (!c.bottom_like) {
    bool ok = true;
    for (std::size_t i = 0; i < f.rows() && ok; ++i) {
      bool all = true;
      for (auto j : c.projective_indices)
        if (!((i >> (k - j)) & 1)) all = false;
      if (all != f.at(i)) ok = false;
    }
    if (ok) c.projection_conjunction = c.projective_indices;
  }
  c.significant = !c.top_like && !c.bottom_like;
  c.very_significant = !c.bottom_like && !c.projection_conjunction;
  c.truth_preserving = f.at(f.rows() - 1);
  return c;
}

// ---- Post predicates -------------------------------------------------------

// Algebraic normal form coefficients, indexed like rows.
inline std::vector<std::uint8_t> anf(const boolean_function& f) {
  std::vector<std::uint8_t> a = f.bits();
  for (std::size_t bit = 1; bit < a.size(); bit <<= 1)
    for (std::size_t m = 0; m < a.size(); ++m)
      if (m & bit) a[m] ^= a[m ^ bit];
  return a;
}

struct post_record {
  bool preserves0 = false;
  bool preserves1 = false;
  bool monotone = false;
  bool affine = false;
  bool self_dual = false;
};

inline post_record post_predicates(const boolean_function& f) {
  post_record r;
  const std::size_t n = f.rows();
  r.preserves0 = !f.at(0);
  r.preserves1 = f.at(n - 1);
  r.monotone = true;
  for (std::size_t i = 0; i < n && r.monotone; ++i)
    for (std::size_t bit = 1; bit < n; bit <<= 1)
      if (!(i & bit) && f.at(i) && !f.at(i | bit)) {
        r.monotone = false;
        break;
      }
  auto a = anf(f);
  r.affine = true;
  for (std::size_t m = 0; m < n; ++m)
    if (a[m] && std::popcount(m) >= 2) r.affine = false;
  r.self_dual = true;
  for (std::size_t i = 0; i < n; ++i)
    if (f.at(i) == f.at((n - 1) ^ i)) r.self_dual = false;
  return r;
}

// ---- clone membership, closed form ------------------------------------------------

inline bool is_projection(const boolean_function& f) {
  for (std::size_t j = 0; j < f.arity(); ++j)
    if (f == boolean_function::projection(f.arity(), j)) return true;
  return false;
}

inline bool in_clone_top(const boolean_function& f) {
  if (f.arity() == 0) return f.at(0);
  return classify(f).top_like || is_projection(f);
}

inline bool in_clone_and_top_bot(const boolean_function& f) {
  if (f.arity() == 0) return true;
  std::size_t meet = f.rows() - 1;
  bool any = false;
  for (std::size_t i = 0; i < f.rows(); ++i)
    if (f.at(i)) {
      meet &= i;
      any = true;
    }
  if (!any) return true;
  for (std::size_t i = 0; i < f.rows(); ++i)
    if (f.at(i) != ((i & meet) == meet)) return false;
  return true;
}

inline bool in_clone_biimp(const boolean_function& f) {
  if (f.arity() == 0) return f.at(0);
  return post_predicates(f).affine && f.at(f.rows() - 1);
}

// ---- fragments -------------------------------------------------------------

struct fragment_connective {
  std::string name;
  boolean_function fn;
};

// A classical fragment: a signature with a truth table per connective.
class fragment {
 public:
  fragment() = default;
  fragment(std::initializer_list<fragment_connective> cs) {
    for (const auto& c : cs) add(c.name, c.fn);
  }

  void add(const std::string& name, boolean_function fn) {
    for (const auto& c : conns_)
      if (c.name == name) throw error("duplicate connective " + name);
    sig_.add(name, fn.arity());
    conns_.push_back({name, std::move(fn)});
    std::sort(conns_.begin(), conns_.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
  }

  const signature& sig() const { return sig_; }
  const std::vector<fragment_connective>& connectives() const { return conns_; }
  const boolean_function& fn(const std::string& name) const {
    for (const auto& c : conns_)
      if (c.name == name) return c.fn;
    throw error("fragment has no connective " + name);
  }
  bool empty() const { return conns_.empty(); }

  static fragment unite(const fragment& a, const fragment& b) {
    fragment out = a;
    for (const auto& c : b.conns_) out.add(c.name, c.fn);
    return out;
  }

  std::string label() const {
    std::string s = "{";
    for (std::size_t i = 0; i < conns_.size(); ++i) s += (i ? "," : "") + conns_[i].name;
    return s + "}";
  }

 private:
  signature sig_;
  std::vector<fragment_connective> conns_;
};

// Every member, 0-ary ones lifted to constants, satisfies pred.
inline bool fragment_inside(const fragment& fr, bool (*pred)(const boolean_function&)) {
  for (const auto& c : fr.connectives())
    if (!pred(c.fn)) return false;
  return true;
}

struct completeness {
  bool complete = false;
  std::string witness;  // P0, P1, A, M or D when incomplete
};

inline completeness functionally_complete(const fragment& fr) {
  bool p0 = true, p1 = true, a = true, m = true, d = true;
  for (const auto& c : fr.connectives()) {
    auto r = post_predicates(c.fn);
    p0 = p0 && r.preserves0;
    p1 = p1 && r.preserves1;
    a = a && r.affine;
    m = m && r.monotone;
    // A constant lifted to arity >= 1 is never self-dual.
    d = d && (c.fn.arity() > 0 && r.self_dual);
  }
  if (p0) return {false, "P0"};
  if (p1) return {false, "P1"};
  if (a) return {false, "A"};
  if (m) return {false, "M"};
  if (d) return {false, "D"};
  return {true, ""};
}

// ---- clone closure ---------------------------------------------------------------

// Fixpoint of the k-ary part of the clone generated by some functions, over
// 2^k-bit masks. Each member records how it was first produced, in rounds, so
// formulas rebuilt from it are of minimal depth.
class clone_closure {
 public:
  static constexpr std::size_t max_arity = 4;

  struct origin {
    int generator = -1;  // -1 for a projection
    std::size_t projection = 0;
    std::vector<std::size_t> args;  // member indices
  };

  clone_closure(std::vector<boolean_function> generators, std::size_t k,
                std::optional<std::uint32_t> stop_at = std::nullopt,
                std::uint64_t budget = 400'000'000ULL)
      : gens_(std::move(generators)), k_(k) {
    if (k_ < 1 || k_ > max_arity) throw error("closure arity must be between 1 and 4");
    const std::size_t rows = std::size_t{1} << k_;
    full_ = rows == 32 ? 0xffffffffu : ((1u << rows) - 1);
    where_.assign(std::size_t{1} << rows, -1);
    for (std::size_t j = 0; j < k_; ++j) {
      std::uint32_t m = 0;
      for (std::size_t r = 0; r < rows; ++r)
        if ((r >> (k_ - 1 - j)) & 1) m |= 1u << r;
      insert(m, {-1, j, {}});
    }
    for (std::size_t g = 0; g < gens_.size(); ++g)
      if (gens_[g].arity() == 0) insert(gens_[g].at(0) ? full_ : 0, {int(g), 0, {}});
    run(stop_at, budget);
  }

  std::size_t arity() const { return k_; }
  bool complete() const { return complete_; }
  const std::vector<std::uint32_t>& members() const { return members_; }

  bool contains(std::uint32_t mask) const { return where_[mask] >= 0; }
  bool contains(const boolean_function& f) const {
    if (f.arity() != k_) throw error("arity mismatch in closure membership");
    return contains(to_mask(f));
  }

  static std::uint32_t to_mask(const boolean_function& f) {
    std::uint32_t m = 0;
    for (std::size_t r = 0; r < f.rows(); ++r)
      if (f.at(r)) m |= 1u << r;
    return m;
  }

  boolean_function to_function(std::uint32_t m) const {
    std::vector<std::uint8_t> bits(std::size_t{1} << k_);
    for (std::size_t r = 0; r < bits.size(); ++r) bits[r] = (m >> r) & 1;
    return boolean_function(k_, std::move(bits));
  }

  // Rebuilds a formula over p1..pk; names[g] is the connective of generator g.
  formula build(std::uint32_t mask, const std::vector<std::string>& names) const {
    if (!contains(mask)) throw error("function not in closure");
    std::vector<std::optional<formula>> memo(members_.size());
    return build_index(static_cast<std::size_t>(where_[mask]), names, memo);
  }

  std::vector<boolean_function> functions() const {
    std::vector<std::uint32_t> sorted = members_;
    std::sort(sorted.begin(), sorted.end());
    std::vector<boolean_function> out;
    for (auto m : sorted) out.push_back(to_function(m));
    return out;
  }

 private:
  bool insert(std::uint32_t m, origin o) {
    if (where_[m] >= 0) return false;
    where_[m] = static_cast<std::int64_t>(members_.size());
    members_.push_back(m);
    origins_.push_back(std::move(o));
    return true;
  }

  std::uint32_t apply(const boolean_function& g, const std::vector<std::size_t>& idx) const {
    const std::size_t m = g.arity();
    std::uint32_t out = 0;
    for (std::size_t row = 0; row < g.rows(); ++row) {
      if (!g.at(row)) continue;
      std::uint32_t term = full_;
      for (std::size_t i = 0; i < m; ++i) {
        std::uint32_t h = members_[idx[i]];
        term &= ((row >> (m - 1 - i)) & 1) ? h : (~h & full_);
      }
      out |= term;
    }
    return out;
  }

  void run(std::optional<std::uint32_t> stop_at, std::uint64_t budget) {
    std::uint64_t work = 0;
    std::size_t lo = 0;
    if (stop_at && contains(*stop_at)) return;
    while (true) {
      const std::size_t hi = members_.size();
      if (lo == hi) break;
      for (std::size_t g = 0; g < gens_.size(); ++g) {
        const std::size_t m = gens_[g].arity();
        if (m == 0) continue;
        // Tuples over [0,hi) with at least one entry in [lo,hi); j is the
        // first such position.
        for (std::size_t j = 0; j < m; ++j) {
          std::vector<std::size_t> idx(m, 0);
          std::vector<std::size_t> from(m), to(m);
          for (std::size_t i = 0; i < m; ++i) {
            from[i] = i < j ? 0 : (i == j ? lo : 0);
            to[i] = i < j ? lo : hi;
          }
          bool empty = false;
          for (std::size_t i = 0; i < m; ++i) {
            if (from[i] >= to[i]) empty = true;
            idx[i] = from[i];
          }
          if (empty) continue;
          while (true) {
            if (++work > budget) {
              complete_ = false;
              return;
            }
            std::uint32_t r = apply(gens_[g], idx);
            if (insert(r, {int(g), 0, idx}) && stop_at && r == *stop_at) return;
            std::size_t i = m;
            while (i > 0) {
              --i;
              if (++idx[i] < to[i]) break;
              idx[i] = from[i];
              if (i == 0) {
                i = m + 1;
                break;
              }
            }
            if (i == m + 1) break;
          }
        }
      }
      lo = hi;
    }
  }

  formula build_index(std::size_t i, const std::vector<std::string>& names,
                      std::vector<std::optional<formula>>& memo) const {
    if (memo[i]) return *memo[i];
    const origin& o = origins_[i];
    formula f;
    if (o.generator < 0) {
      f = formula::var(pvar(o.projection + 1));
    } else {
      std::vector<formula> args;
      for (auto a : o.args) args.push_back(build_index(a, names, memo));
      f = formula::make(names.at(static_cast<std::size_t>(o.generator)), std::move(args));
    }
    memo[i] = f;
    return f;
  }

  std::vector<boolean_function> gens_;
  std::size_t k_;
  std::uint32_t full_ = 0;
  std::vector<std::int64_t> where_;
  std::vector<std::uint32_t> members_;
  std::vector<origin> origins_;
  bool complete_ = true;
};

inline std::vector<boolean_function> clone_closure_at_arity(const std::vector<boolean_function>& gens,
                                                            std::size_t k) {
  clone_closure c(gens, k);
  if (!c.complete()) throw error("closure budget exhausted");
  return c.functions();
}

// Is f in the clone generated by gens? Decided by closure at f's arity (0-ary f
// as a constant unary function).
inline std::optional<bool> clone_contains(const std::vector<boolean_function>& gens,
                                          const boolean_function& f,
                                          std::uint64_t budget = 400'000'000ULL) {
  boolean_function g = f.arity() == 0 ? boolean_function::constant(1, f.at(0)) : f;
  if (is_projection(g)) return true;
  for (const auto& h : gens)
    if (h == g) return true;
  if (g.arity() > clone_closure::max_arity) return std::nullopt;
  clone_closure c(gens, g.arity(), clone_closure::to_mask(g), budget);
  if (c.contains(g)) return true;
  if (!c.complete()) return std::nullopt;
  return false;
}

// ---- nestings ----------------------------------------------------------------

// θ(p) built from a non-top-like connective such that no nesting θ^n(p) is a
// tautology.
inline formula nontop_unary_witness(const boolean_function& f, const std::string& name) {
  const std::size_t k = f.arity();
  if (k == 0) throw error("nontop_unary_witness needs arity >= 1");
  auto cls = classify(f);
  if (cls.top_like) throw error(name + " is top-like");
  formula p = formula::var("p");
  formula alpha = formula::make(name, std::vector<formula>(k, p));
  // α computes f(x,…,x).
  bool a0 = f.at(0), a1 = f.at(f.rows() - 1);
  if (!(a0 && a1)) return alpha;
  std::size_t row = 0;
  while (f.at(row)) ++row;
  std::vector<formula> args;
  for (std::size_t i = 0; i < k; ++i) args.push_back(((row >> (k - 1 - i)) & 1) ? alpha : p);
  return formula::make(name, std::move(args));
}

}  // namespace nmfib
