#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nmfib {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class parse_error : public error {
 public:
  parse_error(const std::string& msg, std::size_t pos)
      : error(msg + " at position " + std::to_string(pos)), position_(pos) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct connective {
  std::string name;
  std::size_t arity = 0;
  auto operator<=>(const connective&) const = default;
};

class signature {
 public:
  signature() = default;
  signature(std::initializer_list<connective> cs) {
    for (const auto& c : cs) add(c.name, c.arity);
  }

  void add(const std::string& name, std::size_t arity) {
    auto it = arity_.find(name);
    if (it != arity_.end()) {
      if (it->second != arity)
        throw error("connective " + name + " declared with arities " +
                    std::to_string(it->second) + " and " + std::to_string(arity));
      return;
    }
    arity_.emplace(name, arity);
  }

  bool contains(const std::string& name) const { return arity_.count(name) != 0; }

  std::size_t arity(const std::string& name) const {
    auto it = arity_.find(name);
    if (it == arity_.end()) throw error("unknown connective " + name);
    return it->second;
  }

  std::vector<connective> connectives() const {
    std::vector<connective> out;
    for (const auto& [n, a] : arity_) out.push_back({n, a});
    return out;
  }

  std::size_t size() const { return arity_.size(); }
  bool empty() const { return arity_.empty(); }

  bool disjoint_from(const signature& other) const {
    for (const auto& [n, a] : arity_)
      if (other.contains(n)) return false;
    return true;
  }

  // Throws on an arity clash.
  static signature unite(const signature& a, const signature& b) {
    signature out = a;
    for (const auto& c : b.connectives()) out.add(c.name, c.arity);
    return out;
  }

  bool operator==(const signature&) const = default;

 private:
  std::map<std::string, std::size_t> arity_;
};

class formula;

namespace detail {
struct formula_node;
}

class formula {
 public:
  formula() = default;

  static formula var(std::string name);
  static formula make(std::string head, std::vector<formula> args = {});

  bool valid() const { return static_cast<bool>(node_); }
  bool is_var() const;
  bool is_compound() const { return !is_var(); }
  const std::string& symbol() const;
  std::span<const formula> args() const;
  const formula& arg(std::size_t i) const { return args()[i]; }
  std::size_t arity() const { return args().size(); }
  std::size_t hash() const;
  std::size_t depth() const;
  // Canonical printed form, e.g. or(p,neg(q)).
  const std::string& str() const;

  friend bool operator==(const formula& a, const formula& b);
  friend std::strong_ordering operator<=>(const formula& a, const formula& b);

 private:
  std::shared_ptr<const detail::formula_node> node_;
};

namespace detail {
struct formula_node {
  bool variable = true;
  std::string symbol;
  std::vector<formula> args;
  std::size_t hash = 0;
  std::size_t depth = 0;
  std::string text;
};

inline std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace detail

inline formula formula::var(std::string name) {
  auto n = std::make_shared<detail::formula_node>();
  n->variable = true;
  n->symbol = std::move(name);
  n->hash = detail::mix(0x51ed27, std::hash<std::string>{}(n->symbol));
  n->text = n->symbol;
  formula f;
  f.node_ = std::move(n);
  return f;
}

inline formula formula::make(std::string head, std::vector<formula> args) {
  auto n = std::make_shared<detail::formula_node>();
  n->variable = false;
  n->symbol = std::move(head);
  std::size_t h = detail::mix(0xc0ffee, std::hash<std::string>{}(n->symbol));
  std::size_t d = 0;
  std::string text = n->symbol;
  if (!args.empty()) {
    text += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!args[i].valid()) throw error("null argument to " + n->symbol);
      if (i) text += ',';
      text += args[i].str();
      h = detail::mix(h, args[i].hash());
      d = std::max(d, args[i].depth() + 1);
    }
    text += ')';
  }
  n->args = std::move(args);
  n->hash = h;
  n->depth = d;
  n->text = std::move(text);
  formula f;
  f.node_ = std::move(n);
  return f;
}

inline bool formula::is_var() const { return node_->variable; }
inline const std::string& formula::symbol() const { return node_->symbol; }
inline std::span<const formula> formula::args() const { return node_->args; }
inline std::size_t formula::hash() const { return node_->hash; }
inline std::size_t formula::depth() const { return node_->depth; }
inline const std::string& formula::str() const { return node_->text; }

inline bool operator==(const formula& a, const formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.is_var() != b.is_var() || a.symbol() != b.symbol() ||
      a.arity() != b.arity())
    return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(a.arg(i) == b.arg(i))) return false;
  return true;
}

inline std::strong_ordering operator<=>(const formula& a, const formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.str().compare(b.str()); c != 0)
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  // Same text: a variable and a 0-ary connective can share a name.
  if (a.is_var() != b.is_var())
    return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

struct formula_hash {
  std::size_t operator()(const formula& f) const { return f.hash(); }
};

using formula_set = std::set<formula>;
template <typename T>
using formula_map = std::unordered_map<formula, T, formula_hash>;

struct sequent {
  std::vector<formula> premises;
  formula conclusion;
};

struct rule {
  std::string name;
  std::vector<formula> premises;
  formula conclusion;
  bool is_axiom() const { return premises.empty(); }
};

// ---- parsing ---------------------------------------------------------------

inline bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

namespace detail {
class parser {
 public:
  parser(std::string_view text, const signature& sig) : s_(text), sig_(sig) {}

  formula run() {
    formula f = parse_formula();
    skip_ws();
    if (pos_ != s_.size()) throw parse_error("trailing input", pos_);
    return f;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
                                s_[pos_] == '\r'))
      ++pos_;
  }

  formula parse_formula() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ >= s_.size() || !is_ident_start(s_[pos_]))
      throw parse_error("expected identifier", pos_);
    while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      std::vector<formula> args;
      args.push_back(parse_formula());
      skip_ws();
      while (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        args.push_back(parse_formula());
        skip_ws();
      }
      if (pos_ >= s_.size() || s_[pos_] != ')') throw parse_error("expected ')'", pos_);
      ++pos_;
      if (!sig_.contains(name)) throw parse_error("unknown connective " + name, start);
      if (sig_.arity(name) != args.size())
        throw parse_error("arity mismatch for " + name + ": expected " +
                              std::to_string(sig_.arity(name)) + ", got " +
                              std::to_string(args.size()),
                          start);
      return formula::make(std::move(name), std::move(args));
    }
    if (sig_.contains(name) && sig_.arity(name) == 0) return formula::make(std::move(name));
    return formula::var(std::move(name));
  }

  std::string_view s_;
  const signature& sig_;
  std::size_t pos_ = 0;
};
}  // namespace detail

inline formula parse(std::string_view text, const signature& sig) {
  return detail::parser(text, sig).run();
}

inline std::string print(const formula& f) { return f.str(); }

// Splits on top-level ';' so several formulas fit one argument.
inline std::vector<formula> parse_list(std::string_view text, const signature& sig) {
  std::vector<formula> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ';') {
      auto piece = text.substr(start, i - start);
      if (piece.find_first_not_of(" \t\n") != std::string_view::npos)
        out.push_back(parse(piece, sig));
      start = i + 1;
    }
  }
  return out;
}

// ---- structural operations ----------------------------------------------------

namespace detail {
inline void collect_sub(const formula& f, formula_set& out) {
  if (!out.insert(f).second) return;
  for (const auto& a : f.args()) collect_sub(a, out);
}
inline void collect_vars(const formula& f, std::set<std::string>& out) {
  if (f.is_var()) {
    out.insert(f.symbol());
    return;
  }
  for (const auto& a : f.args()) collect_vars(a, out);
}
inline void collect_sig(const formula& f, signature& out) {
  if (f.is_var()) return;
  out.add(f.symbol(), f.arity());
  for (const auto& a : f.args()) collect_sig(a, out);
}
}  // namespace detail

inline std::vector<formula> subformulas(const formula& f) {
  formula_set s;
  detail::collect_sub(f, s);
  return {s.begin(), s.end()};
}

inline std::vector<formula> subformulas(std::span<const formula> fs) {
  formula_set s;
  for (const auto& f : fs) detail::collect_sub(f, s);
  return {s.begin(), s.end()};
}

inline std::vector<std::string> vars(const formula& f) {
  std::set<std::string> s;
  detail::collect_vars(f, s);
  return {s.begin(), s.end()};
}

inline std::vector<std::string> vars(std::span<const formula> fs) {
  std::set<std::string> s;
  for (const auto& f : fs) detail::collect_vars(f, s);
  return {s.begin(), s.end()};
}

inline signature signature_of(std::span<const formula> fs) {
  signature sig;
  for (const auto& f : fs) detail::collect_sig(f, sig);
  return sig;
}

inline bool over_signature(const formula& f, const signature& sig) {
  if (f.is_var()) return true;
  if (!sig.contains(f.symbol()) || sig.arity(f.symbol()) != f.arity()) return false;
  for (const auto& a : f.args())
    if (!over_signature(a, sig)) return false;
  return true;
}

using substitution = std::map<std::string, formula>;

inline formula apply_substitution(const substitution& s, const formula& f) {
  if (f.is_var()) {
    auto it = s.find(f.symbol());
    return it == s.end() ? f : it->second;
  }
  if (f.arity() == 0) return f;
  std::vector<formula> args;
  args.reserve(f.arity());
  bool changed = false;
  for (const auto& a : f.args()) {
    args.push_back(apply_substitution(s, a));
    changed = changed || !(args.back() == a);
  }
  return changed ? formula::make(f.symbol(), std::move(args)) : f;
}

// Maps p to (σ(p))^τ, so applying the result equals applying σ then τ.
inline substitution compose(const substitution& sigma, const substitution& tau) {
  substitution out;
  for (const auto& [v, f] : sigma) out.emplace(v, apply_substitution(tau, f));
  for (const auto& [v, f] : tau)
    if (!sigma.count(v)) out.emplace(v, f);
  return out;
}

inline std::string pvar(std::size_t i) { return "p" + std::to_string(i); }

// A homophonic translation: each source connective of arity k goes to a
// formula over p1..pk.
class translation {
 public:
  void set(const std::string& name, std::size_t arity, formula body) {
    std::set<std::string> allowed;
    for (std::size_t i = 1; i <= arity; ++i) allowed.insert(pvar(i));
    for (const auto& v : vars(body))
      if (!allowed.count(v))
        throw error("translation of " + name + " uses variable " + v + " outside p1..p" +
                    std::to_string(arity));
    source_.add(name, arity);
    body_[name] = std::move(body);
  }

  static translation identity(const signature& sig) {
    translation t;
    for (const auto& c : sig.connectives()) {
      std::vector<formula> args;
      for (std::size_t i = 1; i <= c.arity; ++i) args.push_back(formula::var(pvar(i)));
      t.set(c.name, c.arity, formula::make(c.name, std::move(args)));
    }
    return t;
  }

  // Union of translations with disjoint domains.
  static translation unite(const translation& a, const translation& b) {
    translation out = a;
    for (const auto& c : b.source_.connectives()) {
      if (out.source_.contains(c.name)) throw error("translations overlap on " + c.name);
      out.set(c.name, c.arity, b.body(c.name));
    }
    return out;
  }

  const signature& source() const { return source_; }
  bool covers(const std::string& name) const { return body_.count(name) != 0; }
  const formula& body(const std::string& name) const {
    auto it = body_.find(name);
    if (it == body_.end()) throw error("translation has no entry for " + name);
    return it->second;
  }

 private:
  signature source_;
  std::map<std::string, formula> body_;
};

inline formula apply_translation(const translation& t, const formula& f) {
  if (f.is_var()) return f;
  if (!t.covers(f.symbol())) throw error("translation has no entry for " + f.symbol());
  substitution s;
  for (std::size_t i = 0; i < f.arity(); ++i)
    s.emplace(pvar(i + 1), apply_translation(t, f.arg(i)));
  return apply_substitution(s, t.body(f.symbol()));
}

// ---- skeletons ---------------------------------------------------------------

// Brackets keep monolith names out of the identifier grammar, so they never
// collide with user variables.
inline formula skeleton_variable(const formula& f) { return formula::var("x[" + f.str() + "]"); }

inline bool is_skeleton_variable(const formula& f) {
  return f.is_var() && f.symbol().size() > 2 && f.symbol().compare(0, 2, "x[") == 0;
}

inline formula skeleton(const formula& f, const signature& sig) {
  if (f.is_var()) return f;
  if (!sig.contains(f.symbol())) return skeleton_variable(f);
  if (f.arity() == 0) return f;
  std::vector<formula> args;
  args.reserve(f.arity());
  for (const auto& a : f.args()) args.push_back(skeleton(a, sig));
  return formula::make(f.symbol(), std::move(args));
}

inline std::vector<formula> skeleton(std::span<const formula> fs, const signature& sig) {
  std::vector<formula> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(skeleton(f, sig));
  return out;
}

// Convenience builders used throughout.
inline formula var(const std::string& n) { return formula::var(n); }
inline formula app(const std::string& head, std::vector<formula> args = {}) {
  return formula::make(head, std::move(args));
}

// θ applied n times to f.
inline formula nest(const formula& theta, std::size_t n, const formula& f,
                    const std::string& hole = "p") {
  formula cur = f;
  for (std::size_t i = 0; i < n; ++i) cur = apply_substitution({{hole, cur}}, theta);
  return cur;
}

}  // namespace nmfib
