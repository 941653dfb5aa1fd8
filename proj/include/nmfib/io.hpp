#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "nmfib/boolfun.hpp"
#include "nmfib/calculus.hpp"
#include "nmfib/semantics.hpp"
#include "nmfib/syntax.hpp"

namespace nmfib::io {

using json = nlohmann::ordered_json;

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw error(path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw error("cannot write " + path);
  out << j.dump(2) << "\n";
}

inline signature signature_from_json(const json& j) {
  signature sig;
  if (!j.is_array()) throw error("signature must be an array");
  for (const auto& c : j) sig.add(c.at("name").get<std::string>(), c.at("arity").get<std::size_t>());
  return sig;
}

inline json to_json(const signature& sig) {
  json j = json::array();
  for (const auto& c : sig.connectives()) j.push_back({{"name", c.name}, {"arity", c.arity}});
  return j;
}

// ---- systems -------------------------------------------------------------------

inline nmatrix system_from_json(const json& j, nmatrix_options opt = {}) {
  try {
    signature sig = signature_from_json(j.at("signature"));
    auto values = j.at("values").get<std::vector<std::string>>();
    auto designated = j.at("designated").get<std::vector<std::string>>();
    std::map<std::string, value_index> idx;
    for (value_index i = 0; i < values.size(); ++i) idx[values[i]] = i;
    auto lookup = [&](const std::string& v) {
      auto it = idx.find(v);
      if (it == idx.end()) throw error("unknown value " + v);
      return it->second;
    };
    const json& table = j.at("interpretation");
    std::map<std::string, interpretation> interp;
    for (const auto& c : sig.connectives()) {
      if (!table.contains(c.name)) throw error("no interpretation for " + c.name);
      interpretation t{c.arity, std::vector<value_set>(nmatrix::table_size(values.size(), c.arity))};
      std::vector<bool> seen(t.cells.size(), false);
      for (const auto& cell : table.at(c.name)) {
        auto args = cell.at("args").get<std::vector<std::string>>();
        if (args.size() != c.arity) throw error("wrong number of arguments in a cell of " + c.name);
        std::size_t k = 0;
        for (const auto& a : args) k = k * values.size() + lookup(a);
        if (seen[k]) throw error("cell listed twice for " + c.name);
        seen[k] = true;
        value_set out;
        for (const auto& o : cell.at("out").get<std::vector<std::string>>()) out.push_back(lookup(o));
        if (out.empty()) throw error("empty cell for " + c.name);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        t.cells[k] = std::move(out);
      }
      for (bool s : seen)
        if (!s) throw error("missing cell for " + c.name);
      interp[c.name] = std::move(t);
    }
    for (auto it = table.begin(); it != table.end(); ++it)
      if (!sig.contains(it.key())) throw error("interpretation for undeclared connective " + it.key());
    return nmatrix(values, designated, std::move(interp), opt);
  } catch (const json::exception& e) {
    throw error(std::string("malformed system file: ") + e.what());
  }
}

inline json to_json(const nmatrix& m) {
  json j;
  j["signature"] = to_json(m.sig());
  j["values"] = m.values();
  json d = json::array();
  for (auto v : m.designated_values()) d.push_back(m.value(v));
  j["designated"] = d;
  json table = json::object();
  for (const auto& [name, t] : m.interpretations()) {
    json cells = json::array();
    std::vector<value_index> args(t.arity);
    for (std::size_t c = 0; c < t.cells.size(); ++c) {
      std::size_t rest = c;
      for (std::size_t i = t.arity; i-- > 0;) {
        args[i] = static_cast<value_index>(rest % m.size());
        rest /= m.size();
      }
      json a = json::array(), o = json::array();
      for (auto x : args) a.push_back(m.value(x));
      for (auto x : t.cells[c]) o.push_back(m.value(x));
      cells.push_back({{"args", a}, {"out", o}});
    }
    table[name] = cells;
  }
  j["interpretation"] = table;
  return j;
}

// ---- fragments -----------------------------------------------------------------

inline fragment fragment_from_json(const json& j) {
  try {
    fragment fr;
    for (const auto& c : j.at("connectives")) {
      auto name = c.at("name").get<std::string>();
      auto arity = c.at("arity").get<std::size_t>();
      fr.add(name, boolean_function::from_string(arity, c.at("table").get<std::string>()));
    }
    return fr;
  } catch (const json::exception& e) {
    throw error(std::string("malformed fragment file: ") + e.what());
  }
}

inline json to_json(const fragment& fr) {
  json cs = json::array();
  for (const auto& c : fr.connectives())
    cs.push_back({{"name", c.name}, {"arity", c.fn.arity()}, {"table", c.fn.str()}});
  return {{"connectives", cs}};
}

// ---- calculi -------------------------------------------------------------------

inline calculus calculus_from_json(const json& j) {
  try {
    signature sig = signature_from_json(j.at("signature"));
    std::vector<rule> rules;
    for (const auto& r : j.at("rules")) {
      std::vector<formula> prem;
      for (const auto& p : r.at("premises")) prem.push_back(parse(p.get<std::string>(), sig));
      rules.push_back({r.at("name").get<std::string>(), std::move(prem),
                       parse(r.at("conclusion").get<std::string>(), sig)});
    }
    return calculus(sig, std::move(rules));
  } catch (const json::exception& e) {
    throw error(std::string("malformed calculus file: ") + e.what());
  }
}

inline json to_json(const calculus& c) {
  json rules = json::array();
  for (const auto& r : c.rules()) {
    json prem = json::array();
    for (const auto& p : r.premises) prem.push_back(p.str());
    rules.push_back({{"name", r.name}, {"premises", prem}, {"conclusion", r.conclusion.str()}});
  }
  return {{"signature", to_json(c.sig())}, {"rules", rules}};
}

// "builtin:ID" or a path.
inline calculus load_calculus(const std::string& where) {
  if (where.rfind("builtin:", 0) == 0) return builtin_calculus(where.substr(8));
  return calculus_from_json(read_file(where));
}

// ---- translations --------------------------------------------------------------

// { "target":[sig], "map":{"coimp":{"arity":2,"body":"neg(imp(p2,p1))"}} }
inline translation translation_from_json(const json& j) {
  try {
    signature target = signature_from_json(j.at("target"));
    translation t;
    const json& map = j.at("map");
    for (auto it = map.begin(); it != map.end(); ++it)
      t.set(it.key(), it.value().at("arity").get<std::size_t>(),
            parse(it.value().at("body").get<std::string>(), target));
    return t;
  } catch (const json::exception& e) {
    throw error(std::string("malformed translation file: ") + e.what());
  }
}

// ---- verdict pieces --------------------------------------------------------------

inline json to_json(const partial_valuation& v, const nmatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < v.domain.size(); ++i)
    out.push_back({{"formula", v.domain[i].str()}, {"value", m.value(v.values[i])}});
  return out;
}

inline json to_json(const derivation& d) {
  json out = json::array();
  for (const auto& s : d.steps) {
    json step = {{"formula", s.f.str()}};
    if (s.premise) {
      step["justification"] = "premise";
    } else {
      json sg = json::object();
      for (const auto& [k, v] : s.sigma) sg[k] = v.str();
      step["justification"] = {{"rule", s.rule}, {"substitution", sg}, {"from", s.from}};
    }
    out.push_back(step);
  }
  return out;
}

}  // namespace nmfib::io
