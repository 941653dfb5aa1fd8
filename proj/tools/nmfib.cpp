#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nmfib/nmfib.hpp"

using namespace nmfib;
using json = io::json;

namespace {

struct outcome {
  int code = 0;
  std::string text;
  json data;
};

// "or/2,neg/1"
signature signature_from_list(const std::string& list) {
  signature sig;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto slash = item.find('/');
    if (slash == std::string::npos) throw error("signature item needs name/arity: " + item);
    sig.add(item.substr(0, slash), std::stoul(item.substr(slash + 1)));
  }
  return sig;
}

json valuation_json(const partial_valuation& v, const nmatrix& m) { return io::to_json(v, m); }

std::string valuation_text(const partial_valuation& v, const nmatrix& m) { return describe(v, m); }

json sequent_json(const sequent& s) {
  json prem = json::array();
  for (const auto& p : s.premises) prem.push_back(p.str());
  return {{"premises", prem}, {"conclusion", s.conclusion.str()}};
}

json chain_json(const component_chain& ch) {
  json out = json::array();
  for (const auto& s : ch.steps) {
    json step = {{"formula", s.f.str()}};
    if (s.component == -1)
      step["justification"] = "premise";
    else if (s.component == 2) {
      json sg = json::object();
      for (const auto& [k, v] : s.sigma) sg[k] = v.str();
      step["justification"] = {{"rule", s.rule}, {"substitution", sg}, {"from", s.from}};
    } else
      step["justification"] = {{"component", s.component + 1}, {"from", s.from}};
    out.push_back(step);
  }
  return out;
}

json witness_json(const witness& w) {
  return {{"sequent", sequent_json(w.s)},
          {"power", w.power},
          {"source", w.source},
          {"countermodel", valuation_json(w.countermodel, *w.product)}};
}

std::string witness_text(const witness& w) {
  return "witness: " + describe(w.s) + "\npower: " + std::to_string(w.power) +
         "\nsource: " + w.source + "\ncountermodel:\n" + valuation_text(w.countermodel, *w.product);
}

std::string classification_text(const boolean_function& f) {
  auto c = classify(f);
  std::vector<std::string> parts;
  if (c.top_like) parts.push_back("top-like");
  if (c.bottom_like) parts.push_back("bottom-like");
  if (c.projection_conjunction) {
    std::string j = "projection-conjunction J={";
    for (std::size_t i = 0; i < c.projection_conjunction->size(); ++i)
      j += (i ? "," : "") + std::to_string((*c.projection_conjunction)[i]);
    parts.push_back(j + "}");
  }
  if (c.very_significant) parts.push_back("very significant");
  if (c.truth_preserving) parts.push_back("truth-preserving");
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : "") + parts[i];
  return out.empty() ? "none" : out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for Nmatrices, Hilbert calculi and disjoint fibring of classical fragments"};
  app.require_subcommand(1);
  bool as_json = false;
  bool allow_degenerate = false;
  app.add_flag("--json", as_json, "structured output");
  app.add_flag("--allow-degenerate", allow_degenerate, "accept degenerate matrices");

  std::function<outcome()> action;

  // parse
  auto* c_parse = app.add_subcommand("parse", "parse and print a formula");
  std::string parse_text, sig_list, sig_system, sig_fragment;
  c_parse->add_option("formula", parse_text)->required();
  c_parse->add_option("--sig", sig_list, "connectives as name/arity,...");
  c_parse->add_option("--system", sig_system, "take the signature from a system file");
  c_parse->add_option("--fragment", sig_fragment, "take the signature from a fragment file");
  c_parse->callback([&] {
    action = [&] {
      signature sig;
      if (!sig_list.empty()) sig = signature_from_list(sig_list);
      if (!sig_system.empty())
        sig = signature::unite(sig, io::system_from_json(io::read_file(sig_system), {true}).sig());
      if (!sig_fragment.empty())
        sig = signature::unite(sig, io::fragment_from_json(io::read_file(sig_fragment)).sig());
      formula f = parse(parse_text, sig);
      outcome o;
      json subs = json::array(), vs = json::array();
      for (const auto& s : subformulas(f)) subs.push_back(s.str());
      for (const auto& v : vars(f)) vs.push_back(v);
      o.data = {{"formula", f.str()}, {"depth", f.depth()}, {"variables", vs}, {"subformulas", subs}};
      o.text = f.str() + "\ndepth: " + std::to_string(f.depth()) + "\nsubformulas: " +
               std::to_string(subs.size()) + "\n";
      return o;
    };
  });

  // classify
  auto* c_classify = app.add_subcommand("classify", "classify a Boolean function");
  std::size_t cls_arity = 0;
  std::string cls_table;
  c_classify->add_option("--arity", cls_arity)->required();
  c_classify->add_option("--table", cls_table, "big-endian truth table bits")->required();
  c_classify->callback([&] {
    action = [&] {
      auto f = boolean_function::from_string(cls_arity, cls_table);
      auto c = classify(f);
      auto p = post_predicates(f);
      outcome o;
      std::vector<std::string> post;
      if (p.preserves0) post.push_back("P0");
      if (p.preserves1) post.push_back("P1");
      if (p.affine) post.push_back("A");
      if (p.monotone) post.push_back("M");
      if (p.self_dual) post.push_back("D");
      std::string post_line;
      for (std::size_t i = 0; i < post.size(); ++i) post_line += (i ? " " : "") + post[i];
      o.text = classification_text(f) + "\npost: " + (post_line.empty() ? "none" : post_line) + "\n";
      json pc = c.projection_conjunction ? json(*c.projection_conjunction) : json(nullptr);
      o.data = {{"table", f.str()},
                {"top_like", c.top_like},
                {"bottom_like", c.bottom_like},
                {"projective_indices", c.projective_indices},
                {"projection_conjunction", pc},
                {"significant", c.significant},
                {"very_significant", c.very_significant},
                {"truth_preserving", c.truth_preserving},
                {"post", post}};
      return o;
    };
  });

  // clone
  auto* c_clone = app.add_subcommand("clone", "clone analysis of a fragment");
  std::string clone_frag, clone_target;
  std::size_t clone_arity = 0;
  c_clone->add_option("fragment", clone_frag)->required();
  c_clone->add_option("--arity", clone_arity, "also report the closure size at this arity");
  c_clone->add_option("--target", clone_target, "bits of a function to test for membership");
  c_clone->callback([&] {
    action = [&] {
      auto fr = io::fragment_from_json(io::read_file(clone_frag));
      auto fc = functionally_complete(fr);
      outcome o;
      o.data = {{"complete", fc.complete}, {"missing", fc.complete ? json(nullptr) : json(fc.witness)}};
      o.text = fc.complete ? "COMPLETE\n" : "INCOMPLETE (" + fc.witness + ")\n";
      if (clone_arity > 0) {
        clone_closure cl(generators_of(fr), clone_arity);
        o.data["arity"] = clone_arity;
        o.data["size"] = cl.functions().size();
        o.text += "arity " + std::to_string(clone_arity) + ": " + std::to_string(cl.functions().size()) +
                  " functions\n";
      }
      if (!clone_target.empty()) {
        std::size_t k = 0;
        while ((std::size_t{1} << k) < clone_target.size()) ++k;
        auto g = boolean_function::from_string(k, clone_target);
        auto in = clone_contains(generators_of(fr), g);
        if (!in) {
          o.code = 2;
          o.text += "membership: OUT OF BOUND\n";
          o.data["member"] = nullptr;
        } else {
          o.data["member"] = *in;
          o.text += std::string("membership: ") + (*in ? "YES" : "NO") + "\n";
          if (*in) {
            if (auto e = find_expression(fr, g)) {
              o.data["expression"] = e->str();
              o.text += "expression: " + e->str() + "\n";
            }
          }
        }
      }
      return o;
    };
  });

  // entail
  auto* c_entail = app.add_subcommand("entail", "entailment in a system");
  std::string ent_system, ent_premises, ent_conclusion;
  c_entail->add_option("--system", ent_system)->required();
  c_entail->add_option("--premises", ent_premises, "';'-separated formulas");
  c_entail->add_option("--conclusion", ent_conclusion)->required();
  c_entail->callback([&] {
    action = [&] {
      auto m = io::system_from_json(io::read_file(ent_system), {allow_degenerate});
      auto gamma = parse_list(ent_premises, m.sig());
      auto phi = parse(ent_conclusion, m.sig());
      auto r = entails(m, gamma, phi);
      outcome o;
      o.data = {{"holds", r.holds}};
      o.text = r.holds ? "HOLDS\n" : "FAILS\n";
      if (!r.holds) {
        o.data["countermodel"] = valuation_json(*r.countermodel, m);
        o.text += valuation_text(*r.countermodel, m);
      }
      return o;
    };
  });

  // product
  auto* c_product = app.add_subcommand("product", "strict product of two systems");
  std::string prod_a, prod_b, out_path;
  c_product->add_option("first", prod_a)->required();
  c_product->add_option("second", prod_b)->required();
  c_product->add_option("-o,--output", out_path);
  c_product->callback([&] {
    action = [&] {
      auto a = io::system_from_json(io::read_file(prod_a), {allow_degenerate});
      auto b = io::system_from_json(io::read_file(prod_b), {allow_degenerate});
      outcome o;
      o.data = io::to_json(strict_product(a, b));
      return o;
    };
  });

  // power
  auto* c_power = app.add_subcommand("power", "n-th power of a system");
  std::string pow_sys;
  std::size_t pow_n = 2;
  c_power->add_option("system", pow_sys)->required();
  c_power->add_option("--n", pow_n);
  c_power->add_option("-o,--output", out_path);
  c_power->callback([&] {
    action = [&] {
      auto m = io::system_from_json(io::read_file(pow_sys), {allow_degenerate});
      outcome o;
      o.data = io::to_json(power(m, pow_n));
      return o;
    };
  });

  // translate
  auto* c_translate = app.add_subcommand("translate", "matrix induced by a translation");
  std::string tr_sys, tr_file;
  c_translate->add_option("system", tr_sys)->required();
  c_translate->add_option("--translation", tr_file)->required();
  c_translate->add_option("-o,--output", out_path);
  c_translate->callback([&] {
    action = [&] {
      auto m = io::system_from_json(io::read_file(tr_sys), {allow_degenerate});
      auto t = io::translation_from_json(io::read_file(tr_file));
      outcome o;
      o.data = io::to_json(translate_matrix(m, t));
      return o;
    };
  });

  // derive
  auto* c_derive = app.add_subcommand("derive", "bounded forward derivation in a calculus");
  std::string der_calc, der_premises, der_goal;
  derive_bounds der_bounds;
  c_derive->add_option("--calculus", der_calc, "file or builtin:ID")->required();
  c_derive->add_option("--premises", der_premises);
  c_derive->add_option("--goal", der_goal)->required();
  c_derive->add_option("--universe-depth", der_bounds.universe_depth);
  c_derive->add_option("--steps", der_bounds.step_cap);
  c_derive->callback([&] {
    action = [&] {
      auto c = io::load_calculus(der_calc);
      auto gamma = parse_list(der_premises, c.sig());
      auto goal = parse(der_goal, c.sig());
      auto r = derive(c, gamma, goal, der_bounds);
      outcome o;
      const char* status = r.status == derive_status::derived             ? "derived"
                           : r.status == derive_status::universe_saturated ? "universe_saturated"
                                                                           : "cap_exhausted";
      o.data = {{"status", status},
                {"formulas_derived", r.formulas_derived},
                {"bounds", {{"universe_depth", r.bounds.universe_depth}, {"steps", r.bounds.step_cap}}}};
      if (r.proof) {
        o.data["derivation"] = io::to_json(*r.proof);
        o.text = "DERIVED\n" + describe(*r.proof);
      } else {
        o.code = 2;
        o.text = std::string("NOT FOUND (") + status + ") at universe depth " +
                 std::to_string(r.bounds.universe_depth) + ", step cap " +
                 std::to_string(r.bounds.step_cap) + ", " + std::to_string(r.formulas_derived) +
                 " formulas derived\n";
      }
      return o;
    };
  });

  // decide-recovery
  auto* c_rec = app.add_subcommand("decide-recovery", "does fibring recover the joint classical fragment");
  std::string f1_path, f2_path;
  witness_options wopt;
  c_rec->add_option("frag1", f1_path)->required();
  c_rec->add_option("frag2", f2_path)->required();
  c_rec->add_option("--power", wopt.power);
  c_rec->add_option("--depth", wopt.search_depth);
  c_rec->callback([&] {
    action = [&] {
      auto f1 = io::fragment_from_json(io::read_file(f1_path));
      auto f2 = io::fragment_from_json(io::read_file(f2_path));
      auto v = decide_recovery(f1, f2, wopt);
      outcome o;
      if (v.kind == recovery_kind::classical) {
        o.data = {{"outcome", "classical"}, {"condition", std::string(1, v.condition)}};
        o.text = std::string("CLASSICAL (condition ") + v.condition + ")\n";
      } else {
        o.data = {{"outcome", "subclassical"}};
        o.text = "SUBCLASSICAL\n";
        if (v.w) {
          o.data["witness"] = witness_json(*v.w);
          o.text += witness_text(*v.w);
        } else {
          o.code = 2;
          o.data["witness"] = nullptr;
          o.data["note"] = v.note;
          o.text += v.note + "\n";
        }
      }
      return o;
    };
  });

  // witness
  auto* c_wit = app.add_subcommand("witness", "sequent separating the fibring from classical logic");
  c_wit->add_option("frag1", f1_path)->required();
  c_wit->add_option("frag2", f2_path)->required();
  c_wit->add_option("--power", wopt.power);
  c_wit->add_option("--depth", wopt.search_depth);
  c_wit->callback([&] {
    action = [&] {
      auto f1 = io::fragment_from_json(io::read_file(f1_path));
      auto f2 = io::fragment_from_json(io::read_file(f2_path));
      auto w = subclassical_witness(f1, f2, wopt);
      outcome o;
      if (w) {
        o.data = witness_json(*w);
        o.text = witness_text(*w);
      } else {
        o.code = 2;
        o.data = {{"witness", nullptr}};
        o.text = "NO WITNESS at power " + std::to_string(wopt.max_power) + ", depth " +
                 std::to_string(wopt.search_depth) + "\n";
      }
      return o;
    };
  });

  // certify
  auto* c_cert = app.add_subcommand("certify", "derivation or countermodel for a mixed sequent");
  std::string cert_rules, cert_premises, cert_goal;
  certify_options copt;
  c_cert->add_option("--frag1", f1_path)->required();
  c_cert->add_option("--frag2", f2_path)->required();
  c_cert->add_option("--rules", cert_rules, "extra rules: calculus file or builtin:ID");
  c_cert->add_option("--premises", cert_premises);
  c_cert->add_option("--goal", cert_goal)->required();
  c_cert->add_option("--power", copt.power);
  c_cert->add_option("--universe-depth", copt.bounds.universe_depth);
  c_cert->add_option("--steps", copt.bounds.step_cap);
  c_cert->callback([&] {
    action = [&] {
      auto f1 = io::fragment_from_json(io::read_file(f1_path));
      auto f2 = io::fragment_from_json(io::read_file(f2_path));
      signature sig = signature::unite(f1.sig(), f2.sig());
      std::vector<rule> extra;
      if (!cert_rules.empty()) extra = io::load_calculus(cert_rules).rules();
      auto gamma = parse_list(cert_premises, sig);
      auto goal = parse(cert_goal, sig);
      auto c = certify_entailment(f1, f2, extra, gamma, goal, copt);
      outcome o;
      if (c.kind == certificate_kind::yes) {
        o.data = {{"outcome", "yes"}};
        o.text = "YES\n";
        if (c.proof) {
          o.data["derivation"] = io::to_json(*c.proof);
          o.text += describe(*c.proof);
        } else {
          o.data["chain"] = chain_json(*c.chain);
          o.text += describe(*c.chain, f1, f2);
        }
      } else if (c.kind == certificate_kind::no) {
        o.data = {{"outcome", "no"}, {"power", c.power}, {"countermodel", valuation_json(*c.countermodel, *c.product)}};
        o.text = "NO at power " + std::to_string(c.power) + "\n" + valuation_text(*c.countermodel, *c.product);
      } else {
        o.code = 2;
        o.data = {{"outcome", "unknown"},
                  {"bounds", {{"universe_depth", c.bounds.universe_depth}, {"steps", c.bounds.step_cap}}},
                  {"power", copt.power}};
        o.text = "UNKNOWN at universe depth " + std::to_string(c.bounds.universe_depth) + ", step cap " +
                 std::to_string(c.bounds.step_cap) + ", power " + std::to_string(copt.power) + "\n";
      }
      return o;
    };
  });

  // fc-recovery
  auto* c_fc = app.add_subcommand("fc-recovery", "is functional completeness recovered");
  std::size_t n_max = 2;
  c_fc->add_option("frag1", f1_path)->required();
  c_fc->add_option("frag2", f2_path)->required();
  c_fc->add_option("--nmax", n_max);
  c_fc->callback([&] {
    action = [&] {
      auto f1 = io::fragment_from_json(io::read_file(f1_path));
      auto f2 = io::fragment_from_json(io::read_file(f2_path));
      auto v = decide_fc_recovery(f1, f2, n_max);
      outcome o;
      if (v.outcome == fc_outcome::recovered) {
        o.data = {{"outcome", "recovered"}, {"clone", v.clone}, {"up1_side", v.up1_side}};
        o.text = "RECOVERED (" + v.clone + " with UP1 on side " + std::to_string(v.up1_side) + ")\n";
      } else if (v.outcome == fc_outcome::not_recovered) {
        o.data = {{"outcome", "not_recovered"}};
        o.text = "NOT RECOVERED\n";
      } else {
        o.code = 2;
        o.data = {{"outcome", "out_of_bound"}, {"note", v.note}};
        o.text = "OUT OF BOUND (" + v.note + ")\n";
      }
      return o;
    };
  });

  // kdet
  auto* c_kdet = app.add_subcommand("kdet", "k-determinedness probe");
  std::size_t kdet_k = 1, kdet_n = 3;
  c_kdet->add_option("frag1", f1_path)->required();
  c_kdet->add_option("frag2", f2_path)->required();
  c_kdet->add_option("--k", kdet_k);
  c_kdet->add_option("--n", kdet_n);
  c_kdet->callback([&] {
    action = [&] {
      auto f1 = io::fragment_from_json(io::read_file(f1_path));
      auto f2 = io::fragment_from_json(io::read_file(f2_path));
      auto r = k_determinedness_probe(f1, f2, kdet_k, kdet_n);
      outcome o;
      if (r.violation) {
        o.data = {{"outcome", "violation"},
                  {"family", r.family},
                  {"sequent", sequent_json(r.s)},
                  {"power", r.power},
                  {"countermodel", valuation_json(*r.countermodel, *r.product)},
                  {"instances", r.instances.size()}};
        o.text = "VIOLATION (" + r.family + ")\n" + describe(r.s) + "\nrefuted at power " +
                 std::to_string(r.power) + "\n" + valuation_text(*r.countermodel, *r.product) +
                 std::to_string(r.instances.size()) + " substitution instances certified\n";
      } else {
        o.data = {{"outcome", "none_found"}, {"note", r.note}};
        o.text = "NONE FOUND (" + r.note + ")\n";
      }
      return o;
    };
  });

  // reproduce
  auto* c_rep = app.add_subcommand("reproduce", "run a catalog example");
  std::string rep_id;
  c_rep->add_option("id", rep_id, "catalog id or 'all'")->required();
  c_rep->callback([&] {
    action = [&] {
      std::vector<std::string> ids = rep_id == "all" ? catalog_ids() : std::vector<std::string>{rep_id};
      outcome o;
      o.data = json::array();
      for (const auto& id : ids) {
        auto r = reproduce(id);
        json checks = json::array();
        for (const auto& c : r.checks)
          checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        o.data.push_back({{"id", r.id}, {"passed", r.passed()}, {"checks", checks}});
        o.text += describe(r);
        if (!r.passed()) o.code = 1;
      }
      return o;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    outcome o = action();
    const bool emits_system = o.text.empty();
    if (emits_system && !out_path.empty()) {
      io::write_file(out_path, o.data);
    } else if (as_json || emits_system) {
      std::cout << o.data.dump(2) << "\n";
    } else {
      std::cout << o.text;
    }
    return o.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
