#include <gtest/gtest.h>

#include <filesystem>

#include "nmfib/catalog.hpp"
#include "nmfib/io.hpp"

using namespace nmfib;
using namespace nmfib::io;
namespace fs = std::filesystem;

namespace {

std::vector<fs::path> files_in(const std::string& sub) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(fs::path(NMFIB_SYSTEMS_DIR) / sub))
    if (e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

json at(const std::string& rel) { return read_file((fs::path(NMFIB_SYSTEMS_DIR) / rel).string()); }

std::set<std::string> rule_texts(const calculus& c) {
  std::set<std::string> out;
  for (const auto& r : c.rules()) {
    std::string s = r.name + ":";
    for (const auto& p : r.premises) s += p.str() + ",";
    out.insert(s + "/" + r.conclusion.str());
  }
  return out;
}

fragment fr(std::initializer_list<std::string> names) { return standard_fragment(names); }

}  // namespace

TEST(Systems, EveryMatrixLoadsAndRoundTrips) {
  auto fsx = files_in("matrices");
  ASSERT_FALSE(fsx.empty());
  for (const auto& p : fsx) {
    SCOPED_TRACE(p.filename().string());
    nmatrix m = system_from_json(read_file(p.string()));
    EXPECT_EQ(system_from_json(to_json(m)), m);
  }
}

TEST(Systems, EveryFragmentLoadsAndRoundTrips) {
  for (const auto& p : files_in("fragments")) {
    SCOPED_TRACE(p.filename().string());
    fragment f = fragment_from_json(read_file(p.string()));
    EXPECT_FALSE(f.connectives().empty());
    EXPECT_EQ(to_json(fragment_from_json(to_json(f))), to_json(f));
  }
}

TEST(Systems, EveryCalculusLoadsAndIsClassicallySound) {
  for (const auto& p : files_in("calculi")) {
    SCOPED_TRACE(p.filename().string());
    calculus c = calculus_from_json(read_file(p.string()));
    EXPECT_EQ(rule_texts(calculus_from_json(to_json(c))), rule_texts(c));
    fragment f;
    for (const auto& x : c.sig().connectives()) f = fragment::unite(f, standard_fragment(x.name));
    auto two = classical_matrix(f);
    for (const auto& r : c.rules()) EXPECT_TRUE(entails(two, r.premises, r.conclusion).holds) << r.name;
  }
}

TEST(Systems, EveryTranslationLoads) {
  for (const auto& p : files_in("translations")) {
    SCOPED_TRACE(p.filename().string());
    EXPECT_NO_THROW(translation_from_json(read_file(p.string())));
  }
}

TEST(Systems, MatricesMatchTheBuilders) {
  EXPECT_EQ(system_from_json(at("matrices/two_and.json")), classical_matrix(fr({"and"})));
  EXPECT_EQ(system_from_json(at("matrices/two_coimp.json")), classical_matrix(fr({"coimp"})));
  EXPECT_EQ(system_from_json(at("matrices/m3_neg.json")), m3_negation("neg"));
  EXPECT_EQ(system_from_json(at("matrices/neg_bot_product.json")),
            *fibred_semantics(fr({"neg"}), fr({"bot"}), 2).matrix);
  EXPECT_EQ(system_from_json(at("matrices/coimp_bot_product.json")),
            *fibred_semantics(fr({"coimp"}), fr({"bot"}), 2).matrix);
  EXPECT_EQ(system_from_json(at("matrices/imp_bot_4.json")), truth_preserving_bot_matrix(fr({"imp"}), "bot"));
}

TEST(Systems, FragmentsAndCalculiMatchTheBuilders) {
  EXPECT_EQ(to_json(fragment_from_json(at("fragments/two_bots.json"))), to_json(fr({"bot1", "bot2"})));
  EXPECT_EQ(to_json(fragment_from_json(at("fragments/coimp.json"))), to_json(fr({"coimp"})));
  for (const auto& id : builtin_calculus_ids()) {
    auto p = fs::path(NMFIB_SYSTEMS_DIR) / "calculi" / (id + ".json");
    if (!fs::exists(p)) continue;
    EXPECT_EQ(rule_texts(calculus_from_json(read_file(p.string()))), rule_texts(builtin_calculus(id))) << id;
  }
}

TEST(Systems, TranslationFileGivesCoimplication) {
  auto t = translation_from_json(at("translations/coimp_via_neg_imp.json"));
  auto m = translate_matrix(classical_matrix(fr({"neg", "imp"})), t);
  EXPECT_EQ(m.interp("coimp").cells, (std::vector<value_set>{{0}, {1}, {0}, {0}}));
}

TEST(Io, MalformedInputs) {
  const std::string no_sig = R"j({"values":["0","1"]})j";
  const std::string bad_designated = R"j({"signature":[{"name":"c","arity":0}],"values":["0","1"],
      "designated":["2"],"interpretation":{"c":[{"args":[],"out":["1"]}]}})j";
  const std::string empty_cell = R"j({"signature":[{"name":"c","arity":0}],"values":["0","1"],
      "designated":["1"],"interpretation":{"c":[{"args":[],"out":[]}]}})j";
  const std::string short_table = R"j({"connectives":[{"name":"c","arity":1,"table":"011"}]})j";
  const std::string foreign_rule = R"j({"signature":[{"name":"neg","arity":1}],
      "rules":[{"name":"r","premises":["or(p,q)"],"conclusion":"p"}]})j";
  const std::string foreign_var = R"j({"target":[],"map":{"c":{"arity":1,"body":"p2"}}})j";
  EXPECT_THROW(system_from_json(json::parse(no_sig)), error);
  EXPECT_THROW(system_from_json(json::parse(bad_designated)), error);
  EXPECT_THROW(system_from_json(json::parse(empty_cell)), error);
  EXPECT_THROW(fragment_from_json(json::parse(short_table)), error);
  EXPECT_THROW(calculus_from_json(json::parse(foreign_rule)), error);
  EXPECT_THROW(translation_from_json(json::parse(foreign_var)), error);
  EXPECT_THROW(read_file("/nonexistent/file.json"), error);
  EXPECT_THROW(load_calculus("builtin:nope"), error);
}
