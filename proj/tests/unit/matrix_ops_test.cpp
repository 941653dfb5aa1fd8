#include <gtest/gtest.h>

#include <random>

#include "nmfib/catalog.hpp"
#include "nmfib/matrix_ops.hpp"

using namespace nmfib;

namespace {

std::set<std::string> names(const nmatrix& m, const value_set& s) {
  std::set<std::string> out;
  for (auto v : s) out.insert(m.value(v));
  return out;
}

partial_valuation from_map(const std::map<formula, value_index>& m) {
  partial_valuation v;
  for (const auto& [f, x] : m) {
    v.domain.push_back(f);
    v.values.push_back(x);
  }
  return v;
}

}  // namespace

TEST(Power, Examples) {
  auto n2 = power(classical_matrix(standard_fragment("neg")), 2);
  value_index a[] = {n2.index_of("(0,1)")};
  EXPECT_EQ(names(n2, n2.cell("neg", a)), std::set<std::string>{"(1,0)"});
  auto c2 = power(classical_matrix(standard_fragment("and")), 2);
  EXPECT_EQ(c2.size(), 4u);
  ASSERT_EQ(c2.designated_values().size(), 1u);
  EXPECT_EQ(c2.value(c2.designated_values()[0]), "(1,1)");
  EXPECT_TRUE(c2.deterministic());
  EXPECT_THROW(power(c2, 0), error);
}

TEST(Power, SameLogicAsBase) {
  nmatrix two = classical_matrix(standard_fragment("or"));
  auto sq = power(two, 2);
  std::mt19937 rng(20);
  for (int i = 0; i < 20; ++i) {
    auto s = random_sequent(two.sig(), {"p", "q", "r"}, 3, rng);
    EXPECT_EQ(entails(two, s.premises, s.conclusion).holds, entails(sq, s.premises, s.conclusion).holds);
  }
}

TEST(Power, FirstPowerIsIsomorphic) {
  nmatrix m3 = m3_negation("neg");
  auto p1 = power(m3, 1);
  EXPECT_TRUE(isomorphic_by(m3, p1, {0, 1, 2}));
  EXPECT_EQ(p1.value(1), "(1/2)");
}

TEST(Power, NondeterministicCellsMultiply) {
  nmatrix un = canonical_matrix(canonical_kind::unrestrained, "c", 1);
  auto sq = power(un, 2);
  value_index a[] = {0};
  EXPECT_EQ(sq.cell("c", a).size(), 4u);
}

TEST(Power, SizeCap) {
  nmatrix m3 = m3_negation("neg");
  EXPECT_THROW(power(m3, 9), error);  // 3^9 > 10000
}

TEST(Product, Examples) {
  auto m = strict_product(m3_negation("neg"), m3_negation("sim"));
  ASSERT_EQ(m.size(), 5u);
  value_index t[] = {m.index_of("(1,1)")};
  EXPECT_EQ(names(m, m.cell("neg", t)), (std::set<std::string>{"(0,0)", "(0,1/2)"}));

  auto nb = strict_product(m3_negation("neg"), classical_matrix(standard_fragment("bot")));
  EXPECT_EQ(std::set<std::string>(nb.values().begin(), nb.values().end()),
            (std::set<std::string>{"(0,0)", "(1/2,0)", "(1,1)"}));
  EXPECT_EQ(names(nb, nb.cell("bot", {})), (std::set<std::string>{"(0,0)", "(1/2,0)"}));
}

TEST(Product, DesignationLaw) {
  auto a = power(classical_matrix(standard_fragment("or")), 2);
  auto b = m3_negation("neg");
  auto m = strict_product(a, b);
  for (value_index v = 0; v < m.size(); ++v) {
    // Names are (x,y) with x itself a tuple.
    const std::string& id = m.value(v);
    bool da = id.rfind("((1,1),", 0) == 0;
    bool db = id.size() >= 3 && id.compare(id.size() - 3, 3, ",1)") == 0;
    EXPECT_EQ(m.designated(v), da && db) << id;
    EXPECT_EQ(da, db) << id;
  }
}

TEST(Product, RejectsBadInputs) {
  auto a = classical_matrix(standard_fragment("or"));
  EXPECT_THROW(strict_product(a, a), error);
  nmatrix deg({"0"}, std::vector<std::string>{"0"}, {}, nmatrix_options{true});
  EXPECT_THROW(strict_product(a, deg), error);
}

TEST(Product, CommutativeUpToSwap) {
  auto a = power(classical_matrix(standard_fragment("neg")), 2);
  auto b = classical_matrix(standard_fragment("bot"));
  auto ab = strict_product(a, b), ba = strict_product(b, a);
  product_layout la(a, b), lb(b, a);
  std::vector<value_index> map(ab.size());
  for (value_index v = 0; v < ab.size(); ++v) {
    auto [x, y] = la.pair(v);
    map[v] = *lb.index(y, x);
  }
  EXPECT_TRUE(isomorphic_by(ab, ba, map));
}

TEST(Product, ComponentConservativity) {
  nmatrix m1 = power(classical_matrix(standard_fragment("or")), 2);
  nmatrix m2 = m3_negation("neg");
  auto m = strict_product(m1, m2);
  std::mt19937 rng(55);
  for (int i = 0; i < 60; ++i) {
    auto s1 = random_sequent(m1.sig(), {"p", "q", "r"}, 3, rng);
    if (entails(m1, s1.premises, s1.conclusion).holds)
      EXPECT_TRUE(entails(m, s1.premises, s1.conclusion).holds) << describe(s1);
    auto s2 = random_sequent(m2.sig(), {"p", "q"}, 3, rng);
    if (entails(m2, s2.premises, s2.conclusion).holds)
      EXPECT_TRUE(entails(m, s2.premises, s2.conclusion).holds) << describe(s2);
  }
}

TEST(Translate, CoimplicationTable) {
  auto base = classical_matrix(standard_fragment({"imp", "and", "neg"}));
  translation t;
  t.set("coimp", 2, parse("neg(imp(p2,p1))", base.sig()));
  auto m = translate_matrix(base, t);
  EXPECT_EQ(m.interp("coimp").cells, (std::vector<value_set>{{0}, {1}, {0}, {0}}));
  auto id = translate_matrix(base, translation::identity(base.sig()));
  EXPECT_EQ(id, base);
}

TEST(Translate, MajorityFromThresholdScheme) {
  auto base = classical_matrix(standard_fragment({"and", "or"}));
  translation t;
  t.set("t32", 3, parse("or(and(p1,or(p2,p3)),and(p2,p3))", base.sig()));
  auto m = translate_matrix(base, t);
  for (std::size_t r = 0; r < 8; ++r)
    EXPECT_EQ(m.interp("t32").cells[r], value_set{value_index(std::popcount(r) >= 2)});
}

TEST(Translate, CommutesWithPower) {
  auto base = classical_matrix(standard_fragment({"imp", "neg"}));
  translation t;
  t.set("coimp", 2, parse("neg(imp(p2,p1))", base.sig()));
  t.set("or", 2, parse("imp(imp(p1,p2),p2)", base.sig()));
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_EQ(power(translate_matrix(base, t), n), translate_matrix(power(base, n), t));
  auto m3 = m3_negation("neg");
  translation u;
  u.set("nn", 1, parse("neg(neg(p1))", m3.sig()));
  EXPECT_EQ(power(translate_matrix(m3, u), 2), translate_matrix(power(m3, 2), u));
}

TEST(Translate, RefusesNondeterministicMatrices) {
  auto m = strict_product(m3_negation("neg"), m3_negation("sim"));
  translation t;
  t.set("x", 1, parse("neg(p1)", m.sig()));
  EXPECT_THROW(translate_matrix(m, t), error);
}

TEST(Translate, TransferAlongTranslations) {
  // coimp over {neg, imp}; bot untouched.
  auto a = power(classical_matrix(standard_fragment({"imp", "neg"})), 2);
  auto b = classical_matrix(standard_fragment("bot"));
  translation t;
  t.set("coimp", 2, parse("neg(imp(p2,p1))", a.sig()));
  auto left = strict_product(translate_matrix(a, t), b);
  auto right = strict_product(a, b);
  translation whole = translation::unite(t, translation::identity(b.sig()));
  std::mt19937 rng(66);
  int held = 0;
  for (int i = 0; i < 80; ++i) {
    auto s = random_sequent(left.sig(), {"p", "q"}, 2, rng);
    if (!entails(left, s.premises, s.conclusion).holds) continue;
    ++held;
    std::vector<formula> g;
    for (const auto& f : s.premises) g.push_back(apply_translation(whole, f));
    EXPECT_TRUE(entails(right, g, apply_translation(whole, s.conclusion)).holds) << describe(s);
  }
  EXPECT_GT(held, 0);
}

TEST(Merge, CompatibleAndIncompatible) {
  auto m1 = classical_matrix(standard_fragment("or"));
  auto m2 = classical_matrix(standard_fragment("neg"));
  auto prod = strict_product(m1, m2);
  auto p = var("p"), q = var("q");
  auto v1 = from_map({{p, 1}, {q, 1}});
  auto v2 = from_map({{p, 1}, {q, 1}});
  formula g[] = {p, q};
  auto v = merge_valuations(m1, v1, m2, v2, g, prod);
  EXPECT_EQ(prod.value(v.get(p)), "(1,1)");
  auto bad = from_map({{p, 0}, {q, 1}});
  EXPECT_THROW(merge_valuations(m1, v1, m2, bad, g, prod), error);
}

TEST(Merge, ProjectionsMergeBack) {
  auto m1 = power(classical_matrix(standard_fragment("or")), 2);
  auto m2 = m3_negation("neg");
  auto prod = strict_product(m1, m2);
  product_layout lay(m1, m2);
  const signature s1 = m1.sig(), s2 = m2.sig();
  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    auto f = random_formula(prod.sig(), {"p", "q"}, 3, rng);
    auto dom = subformulas(f);
    for (const auto& v : enumerate_partial_valuations(prod, dom)) {
      std::map<formula, value_index> a, b;
      for (std::size_t k = 0; k < v.domain.size(); ++k) {
        a[skeleton(v.domain[k], s1)] = lay.pair(v.values[k]).first;
        b[skeleton(v.domain[k], s2)] = lay.pair(v.values[k]).second;
      }
      EXPECT_EQ(merge_valuations(m1, from_map(a), m2, from_map(b), dom, prod), v);
      break;
    }
  }
}

TEST(Canonical, Examples) {
  auto top = canonical_matrix(canonical_kind::top, "c", 2);
  for (const auto& c : top.interp("c").cells) EXPECT_EQ(c, value_set{1});
  auto bot = canonical_matrix(canonical_kind::bottom, "bot", 0);
  EXPECT_EQ(bot.cell("bot", {}), value_set{0});
  auto un = canonical_matrix(canonical_kind::unrestrained, "c", 1);
  for (const auto& c : un.interp("c").cells) EXPECT_EQ(c, (value_set{0, 1}));
}
