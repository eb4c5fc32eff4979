#include <gtest/gtest.h>

#include <random>
#include <set>
#include <unordered_set>

#include "unipotent_lab/errors.hpp"
#include "unipotent_lab/gln.hpp"

using namespace ulab;

namespace {

// Brute-force count: all q^{n^2} matrices, keep the nonsingular ones.
std::uint64_t count_invertible_brute(int n, const FieldPtr& f) {
  const auto nn = static_cast<std::size_t>(n);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < nn * nn; ++i) total *= f->order();
  std::uint64_t count = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    Matrix m(f, nn, nn);
    std::uint64_t c = code;
    for (auto& e : m.data()) {
      e = static_cast<Elem>(c % f->order());
      c /= f->order();
    }
    if (determinant(m) != 0) ++count;
  }
  return count;
}

}  // namespace

TEST(EnumerateGroup, Counts) {
  EXPECT_EQ(enumerate_group(2, make_field(2, 1)).size(), 6u);
  EXPECT_EQ(enumerate_group(2, make_field(3, 1)).size(), count_invertible_brute(2, make_field(3, 1)));
  EXPECT_EQ(enumerate_group(2, make_field(3, 1)).size(), 48u);
  EXPECT_EQ(enumerate_group(3, make_field(2, 1)).size(), count_invertible_brute(3, make_field(2, 1)));
  EXPECT_EQ(enumerate_group(3, make_field(2, 1)).size(), 168u);
}

TEST(EnumerateGroup, ClosedFormOrders) {
  for (auto [n, q] : std::vector<std::pair<int, std::uint32_t>>{{1, 5}, {2, 2}, {2, 4}, {2, 5}, {3, 2}, {3, 3}}) {
    std::uint32_t p = q == 4 ? 2 : q;
    std::uint32_t m = q == 4 ? 2 : 1;
    auto elems = enumerate_group(n, make_field(p, m));
    EXPECT_EQ(elems.size(), gl_order(n, q));
    std::set<std::vector<Elem>> distinct;
    for (auto& e : elems) {
      EXPECT_NE(determinant(e), 0u);
      distinct.insert(e.data());
    }
    EXPECT_EQ(distinct.size(), elems.size());
  }
}

TEST(EnumerateGroup, ScaleErrorNamesCardinality) {
  try {
    enumerate_group(4, make_field(3, 1));
    FAIL();
  } catch (const ScaleError& e) {
    EXPECT_EQ(e.cardinality(), gl_order(4, 3));
    EXPECT_NE(std::string(e.what()).find(std::to_string(gl_order(4, 3))), std::string::npos);
  }
}

TEST(StandardParabolics, Lists) {
  EXPECT_EQ(standard_parabolics(2), (std::vector<Composition>{{2}, {1, 1}}));
  EXPECT_EQ(standard_parabolics(3), (std::vector<Composition>{{3}, {2, 1}, {1, 2}, {1, 1, 1}}));
  EXPECT_EQ(standard_parabolics(4).size(), 8u);
}

TEST(StandardParabolic, OrdersAgreeWithEnumeration) {
  for (auto [n, p] : std::vector<std::pair<int, std::uint32_t>>{{2, 3}, {3, 2}, {2, 5}}) {
    GLGroup g(n, make_field(p, 1));
    for (const auto& c : standard_parabolics(n)) {
      StandardParabolic par(c);
      std::uint64_t members = 0, levi = 0;
      for (const auto& x : g.elements()) {
        if (par.contains(x)) ++members;
        if (par.in_levi(x)) ++levi;
      }
      EXPECT_EQ(members, par.order(p)) << par.name();
      EXPECT_EQ(levi, par.levi_order(p)) << par.name();
      // Borel is contained in every standard parabolic
      StandardParabolic borel(Composition(static_cast<std::size_t>(n), 1));
      for (const auto& x : g.elements())
        if (borel.contains(x)) EXPECT_TRUE(par.contains(x));
    }
  }
}

TEST(StandardParabolic, SimpleRootCoordsAreSuperdiagonalInBlocks) {
  StandardParabolic p({3, 1});
  EXPECT_EQ(p.simple_root_coords(), (std::vector<std::pair<int, int>>{{0, 1}, {1, 2}}));
  EXPECT_EQ(p.non_simple_root_coords(), (std::vector<std::pair<int, int>>{{0, 2}}));
  EXPECT_EQ(p.radical_dim(), 3);
}

TEST(CosetTransversal, Indices) {
  GLGroup g23(2, make_field(3, 1));
  EXPECT_EQ(coset_transversal(g23, StandardParabolic({1, 1})).index(), 4u);
  EXPECT_EQ(coset_transversal(g23, StandardParabolic({2})).index(), 1u);
  GLGroup g32(3, make_field(2, 1));
  EXPECT_EQ(coset_transversal(g32, StandardParabolic({1, 1, 1})).index(), 21u);
  EXPECT_EQ(coset_transversal(g32, StandardParabolic({2, 1})).index(), 7u);
  EXPECT_EQ(coset_transversal(g32, StandardParabolic({3})).index(), 1u);
}

TEST(CosetTransversal, RepTimesSubgroupIsBijection) {
  GLGroup g(3, make_field(2, 1));
  for (const auto& c : standard_parabolics(3)) {
    StandardParabolic par(c);
    auto table = coset_transversal(g, par);
    std::unordered_set<std::uint64_t> hit;
    std::uint64_t psize = 0;
    for (const auto& x : g.elements()) {
      if (!par.contains(x)) continue;
      ++psize;
      for (std::size_t i = 0; i < table.index(); ++i) hit.insert(g.key(table.rep(i) * x));
    }
    EXPECT_EQ(table.index() * psize, g.order());
    EXPECT_EQ(hit.size(), g.order());
    // locate agrees with membership: rep_i^{-1} x in P
    for (const auto& x : g.elements()) {
      auto i = table.locate(x);
      EXPECT_TRUE(par.contains(table.rep_inverse(i) * x));
    }
  }
}

TEST(CosetTransversal, UnipotentCosetsHaveCanonicalReps) {
  GLGroup g(2, make_field(3, 1));
  auto t = unipotent_transversal(g);
  EXPECT_EQ(t.index(), 48u / 3u);
  StandardParabolic borel({1, 1});
  for (const auto& x : g.elements()) {
    auto i = t.locate(x);
    Matrix h = t.rep_inverse(i) * x;
    EXPECT_TRUE(borel.contains(h));
    EXPECT_EQ(h(0, 0), 1u);
    EXPECT_EQ(h(1, 1), 1u);
  }
}

TEST(GLGroup, GeneratorsAndWords) {
  GLGroup g(3, make_field(2, 1));
  EXPECT_EQ(g.generators().size(), 2u);  // diag(z) is trivial over F_2
  EXPECT_TRUE(g.factor_into_generators(g.identity()).empty());
  const auto& t = g.generators().back();
  auto w = g.factor_into_generators(t);
  EXPECT_EQ(w.size(), 1u);
  EXPECT_EQ(g.evaluate(w), t);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const auto& x = g.element(rng() % g.order());
    auto word = g.factor_into_generators(x);
    EXPECT_EQ(g.evaluate(word), x);
    EXPECT_LE(word.size(), g.word_length_bound());
  }
}

TEST(GLGroup, BfsWordsEvaluate) {
  GLGroup g(2, make_field(5, 1));
  for (std::size_t i = 0; i < g.order(); i += 7) EXPECT_EQ(g.evaluate(g.bfs_word(i)), g.element(i));
}

TEST(BlockPermutation, ConjugatesLevis) {
  GLGroup g(3, make_field(2, 1));
  auto fq = g.field();
  Matrix w = block_permutation({2, 1}, {1, 2}, fq);
  Matrix winv = *inverse(w);
  StandardParabolic a({2, 1}), b({1, 2});
  for (const auto& x : g.elements()) {
    if (a.in_levi(x)) EXPECT_TRUE(b.in_levi(w * x * winv));
  }
}

TEST(BlockPermutation, AssociateParabolicsAreNotConjugate) {
  // P(2,1) and P(1,2) share a Levi up to conjugacy but are not conjugate themselves.
  GLGroup g(3, make_field(2, 1));
  StandardParabolic a({2, 1}), b({1, 2});
  std::vector<Matrix> pa;
  for (const auto& x : g.elements())
    if (a.contains(x)) pa.push_back(x);
  bool conjugate = false;
  for (const auto& y : g.elements()) {
    Matrix yinv = *inverse(y);
    bool all = true;
    for (const auto& x : pa) {
      if (!b.contains(y * x * yinv)) {
        all = false;
        break;
      }
    }
    conjugate = conjugate || all;
  }
  EXPECT_FALSE(conjugate);
}

TEST(DoubleCosets, BorelBorelIsWeylGroupOrder) {
  GLGroup g2(2, make_field(3, 1));
  StandardParabolic b2({1, 1});
  EXPECT_EQ(count_double_cosets(g2, b2, b2), 2u);
  GLGroup g3(3, make_field(2, 1));
  StandardParabolic b3({1, 1, 1}), p21({2, 1});
  EXPECT_EQ(count_double_cosets(g3, b3, b3), 6u);
  EXPECT_EQ(count_double_cosets(g3, b3, p21), 3u);
}
