#include <gtest/gtest.h>

#include <algorithm>

#include "unipotent_lab/errors.hpp"
#include "unipotent_lab/labeling.hpp"

using namespace ulab;

namespace {

// Partition numbers by the coin-change recurrence over part sizes.
std::size_t partition_number(int n) {
  std::vector<std::size_t> ways(static_cast<std::size_t>(n) + 1, 0);
  ways[0] = 1;
  for (int part = 1; part <= n; ++part)
    for (int s = part; s <= n; ++s) ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - part)];
  return ways[static_cast<std::size_t>(n)];
}

bool respects_dominance(const std::vector<Partition>& order) {
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      if (dominance_leq(order[i], order[j])) return false;  // a later entry strictly dominates
  return true;
}

DecompositionMatrix run_point(int n, std::uint32_t q, std::uint32_t l, std::uint64_t seed,
                              SimpleCatalog* out_catalog = nullptr, Labeling* out_lab = nullptr) {
  GLGroup g(n, make_field(q, 1));
  auto coeffs = coefficient_field_for(q, l).field;
  SimpleCatalog cat(g.generators().size());
  auto lab = label_simples(g, coeffs, cat, seed);
  auto d = decomposition_matrix(lab, cat, n, q, l);
  if (out_catalog) *out_catalog = cat;
  if (out_lab) *out_lab = lab;
  return d;
}

}  // namespace

TEST(Partitions, Counts) {
  EXPECT_EQ(partitions(4).size(), 5u);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(partitions(n).size(), partition_number(n));
  for (const auto& p : partitions(7)) {
    EXPECT_TRUE(std::is_sorted(p.begin(), p.end(), std::greater<>()));
    int s = 0;
    for (int x : p) s += x;
    EXPECT_EQ(s, 7);
  }
}

TEST(Dominance, Examples) {
  EXPECT_TRUE(dominance_leq({2, 2}, {3, 1}));
  EXPECT_FALSE(dominance_leq({3, 3}, {4, 1, 1}));
  EXPECT_FALSE(dominance_leq({4, 1, 1}, {3, 3}));
  EXPECT_TRUE(dominance_leq({1, 1, 1}, {3}));
}

TEST(Dominance, IsPartialOrder) {
  auto ps = partitions(6);
  for (const auto& a : ps) {
    EXPECT_TRUE(dominance_leq(a, a));
    for (const auto& b : ps) {
      if (a != b && dominance_leq(a, b)) EXPECT_FALSE(dominance_leq(b, a));
      for (const auto& c : ps)
        if (dominance_leq(a, b) && dominance_leq(b, c)) EXPECT_TRUE(dominance_leq(a, c));
    }
  }
}

TEST(LinearExtension, CompatibleWithDominance) {
  EXPECT_EQ(linear_extension(3), (std::vector<Partition>{{3}, {2, 1}, {1, 1, 1}}));
  for (int n = 1; n <= 8; ++n) {
    EXPECT_TRUE(respects_dominance(linear_extension(n)));
    EXPECT_TRUE(respects_dominance(alternate_linear_extension(n)));
    EXPECT_EQ(alternate_linear_extension(n).size(), partitions(n).size());
  }
  EXPECT_NE(linear_extension(6), alternate_linear_extension(6));
}

TEST(LabelSimples, TopPartitionIsTrivial) {
  SimpleCatalog cat(0);
  Labeling lab;
  run_point(2, 3, 2, 1, &cat, &lab);
  const auto& triv = cat.module(lab.label.at({2}));
  EXPECT_EQ(triv.dim(), 1u);
  for (const auto& a : triv.generators()) EXPECT_TRUE(a.is_identity());
}

TEST(LabelSimples, GL2F2) {
  SimpleCatalog cat3(0), cat5(0);
  Labeling lab3, lab5;
  run_point(2, 2, 3, 1, &cat3, &lab3);
  const auto& sign = cat3.module(lab3.label.at({1, 1}));
  EXPECT_EQ(sign.dim(), 1u);
  EXPECT_EQ(sign.generators()[0](0, 0), 2u);  // the transposition acts by -1
  run_point(2, 2, 5, 1, &cat5, &lab5);
  EXPECT_EQ(cat5.module(lab5.label.at({1, 1})).dim(), 2u);
}

TEST(DecompositionMatrix, BanalGoldenMatchesHomOracle) {
  SimpleCatalog cat(0);
  Labeling lab;
  auto d = run_point(2, 2, 5, 1, &cat, &lab);
  EXPECT_EQ(d.matrix, (std::vector<std::vector<long long>>{{1, 0}, {1, 1}}));
  // semisimple: multiplicity = dim Hom(ind_{P(kappa)} 1, D(mu))
  GLGroup g(2, make_field(2, 1));
  auto f = make_field(5, 1);
  for (std::size_t i = 0; i < d.partitions.size(); ++i) {
    const auto& kappa = d.partitions[i];
    auto ind = permutation_module(g, StandardParabolic(Composition(kappa.begin(), kappa.end())), f);
    for (std::size_t j = 0; j < d.partitions.size(); ++j)
      EXPECT_EQ(static_cast<long long>(hom_space(ind, cat.module(lab.label.at(d.partitions[j]))).dim()),
                d.matrix[i][j]);
  }
}

TEST(DecompositionMatrix, NonBanalGoldenMatchesBrauerCharacterOracle) {
  auto d = run_point(2, 2, 3, 1);
  // 3-regular classes of S_3: identity and transpositions. Fixed points of the permutation
  // module on 3 points are 3 and 1; trivial = (1,1), sign = (1,-1). So 3 = a + b, 1 = a - b.
  const long long a = (3 + 1) / 2, b = (3 - 1) / 2;
  EXPECT_EQ(d.matrix, (std::vector<std::vector<long long>>{{1, 0}, {a, b}}));
  EXPECT_EQ(d.matrix, (std::vector<std::vector<long long>>{{1, 0}, {2, 1}}));
}

TEST(DecompositionMatrix, GridInvariants) {
  struct P {
    int n;
    std::uint32_t q, l;
  };
  for (auto p : std::vector<P>{{2, 3, 2}, {2, 5, 3}, {3, 2, 3}, {3, 2, 7}}) {
    GLGroup g(p.n, make_field(p.q, 1));
    auto d = run_point(p.n, p.q, p.l, 5);
    EXPECT_TRUE(verify_unitriangular(d).empty());
    auto k0 = k0_generation_check(d);
    EXPECT_TRUE(k0.invertible);
    for (std::size_t i = 0; i < d.partitions.size(); ++i) {
      std::size_t total = 0;
      for (std::size_t j = 0; j < d.partitions.size(); ++j) total += d.matrix[i][j] * d.dims[j];
      const auto& kappa = d.partitions[i];
      EXPECT_EQ(total, coset_transversal(g, StandardParabolic(Composition(kappa.begin(), kappa.end()))).index());
    }
    for (std::uint64_t seed : {6u, 7u}) EXPECT_EQ(run_point(p.n, p.q, p.l, seed).matrix, d.matrix);
  }
}

TEST(LabelSimples, SecondExtensionGivesSameLabels) {
  GLGroup g(3, make_field(2, 1));
  auto coeffs = coefficient_field_for(2, 3).field;
  SimpleCatalog cat(g.generators().size());
  auto a = label_simples(g, coeffs, cat, 1);
  auto b = label_simples(g, coeffs, cat, 2, alternate_linear_extension(3));
  EXPECT_EQ(a.label, b.label);
}

TEST(VerifyUnitriangular, Examples) {
  DecompositionMatrix d;
  d.partitions = {{2}, {1, 1}};
  d.matrix = {{1, 0}, {0, 1}};
  EXPECT_TRUE(verify_unitriangular(d).empty());
  d.matrix = {{1, 0}, {2, 1}};
  EXPECT_TRUE(verify_unitriangular(d).empty());
  d.matrix = {{1, 1}, {0, 1}};
  auto v = verify_unitriangular(d);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].row, (Partition{2}));
  EXPECT_EQ(v[0].col, (Partition{1, 1}));
}

TEST(K0Generation, Examples) {
  DecompositionMatrix d;
  d.partitions = {{2}, {1, 1}};
  d.matrix = {{1, 0}, {0, 1}};
  EXPECT_TRUE(k0_generation_check(d).invertible);
  EXPECT_EQ(k0_generation_check(d).det, 1);
  d.matrix = {{1, 0}, {2, 1}};
  EXPECT_TRUE(k0_generation_check(d).invertible);
  d.matrix = {{1, 0}, {2, 2}};
  EXPECT_FALSE(k0_generation_check(d).invertible);
  EXPECT_EQ(k0_generation_check(d).det, 2);
}

TEST(CompositionConsistency, AssociateCompositionsGiveIsomorphicModules) {
  GLGroup g(3, make_field(2, 1));
  for (std::uint32_t l : {3u, 7u}) {
    auto f = make_field(l, 1);
    for (const auto& a : standard_parabolics(3)) {
      for (const auto& b : standard_parabolics(3)) {
        if (sort_to_partition(a) != sort_to_partition(b)) continue;
        auto ma = permutation_module(g, StandardParabolic(a), f);
        auto mb = permutation_module(g, StandardParabolic(b), f);
        auto iso = find_isomorphism(ma, mb, 3);
        ASSERT_TRUE(iso.has_value());
        for (std::size_t k = 0; k < ma.num_generators(); ++k)
          EXPECT_EQ(*iso * ma.generators()[k], mb.generators()[k] * *iso);
      }
    }
  }
}

TEST(DecompositionMatrix, JsonAndCsv) {
  auto d = run_point(2, 2, 3, 1);
  auto j = d.to_json();
  for (const char* key : {"n", "q", "l", "partitions", "dims", "matrix", "unitriangular", "det"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["det"], 1);
  EXPECT_EQ(j["unitriangular"], true);
  auto csv = d.to_csv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + static_cast<long>(d.partitions.size()));
}
