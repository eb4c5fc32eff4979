#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "unipotent_lab/errors.hpp"
#include "unipotent_lab/meataxe.hpp"

using namespace ulab;

namespace {

GModule borel_module(const GLGroup& g, const FieldPtr& f) {
  return permutation_module(g, StandardParabolic(Composition(static_cast<std::size_t>(g.n()), 1)), f);
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

bool invariant(const GModule& m, const Echelon& e) {
  for (const auto& a : m.generators())
    for (const auto& r : e.rows())
      if (!e.contains(a.apply(r))) return false;
  return true;
}

}  // namespace

TEST(SplitOrCertify, OneDimensionalIsCertified) {
  GLGroup g(2, make_field(3, 1));
  auto r = split_or_certify(trivial_module(g, make_field(2, 1)), 1);
  EXPECT_TRUE(r.irreducible);
}

TEST(SplitOrCertify, PermutationModuleOfS3InCharacteristicThreeSplits) {
  GLGroup g(2, make_field(2, 1));
  auto m = borel_module(g, make_field(3, 1));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto r = split_or_certify(m, seed);
    ASSERT_FALSE(r.irreducible);
    ASSERT_TRUE(r.submodule.has_value());
    EXPECT_GT(r.submodule->size(), 0u);
    EXPECT_LT(r.submodule->size(), 3u);
    EXPECT_TRUE(invariant(m, *r.submodule));
  }
}

TEST(SplitOrCertify, BanalGL2F5OverF7) {
  GLGroup g(2, make_field(5, 1));
  auto m = borel_module(g, make_field(7, 1));
  auto series = composition_series(m, 4);
  std::vector<std::size_t> dims;
  for (const auto& s : series.factors) dims.push_back(s.dim());
  std::sort(dims.begin(), dims.end());
  EXPECT_EQ(dims, (std::vector<std::size_t>{1, 5}));
  for (const auto& s : series.factors) {
    auto r = split_or_certify(s, 9);
    ASSERT_TRUE(r.irreducible);
    EXPECT_TRUE(verify_certificate(s, r.certificate));
  }
}

TEST(SplitOrCertify, CertificateRejectedOnReducibleModule) {
  GLGroup g(2, make_field(5, 1));
  auto m = borel_module(g, make_field(7, 1));
  auto series = composition_series(m, 4);
  const GModule* big = nullptr;
  for (const auto& s : series.factors)
    if (s.dim() == 5) big = &s;
  ASSERT_NE(big, nullptr);
  auto cert = split_or_certify(*big, 2).certificate;
  auto pm = borel_module(g, make_field(7, 1));
  EXPECT_FALSE(verify_certificate(pm, cert));
}

TEST(SplitOrCertify, ZeroBudgetIsInconclusive) {
  GLGroup g(2, make_field(2, 1));
  EXPECT_THROW(split_or_certify(borel_module(g, make_field(3, 1)), 1, 0), InconclusiveError);
}

TEST(CompositionFactors, TrivialModule) {
  GLGroup g(2, make_field(2, 1));
  SimpleCatalog cat(g.generators().size());
  auto f = composition_factors(trivial_module(g, make_field(3, 1)), cat, 1);
  EXPECT_EQ(f, (std::vector<std::size_t>{0}));
  EXPECT_EQ(cat.size(), 1u);
}

TEST(CompositionFactors, S3PermutationModule) {
  GLGroup g(2, make_field(2, 1));
  auto f3 = make_field(3, 1);
  SimpleCatalog cat(g.generators().size());
  std::size_t triv = cat.add(trivial_module(g, f3));
  auto facs = composition_factors(borel_module(g, f3), cat, 1);
  ASSERT_EQ(facs.size(), 3u);
  EXPECT_EQ(std::count(facs.begin(), facs.end(), triv), 2);
  EXPECT_EQ(cat.size(), 2u);
  for (std::size_t i = 0; i < cat.size(); ++i) EXPECT_EQ(cat.module(i).dim(), 1u);

  auto f5 = make_field(5, 1);
  SimpleCatalog cat5(g.generators().size());
  auto facs5 = composition_factors(borel_module(g, f5), cat5, 1);
  ASSERT_EQ(facs5.size(), 2u);
  std::vector<std::size_t> dims = {cat5.module(facs5[0]).dim(), cat5.module(facs5[1]).dim()};
  std::sort(dims.begin(), dims.end());
  EXPECT_EQ(dims, (std::vector<std::size_t>{1, 2}));
}

TEST(IsoTest, Examples) {
  GLGroup g(2, make_field(2, 1));
  auto f3 = make_field(3, 1);
  SimpleCatalog cat(g.generators().size());
  auto facs = composition_factors(borel_module(g, f3), cat, 1);
  const auto& a = cat.module(0);
  const auto& b = cat.module(1);
  EXPECT_TRUE(iso_test(a, a));
  EXPECT_FALSE(iso_test(a, b));
  // the non-trivial one is the sign: the transposition acts by -1
  auto sign_idx = cat.module(0).generators()[0](0, 0) == 1 ? 1u : 0u;
  EXPECT_EQ(cat.module(sign_idx).generators()[0](0, 0), 2u);

  SimpleCatalog cat5(g.generators().size());
  auto facs5 = composition_factors(borel_module(g, make_field(5, 1)), cat5, 1);
  const GModule& two = cat5.module(facs5[0]).dim() == 2 ? cat5.module(facs5[0]) : cat5.module(facs5[1]);
  EXPECT_FALSE(iso_test(trivial_module(g, make_field(5, 1)), two));
}

struct GridCase {
  int n;
  std::uint32_t q, l;
};

class JordanHolder : public ::testing::TestWithParam<GridCase> {};

TEST_P(JordanHolder, FactorsIndependentOfSeedAndOfDualSeries) {
  auto c = GetParam();
  GLGroup g(c.n, make_field(c.q, 1));
  auto coeffs = coefficient_field_for(c.q, c.l).field;
  auto m = borel_module(g, coeffs);
  SimpleCatalog cat(g.generators().size());
  std::vector<std::size_t> ref;
  for (std::uint64_t seed : {11u, 22u, 33u}) {
    auto series = composition_series(m, seed);
    std::size_t total = 0;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < series.factors.size(); ++i) {
      total += series.factors[i].dim();
      EXPECT_EQ(series.filtration[i], total);
      EXPECT_TRUE(split_or_certify(series.factors[i], seed + i).irreducible);
      idx.push_back(cat.add(series.factors[i]));
    }
    EXPECT_EQ(total, m.dim());
    if (ref.empty()) ref = sorted(idx);
    EXPECT_EQ(sorted(idx), ref);
  }
  // factors of the dual, dualised back
  std::vector<std::size_t> dual_idx;
  for (const auto& s : composition_series(dual_module(m), 5).factors) dual_idx.push_back(cat.add(dual_module(s)));
  EXPECT_EQ(sorted(dual_idx), ref);
  EXPECT_TRUE(cat.verify());
  // fingerprints separate every pair of classes in the catalog
  for (std::size_t i = 0; i < cat.size(); ++i)
    for (std::size_t j = i + 1; j < cat.size(); ++j) EXPECT_NE(cat.fingerprint(i), cat.fingerprint(j));
}

INSTANTIATE_TEST_SUITE_P(Grid, JordanHolder,
                         ::testing::Values(GridCase{2, 2, 3}, GridCase{2, 2, 5}, GridCase{2, 3, 2},
                                           GridCase{2, 5, 2}, GridCase{2, 5, 3}, GridCase{3, 2, 3},
                                           GridCase{3, 2, 7}));

TEST(AbsoluteIrreducibility, TrivialUnchanged) {
  GLGroup g(2, make_field(3, 1));
  auto r = ensure_absolutely_irreducible(trivial_module(g, make_field(2, 1)), 1);
  EXPECT_EQ(r.enlargement, 1u);
  EXPECT_EQ(r.module.field()->order(), 2u);
}

TEST(AbsoluteIrreducibility, RotationOfOrderFourNeedsF9) {
  // GL_1(F_5) is cyclic of order 4; x -> [[0,-1],[1,0]] is irreducible over F_3 but not absolutely
  GLGroup g(1, make_field(5, 1));
  ASSERT_EQ(g.generators().size(), 1u);
  auto f3 = make_field(3, 1);
  Matrix rot(f3, 2, 2);
  rot(0, 1) = 2;
  rot(1, 0) = 1;
  GModule m(f3, 2, {rot});
  EXPECT_TRUE(respects_relations(g, m, 10, 1));
  auto r = split_or_certify(m, 1);
  ASSERT_TRUE(r.irreducible);
  EXPECT_EQ(hom_space(m, m).dim(), 2u);
  auto abs = ensure_absolutely_irreducible(m, 1);
  EXPECT_EQ(abs.enlargement, 2u);
  EXPECT_EQ(abs.module.field()->order(), 9u);
  EXPECT_EQ(abs.module.dim(), 1u);
  EXPECT_EQ(hom_space(abs.module, abs.module).dim(), 1u);
  EXPECT_THROW(ensure_absolutely_irreducible(m, 1, 1), FieldError);
}

TEST(SimpleCatalog, CountsForGridPoints) {
  std::map<int, std::size_t> partitions = {{2, 2}, {3, 3}};
  for (auto c : std::vector<GridCase>{{2, 2, 3}, {2, 2, 5}, {3, 2, 3}}) {
    GLGroup g(c.n, make_field(c.q, 1));
    auto coeffs = coefficient_field_for(c.q, c.l).field;
    SimpleCatalog cat(g.generators().size());
    composition_factors(borel_module(g, coeffs), cat, 7);
    EXPECT_EQ(cat.size(), partitions[c.n]);
  }
}
