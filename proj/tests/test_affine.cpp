#include <gtest/gtest.h>

#include <random>
#include <set>

#include "unipotent_lab/affine.hpp"
#include "unipotent_lab/errors.hpp"

using namespace ulab;

namespace {

using W = ExtAffineWeylElem;

W random_elem(int n, std::mt19937_64& rng) {
  auto perms = symmetric_group(n);
  W w{std::vector<int>(static_cast<std::size_t>(n)), perms[rng() % perms.size()]};
  for (auto& x : w.t) x = static_cast<int>(rng() % 7) - 3;
  return w;
}

TruncatedGroup truncated(int n, std::uint32_t q, int m) { return TruncatedGroup(n, make_field(q, 1), m); }

}  // namespace

TEST(ExtAffineWeyl, GroupAxioms) {
  std::mt19937_64 rng(11);
  for (int n : {2, 3, 4}) {
    const auto e = W::identity(n);
    for (int k = 0; k < 200; ++k) {
      auto a = random_elem(n, rng), b = random_elem(n, rng), c = random_elem(n, rng);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * e, a);
      EXPECT_EQ(e * a, a);
      EXPECT_EQ(a * a.inverse(), e);
      EXPECT_EQ(awg_length(a), awg_length(a.inverse()));
    }
  }
}

TEST(ExtAffineWeyl, MultiplicationMatchesMonomialMatrices) {
  // integer monomial matrices with entries x^t, tracked as exponent matrices
  std::mt19937_64 rng(2);
  auto monomial = [](const W& w) {
    std::vector<std::vector<std::optional<int>>> m(w.t.size(), std::vector<std::optional<int>>(w.t.size()));
    for (std::size_t j = 0; j < w.t.size(); ++j) {
      const auto i = static_cast<std::size_t>(w.sigma[j]);
      m[i][j] = w.t[i];
    }
    return m;
  };
  for (int k = 0; k < 100; ++k) {
    auto a = random_elem(3, rng), b = random_elem(3, rng);
    auto ma = monomial(a), mb = monomial(b), mab = monomial(a * b);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        std::optional<int> prod;
        for (std::size_t l = 0; l < 3; ++l)
          if (ma[i][l] && mb[l][j]) prod = *ma[i][l] + *mb[l][j];
        EXPECT_EQ(prod, mab[i][j]);
      }
  }
}

TEST(Length, Examples) {
  EXPECT_EQ(awg_length(W::identity(2)), 0);
  EXPECT_EQ(awg_length(W::translation({1, 0})), 1);
  EXPECT_EQ(awg_length(W::translation({1, 1})), 0);
  EXPECT_EQ(awg_length(rotation(3)), 0);
  for (int n : {2, 3, 4})
    for (int i = 0; i < n; ++i) EXPECT_EQ(awg_length(affine_simple_reflection(n, i)), 1);
  EXPECT_EQ(rotation(2) * rotation(2), W::translation({1, 1}));
}

TEST(Length, ClosedFormulaAgreesWithWordSearch) {
  auto two = cross_validate_lengths(2);
  EXPECT_TRUE(two.ok());
  EXPECT_EQ(two.checked, 50u);
  auto three = cross_validate_lengths(3);
  EXPECT_TRUE(three.ok());
  EXPECT_EQ(three.checked, 750u);
}

TEST(CosetFactorization, ExhaustiveAndAdditive) {
  for (int n : {2, 3}) {
    for (const auto& w : box_elements(n, -2, 2)) {
      auto f = min_coset_factorization(w);
      EXPECT_EQ(W::finite(f.w_f) * f.w0, w);
      EXPECT_EQ(awg_length(w), permutation_length(f.w_f) + awg_length(f.w0));
      for (const auto& s : symmetric_group(n)) EXPECT_GE(awg_length(W::finite(s) * w), awg_length(f.w0));
    }
  }
  auto s = W::finite({1, 0});
  EXPECT_EQ(min_coset_factorization(s).w0, W::identity(2));
  EXPECT_EQ(min_coset_factorization(W::translation({0, 1})).w0, W::translation({0, 1}));
}

TEST(CosetFactorization, TranslationOneZeroIsNotMinimal) {
  auto w = W::translation({1, 0}) * W::finite({1, 0});
  auto f = min_coset_factorization(w);
  EXPECT_EQ(awg_length(w), permutation_length(f.w_f) + awg_length(f.w0));
  EXPECT_FALSE(is_minimal_in_coset(W::translation({1, 0})));
  EXPECT_EQ(min_coset_factorization(W::translation({1, 0})).w0, rotation(2));
  EXPECT_TRUE(is_minimal_in_coset(W::translation({0, 1})));
}

TEST(CosetFactorization, OneMinimalElementPerCoset) {
  std::size_t minimal = 0;
  for (const auto& w : box_elements(3, -1, 1)) {
    if (!is_minimal_in_coset(w)) continue;
    ++minimal;
    for (const auto& s : symmetric_group(3))
      if (s != W::identity(3).sigma) EXPECT_FALSE(is_minimal_in_coset(W::finite(s) * w));
  }
  // each coset of a box element stays in the box, and there are 27 * 6 / 6 of them
  EXPECT_EQ(minimal, 27u);
}

TEST(Parahoric, LabelsMatchParabolics) {
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(standard_parahoric_labels(n), standard_parabolics(n));
}

TEST(TruncatedGroup, OrdersBySubgroupEnumeration) {
  auto g = truncated(2, 2, 2);
  EXPECT_EQ(g.order(), 96u);
  EXPECT_EQ(g.closure(g.group_generators(), kTruncatedBound).size(), 96u);
  EXPECT_EQ(g.closure(g.iwahori_generators(), kTruncatedBound).size(), 32u);
  EXPECT_EQ(g.closure(g.kplus_generators(), kTruncatedBound).size(), 16u);
  auto h = truncated(2, 3, 2);
  EXPECT_EQ(h.order(), 3888u);
  EXPECT_EQ(h.closure(h.group_generators(), kTruncatedBound).size(), 3888u);
  auto k = truncated(2, 2, 3);
  EXPECT_EQ(k.closure(k.group_generators(), kTruncatedBound).size(), k.order());
  EXPECT_THROW(h.closure(h.group_generators(), 100), ScaleError);
}

TEST(TruncatedGroup, MembershipAndNormality) {
  auto g = truncated(2, 2, 3);
  auto all = g.closure(g.group_generators(), kTruncatedBound);
  std::size_t iw = 0, kp = 0;
  for (const auto& x : all) {
    iw += g.in_iwahori(x);
    kp += g.in_kplus(x);
  }
  EXPECT_EQ(iw, g.closure(g.iwahori_generators(), kTruncatedBound).size());
  EXPECT_EQ(kp, g.closure(g.kplus_generators(), kTruncatedBound).size());
  std::mt19937_64 rng(5);
  auto kplus = g.kplus_generators();
  for (int s = 0; s < 200; ++s) {
    const auto& x = all[rng() % all.size()];
    const auto& k = kplus[rng() % kplus.size()];
    EXPECT_TRUE(g.in_kplus(g.mul(g.mul(x, k), g.inverse(x))));
    EXPECT_EQ(g.mul(x, g.inverse(x)), g.identity());
  }
}

TEST(SetIdentity, IdentityGivesIwahori) {
  auto g = truncated(2, 2, 2);
  auto r = shadow_set_identity(g, W::identity(2));
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.iwi_size, 32u);
}

TEST(SetIdentity, RejectsBadRepresentatives) {
  auto g = truncated(2, 2, 2);
  EXPECT_THROW(shadow_set_identity(g, W::translation({1, 0})), std::invalid_argument);
  EXPECT_THROW(shadow_set_identity(g, W::translation({0, 2})), std::invalid_argument);
}

TEST(SetIdentity, AllMinimalAdmissibleAtAffinePoints) {
  for (auto [n, q] : std::vector<std::pair<int, std::uint32_t>>{{2, 2}, {2, 3}, {3, 2}}) {
    auto g = truncated(n, q, 2);
    auto reps = admissible_minimal_elements(n, 2);
    EXPECT_EQ(reps.size(), static_cast<std::size_t>(n == 2 ? 4 : 8));
    for (const auto& w0 : reps) {
      auto r = shadow_set_identity(g, w0);
      EXPECT_TRUE(r.equal) << w0.str();
      EXPECT_EQ(r.iwi_size, r.kwi_size);
    }
  }
}

TEST(SetIdentity, NonMinimalRepresentativeBreaksIdentity) {
  // s * t^(0,1) = t^(1,0) s is not minimal; the K+ side misses the finite Borel factor
  auto g = truncated(2, 2, 2);
  auto x = g.from_weyl(W::translation({1, 0}) * W::finite({1, 0}));
  auto iwa = g.iwahori_generators();
  EXPECT_NE(g.double_orbit(x, iwa, iwa, kTruncatedBound), g.double_orbit(x, g.kplus_generators(), iwa, kTruncatedBound));
}

TEST(IndexInvertibility, ExamplesAndOrbitOracle) {
  auto g = truncated(2, 2, 2);
  EXPECT_EQ(index_invertibility_check(g, W::identity(2), g.identity()).index, 1u);
  auto r = index_invertibility_check(g, W::finite({1, 0}), g.identity());
  EXPECT_TRUE(r.p_power);

  auto h = truncated(2, 3, 2);
  auto iwa = h.iwahori_generators();
  auto kp = h.kplus_generators();
  std::mt19937_64 rng(9);
  auto admissible = box_elements(2, 0, 1);
  for (int s = 0; s < 10; ++s) {
    const auto& w = admissible[rng() % admissible.size()];
    auto i = h.identity();
    for (int k = 0; k < 16; ++k) i = h.mul(i, iwa[rng() % iwa.size()]);
    auto ix = index_invertibility_check(h, w, i);
    EXPECT_TRUE(ix.p_power);
    // orbit count: |K+ x I| / |x I|
    auto x = h.mul(i, h.from_weyl(w));
    auto big = h.double_orbit(x, kp, iwa, kTruncatedBound);
    auto small = h.double_orbit(x, {}, iwa, kTruncatedBound);
    EXPECT_EQ(ix.index * small.size(), big.size());
  }
}

TEST(AffineSuite, AllPointsPassAndSerialise) {
  for (auto [n, q] : std::vector<std::pair<int, std::uint32_t>>{{2, 2}, {2, 3}, {3, 2}}) {
    auto r = run_affine_suite(n, q, 2, 1);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.group_order, TruncatedGroup(n, make_field(q, 1), 2).order());
    auto j = r.to_json();
    for (const char* key : {"n", "q", "m", "identities", "equal", "indices_all_p_powers"}) EXPECT_TRUE(j.contains(key));
    EXPECT_EQ(r.to_json().dump(), run_affine_suite(n, q, 2, 1).to_json().dump());
  }
}

TEST(AffineSuite, TruncationLevelThree) {
  auto r = run_affine_suite(2, 2, 3, 1);
  EXPECT_EQ(r.identities.size(), admissible_minimal_elements(2, 3).size());
  EXPECT_TRUE(r.ok());
}
