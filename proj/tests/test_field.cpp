#include <gtest/gtest.h>

#include <random>

#include "unipotent_lab/errors.hpp"
#include "unipotent_lab/field.hpp"

using namespace ulab;

namespace {

// Trial division over F_p by every monic polynomial of degree 1..deg/2.
bool irreducible_by_trial_division(const std::vector<std::uint32_t>& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      std::vector<std::int64_t> g(d + 1);
      std::uint64_t c = code;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::int64_t>(c % p);
        c /= p;
      }
      g[d] = 1;
      std::vector<std::int64_t> r(f.begin(), f.end());
      for (std::size_t k = deg; k >= d; --k) {
        std::int64_t coef = r[k] % p;
        for (std::size_t i = 0; i <= d; ++i) r[k - d + i] = ((r[k - d + i] - coef * g[i]) % p + p) % p;
        if (k == d) break;
      }
      bool zero = true;
      for (std::size_t i = 0; i < d; ++i) zero = zero && (r[i] % p == 0);
      if (zero) return false;
    }
  }
  return true;
}

std::uint32_t order_mod(std::uint32_t l, std::uint32_t p) {
  for (std::uint32_t m = 1;; ++m) {
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < m; ++i) v *= l;
    if ((v - 1) % p == 0) return m;
  }
}

}  // namespace

TEST(MakeField, PrimeFieldHasModulusX) {
  auto f = make_field(3, 1);
  EXPECT_EQ(f->order(), 3u);
  EXPECT_EQ(f->modulus(), (std::vector<std::uint32_t>{0, 1}));
}

TEST(MakeField, F4UsesUniqueIrreducibleQuadratic) {
  auto f = make_field(2, 2);
  EXPECT_EQ(f->order(), 4u);
  EXPECT_EQ(f->modulus(), (std::vector<std::uint32_t>{1, 1, 1}));
}

TEST(MakeField, F8ModulusPassesTrialDivision) {
  auto f = make_field(2, 3);
  EXPECT_EQ(f->order(), 8u);
  EXPECT_TRUE(irreducible_by_trial_division(f->modulus(), 2));
  // no roots in F_2
  for (std::uint32_t x = 0; x < 2; ++x) {
    std::uint32_t v = 0;
    for (std::size_t i = f->modulus().size(); i-- > 0;) v = (v * x + f->modulus()[i]) % 2;
    EXPECT_NE(v, 0u);
  }
}

TEST(MakeField, ModuliAreIrreducibleAcrossSmallFields) {
  for (auto [p, m] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
           {2, 4}, {2, 5}, {3, 2}, {3, 4}, {5, 2}, {5, 4}, {7, 2}, {2, 8}, {3, 5}}) {
    auto f = make_field(p, m);
    EXPECT_TRUE(irreducible_by_trial_division(f->modulus(), p)) << p << "^" << m;
  }
}

TEST(MakeField, RejectsNonPrimeCharacteristic) {
  EXPECT_THROW(make_field(4, 1), FieldError);
  EXPECT_THROW(make_field(1, 1), FieldError);
}

TEST(MakeField, ReferentiallyTransparent) {
  auto a = make_field(3, 4);
  auto b = make_field(3, 4);
  EXPECT_EQ(a->modulus(), b->modulus());
  EXPECT_EQ(a.get(), b.get());
}

TEST(FieldAxioms, SampledTriples) {
  std::mt19937_64 rng(7);
  for (auto [p, m] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
           {2, 1}, {3, 1}, {7, 1}, {2, 4}, {3, 4}, {5, 2}, {2, 17}}) {
    auto f = make_field(p, m);
    for (int t = 0; t < 1000; ++t) {
      Elem a = static_cast<Elem>(rng() % f->order());
      Elem b = static_cast<Elem>(rng() % f->order());
      Elem c = static_cast<Elem>(rng() % f->order());
      ASSERT_EQ(f->add(f->add(a, b), c), f->add(a, f->add(b, c)));
      ASSERT_EQ(f->mul(a, f->add(b, c)), f->add(f->mul(a, b), f->mul(a, c)));
      ASSERT_EQ(f->mul(a, b), f->mul(b, a));
      ASSERT_EQ(f->mul(f->mul(a, b), c), f->mul(a, f->mul(b, c)));
      ASSERT_EQ(f->frobenius(f->add(a, b)), f->add(f->frobenius(a), f->frobenius(b)));
      ASSERT_EQ(f->add(a, f->neg(a)), 0u);
    }
  }
}

TEST(FieldAxioms, EveryNonzeroElementInvertible) {
  for (auto [p, m] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{5, 1}, {2, 4}, {3, 4}, {7, 2}}) {
    auto f = make_field(p, m);
    for (Elem a = 1; a < f->order(); ++a) ASSERT_EQ(f->mul(a, f->inv(a)), 1u);
  }
}

TEST(FieldAxioms, GeneratorIsPrimitive) {
  for (auto [p, m] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{5, 1}, {2, 4}, {3, 4}, {7, 2}}) {
    auto f = make_field(p, m);
    EXPECT_EQ(f->multiplicative_order(f->generator()), f->order() - 1u);
  }
}

TEST(PrimitiveRoot, Examples) {
  EXPECT_EQ(primitive_root_of_unity(*make_field(3, 1), 2), 2u);
  EXPECT_EQ(primitive_root_of_unity(*make_field(7, 1), 2), 6u);
  auto f4 = make_field(2, 2);
  Elem z = primitive_root_of_unity(*f4, 3);
  EXPECT_NE(z, 1u);
  EXPECT_EQ(f4->pow(z, 3), 1u);
}

TEST(PrimitiveRoot, ExactOrderForAllDivisors) {
  auto f = make_field(3, 4);
  for (std::uint64_t k = 1; k <= 80; ++k) {
    if (80 % k != 0) continue;
    EXPECT_EQ(f->multiplicative_order(primitive_root_of_unity(*f, k)), k);
  }
}

TEST(PrimitiveRoot, NoSuchRoot) {
  EXPECT_THROW(primitive_root_of_unity(*make_field(7, 1), 4), FieldError);
}

TEST(SplittingDegree, Examples) {
  EXPECT_EQ(splitting_degree_for_characters(2, 3), 1u);
  EXPECT_EQ(splitting_degree_for_characters(3, 2), order_mod(2, 3));
  EXPECT_EQ(splitting_degree_for_characters(3, 2), 2u);
  EXPECT_EQ(splitting_degree_for_characters(7, 3), order_mod(3, 7));
  EXPECT_EQ(splitting_degree_for_characters(7, 3), 6u);
  EXPECT_THROW(splitting_degree_for_characters(5, 5), FieldError);
}

TEST(SplittingDegree, CoefficientFieldContainsPthRoot) {
  for (auto [p, l] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 3}, {3, 2}, {5, 2}, {5, 3}, {2, 7}}) {
    auto c = coefficient_field_for(p, l);
    EXPECT_EQ(c.field->order() % p, 1u);
    EXPECT_EQ(c.field->multiplicative_order(primitive_root_of_unity(*c.field, p)), p);
  }
}

TEST(FieldEmbedding, IsRingHomomorphism) {
  auto small = make_field(2, 2);
  auto large = make_field(2, 4);
  FieldEmbedding e(small, large);
  for (Elem a = 0; a < small->order(); ++a) {
    for (Elem b = 0; b < small->order(); ++b) {
      EXPECT_EQ(e(small->add(a, b)), large->add(e(a), e(b)));
      EXPECT_EQ(e(small->mul(a, b)), large->mul(e(a), e(b)));
    }
  }
  EXPECT_EQ(e(1), 1u);
}

TEST(FieldDescriptor, Json) {
  auto j = make_field(2, 2)->descriptor();
  EXPECT_EQ(j["char"], 2);
  EXPECT_EQ(j["degree"], 2);
  EXPECT_EQ(j["modulus"], nlohmann::json({1, 1, 1}));
}
