#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "json.hpp"

namespace ulab {

/// Field elements are coordinate vectors over the prime field packed in base p:
/// the element sum c_i x^i is stored as sum c_i p^i.
using Elem = std::uint32_t;

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Finite field F_{p^m} = F_p[x]/(f), f the least irreducible monic polynomial of
/// degree m in base-p integer encoding. Immutable once built.
class PrimePowerField {
 public:
  static constexpr std::uint32_t kMaxOrder = 1u << 20;
  static constexpr std::uint32_t kTableOrder = 1u << 16;

  PrimePowerField(std::uint32_t characteristic, std::uint32_t degree,
                  std::vector<std::uint32_t> modulus);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return m_; }
  std::uint32_t order() const { return q_; }
  bool is_prime_field() const { return m_ == 1; }
  /// Coefficients c_0..c_m of the monic modulus.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  /// Primitive element (generator of the multiplicative group).
  Elem generator() const { return gen_; }

  Elem add(Elem a, Elem b) const {
    if (m_ == 1) {
      Elem s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    if (p_ == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[a * q_ + b];
    return add_digits(a, b);
  }
  Elem neg(Elem a) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (m_ == 1) return static_cast<Elem>((std::uint64_t{a} * b) % p_);
    if (a == 0 || b == 0) return 0;
    if (!exp_.empty()) return exp_[log_[a] + log_[b]];
    return mul_slow(a, b);
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;
  Elem frobenius(Elem a) const { return pow(a, p_); }

  /// Image of an integer in the prime subfield.
  Elem from_int(std::int64_t v) const;
  std::vector<std::uint32_t> coords(Elem a) const;
  Elem from_coords(std::span<const std::uint32_t> c) const;
  /// Absolute trace to the prime field, as an integer in [0, p).
  std::uint32_t trace_to_prime(Elem a) const;
  /// Multiplicative order of a nonzero element.
  std::uint64_t multiplicative_order(Elem a) const;

  /// y += a * x, elementwise.
  void axpy(std::span<Elem> y, Elem a, std::span<const Elem> x) const;
  void scale(std::span<Elem> y, Elem a) const;

  nlohmann::json descriptor() const;

  bool operator==(const PrimePowerField& o) const { return p_ == o.p_ && m_ == o.m_; }

 private:
  Elem add_digits(Elem a, Elem b) const;
  Elem mul_slow(Elem a, Elem b) const;

  std::uint32_t p_;
  std::uint32_t m_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  Elem gen_ = 1;
  std::vector<Elem> exp_;             // size 2(q-1), empty above kTableOrder
  std::vector<std::uint32_t> log_;
  std::vector<std::uint16_t> add_table_;
  std::vector<Elem> inv_prime_;
};

using FieldPtr = std::shared_ptr<const PrimePowerField>;

/// Canonical field for (characteristic, degree). Equal arguments return the same object.
FieldPtr make_field(std::uint32_t characteristic, std::uint32_t degree);

/// Least monic irreducible polynomial of the given degree over F_p, coefficients c_0..c_m.
std::vector<std::uint32_t> least_irreducible(std::uint32_t p, std::uint32_t degree);

/// Element of exact multiplicative order k; throws FieldError("no such root") if k does not
/// divide order-1.
Elem primitive_root_of_unity(const PrimePowerField& field, std::uint64_t k);

/// Multiplicative order of l modulo p: least m with p | l^m - 1.
std::uint32_t splitting_degree_for_characters(std::uint32_t p, std::uint32_t l);

/// Coefficient field F_{l^m} for representations of a group in characteristic p != l.
struct CoefficientField {
  std::uint32_t l = 0;
  std::uint32_t m = 0;
  FieldPtr field;
};

/// Smallest coefficient field over F_l containing a primitive p-th root of unity.
CoefficientField coefficient_field_for(std::uint32_t p, std::uint32_t l);

/// Field embedding F_{p^a} -> F_{p^b} (a | b), sending x to the least root of the
/// small modulus in the large field.
class FieldEmbedding {
 public:
  FieldEmbedding(FieldPtr small, FieldPtr large);
  Elem operator()(Elem a) const { return image_[a]; }
  const FieldPtr& source() const { return small_; }
  const FieldPtr& target() const { return large_; }

 private:
  FieldPtr small_;
  FieldPtr large_;
  std::vector<Elem> image_;
};

}  // namespace ulab
