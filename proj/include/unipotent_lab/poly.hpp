#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "unipotent_lab/field.hpp"
#include "unipotent_lab/matrix.hpp"

namespace ulab {

/// Univariate polynomials over a finite field as coefficient vectors c_0..c_d,
/// normalised so that the leading coefficient is nonzero (zero polynomial is empty).
namespace poly {

using Poly = std::vector<Elem>;

void trim(Poly& a);
inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }
Poly add(const PrimePowerField& f, const Poly& a, const Poly& b);
Poly sub(const PrimePowerField& f, const Poly& a, const Poly& b);
Poly mul(const PrimePowerField& f, const Poly& a, const Poly& b);
std::pair<Poly, Poly> divmod(const PrimePowerField& f, const Poly& a, const Poly& b);
Poly mod(const PrimePowerField& f, const Poly& a, const Poly& b);
Poly monic(const PrimePowerField& f, Poly a);
Poly gcd(const PrimePowerField& f, Poly a, Poly b);
Poly powmod(const PrimePowerField& f, Poly base, std::uint64_t e, const Poly& m);
Poly derivative(const PrimePowerField& f, const Poly& a);
Elem evaluate(const PrimePowerField& f, const Poly& a, Elem x);

/// Monic irreducible factors with multiplicities, sorted by (degree, coefficients).
std::vector<std::pair<Poly, int>> factor(const PrimePowerField& f, const Poly& a,
                                         std::uint64_t seed = 1);

/// Characteristic polynomial det(xI - A) via Hessenberg reduction.
Poly char_poly(const Matrix& a);
/// p(A) by Horner's rule.
Matrix evaluate(const Poly& p, const Matrix& a);

}  // namespace poly
}  // namespace ulab
