#include "unipotent_lab/field.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "unipotent_lab/errors.hpp"

namespace ulab {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

// Dense polynomials over F_p with small coefficients; used only while building fields.
using SmallPoly = std::vector<std::uint32_t>;

void trim(SmallPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

SmallPoly poly_mod(SmallPoly a, const SmallPoly& f, std::uint32_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  std::uint32_t lead_inv = 1;
  for (std::uint32_t t = 1; t < p; ++t)
    if ((std::uint64_t{t} * f.back()) % p == 1) lead_inv = t;
  while (a.size() > df) {
    std::uint32_t c = static_cast<std::uint32_t>((std::uint64_t{a.back()} * lead_inv) % p);
    std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      std::uint64_t sub = (std::uint64_t{c} * f[i]) % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

SmallPoly poly_mulmod(const SmallPoly& a, const SmallPoly& b, const SmallPoly& f,
                      std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  SmallPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = static_cast<std::uint32_t>((c[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  return poly_mod(std::move(c), f, p);
}

SmallPoly poly_gcd(SmallPoly a, SmallPoly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    SmallPoly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Ben-Or: f of degree m is irreducible iff gcd(x^{p^i} - x, f) = 1 for i <= m/2.
bool small_irreducible(const SmallPoly& f, std::uint32_t p) {
  const std::size_t m = f.size() - 1;
  if (m == 1) return true;
  SmallPoly xp = {0, 1};
  for (std::size_t i = 1; i <= m / 2; ++i) {
    // xp <- xp^p mod f
    SmallPoly acc = {1};
    SmallPoly base = xp;
    std::uint64_t e = p;
    while (e > 0) {
      if (e & 1) acc = poly_mulmod(acc, base, f, p);
      base = poly_mulmod(base, base, f, p);
      e >>= 1;
    }
    xp = acc;
    SmallPoly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    SmallPoly g = poly_gcd(f, diff, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace

std::vector<std::uint32_t> least_irreducible(std::uint32_t p, std::uint32_t degree) {
  if (degree == 1) return {0, 1};
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < degree; ++i) count *= p;
  for (std::uint64_t code = 0; code < count; ++code) {
    SmallPoly f(degree + 1, 0);
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < degree; ++i) {
      f[i] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    f[degree] = 1;
    if (f[0] == 0) continue;
    if (small_irreducible(f, p)) return f;
  }
  throw FieldError("no irreducible polynomial found");
}

PrimePowerField::PrimePowerField(std::uint32_t characteristic, std::uint32_t degree,
                                 std::vector<std::uint32_t> modulus)
    : p_(characteristic), m_(degree), q_(1), modulus_(std::move(modulus)) {
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < m_; ++i) q *= p_;
  if (q > kMaxOrder) throw FieldError("field order exceeds 2^20");
  q_ = static_cast<std::uint32_t>(q);

  if (m_ == 1) {
    inv_prime_.assign(p_, 0);
    for (std::uint32_t a = 1; a < p_; ++a) inv_prime_[a] = pow(a, p_ - 2);
  }
  if (m_ > 1 && p_ != 2 && q_ <= 1024) {
    add_table_.resize(std::size_t{q_} * q_);
    for (Elem a = 0; a < q_; ++a)
      for (Elem b = 0; b < q_; ++b) add_table_[std::size_t{a} * q_ + b] = static_cast<std::uint16_t>(add_digits(a, b));
  }

  // Primitive element: least element of order q-1.
  const auto factors = prime_factors(q_ - 1);
  for (Elem g = 1; g < q_; ++g) {
    bool ok = true;
    for (auto r : factors) {
      if (pow(g, (q_ - 1) / r) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      gen_ = g;
      break;
    }
  }
  if (m_ > 1 && q_ <= kTableOrder) {
    exp_.assign(2 * std::size_t{q_ - 1}, 0);
    log_.assign(q_, 0);
    Elem x = 1;
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
      exp_[i] = x;
      exp_[i + q_ - 1] = x;
      log_[x] = i;
      x = mul_slow(x, gen_);
    }
  }
}

Elem PrimePowerField::add_digits(Elem a, Elem b) const {
  Elem out = 0;
  Elem w = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    Elem d = (a % p_ + b % p_) % p_;
    out += d * w;
    a /= p_;
    b /= p_;
    w *= p_;
  }
  return out;
}

Elem PrimePowerField::neg(Elem a) const {
  if (m_ == 1) return a == 0 ? 0 : p_ - a;
  if (p_ == 2) return a;
  Elem out = 0;
  Elem w = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    Elem d = a % p_;
    out += ((p_ - d) % p_) * w;
    a /= p_;
    w *= p_;
  }
  return out;
}

Elem PrimePowerField::mul_slow(Elem a, Elem b) const {
  if (m_ == 1) return static_cast<Elem>((std::uint64_t{a} * b) % p_);
  auto ca = coords(a);
  auto cb = coords(b);
  SmallPoly prod = poly_mulmod(ca, cb, modulus_, p_);
  prod.resize(m_, 0);
  return from_coords(prod);
}

Elem PrimePowerField::inv(Elem a) const {
  if (a == 0) throw FieldError("division by zero");
  if (m_ == 1) return inv_prime_.empty() ? pow(a, p_ - 2) : inv_prime_[a];
  if (!exp_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  return pow(a, q_ - 2);
}

Elem PrimePowerField::pow(Elem a, std::uint64_t e) const {
  Elem acc = 1;
  Elem base = a;
  while (e > 0) {
    if (e & 1) acc = (m_ == 1 || !exp_.empty()) ? mul(acc, base) : mul_slow(acc, base);
    base = (m_ == 1 || !exp_.empty()) ? mul(base, base) : mul_slow(base, base);
    e >>= 1;
  }
  return acc;
}

Elem PrimePowerField::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Elem>(r);
}

std::vector<std::uint32_t> PrimePowerField::coords(Elem a) const {
  std::vector<std::uint32_t> c(m_, 0);
  for (std::uint32_t i = 0; i < m_; ++i) {
    c[i] = a % p_;
    a /= p_;
  }
  return c;
}

Elem PrimePowerField::from_coords(std::span<const std::uint32_t> c) const {
  Elem out = 0;
  Elem w = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    if (i < c.size()) out += (c[i] % p_) * w;
    w *= p_;
  }
  return out;
}

std::uint32_t PrimePowerField::trace_to_prime(Elem a) const {
  Elem t = 0;
  Elem x = a;
  for (std::uint32_t i = 0; i < m_; ++i) {
    t = add(t, x);
    x = frobenius(x);
  }
  return t;  // lies in the prime field, encoded as an integer < p
}

std::uint64_t PrimePowerField::multiplicative_order(Elem a) const {
  if (a == 0) throw FieldError("zero has no multiplicative order");
  std::uint64_t ord = q_ - 1;
  for (auto r : prime_factors(q_ - 1)) {
    while (ord % r == 0 && pow(a, ord / r) == 1) ord /= r;
  }
  return ord;
}

void PrimePowerField::axpy(std::span<Elem> y, Elem a, std::span<const Elem> x) const {
  if (a == 0) return;
  const std::size_t n = y.size();
  if (m_ == 1) {
    const std::uint64_t p = p_;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] != 0) y[i] = static_cast<Elem>((y[i] + std::uint64_t{a} * x[i]) % p);
    }
    return;
  }
  if (!exp_.empty()) {
    const std::uint32_t la = log_[a];
    if (p_ == 2) {
      for (std::size_t i = 0; i < n; ++i)
        if (x[i] != 0) y[i] ^= exp_[la + log_[x[i]]];
    } else {
      for (std::size_t i = 0; i < n; ++i)
        if (x[i] != 0) y[i] = add(y[i], exp_[la + log_[x[i]]]);
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] != 0) y[i] = add(y[i], mul(a, x[i]));
}

void PrimePowerField::scale(std::span<Elem> y, Elem a) const {
  for (auto& v : y) v = mul(a, v);
}

nlohmann::json PrimePowerField::descriptor() const {
  return nlohmann::json{{"char", p_}, {"degree", m_}, {"modulus", modulus_}};
}

FieldPtr make_field(std::uint32_t characteristic, std::uint32_t degree) {
  if (!is_prime(characteristic)) throw FieldError("characteristic " + std::to_string(characteristic) + " is not prime");
  if (degree < 1) throw FieldError("field degree must be positive");
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, FieldPtr> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(characteristic, degree);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second;
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < degree; ++i) {
    q *= characteristic;
    if (q > PrimePowerField::kMaxOrder) throw FieldError("field order exceeds 2^20");
  }
  auto f = std::make_shared<const PrimePowerField>(characteristic, degree,
                                                   least_irreducible(characteristic, degree));
  registry.emplace(key, f);
  return f;
}

Elem primitive_root_of_unity(const PrimePowerField& field, std::uint64_t k) {
  const std::uint64_t n = field.order() - 1;
  if (k == 0 || n % k != 0)
    throw FieldError("no such root: " + std::to_string(k) + " does not divide " + std::to_string(n));
  return field.pow(field.generator(), n / k);
}

std::uint32_t splitting_degree_for_characters(std::uint32_t p, std::uint32_t l) {
  if (p == l) throw FieldError("coefficient characteristic equals group characteristic");
  if (!is_prime(p) || !is_prime(l)) throw FieldError("splitting degree needs two primes");
  std::uint64_t x = l % p;
  std::uint32_t m = 1;
  while (x != 1 % p) {
    x = (x * l) % p;
    ++m;
  }
  return m;
}

CoefficientField coefficient_field_for(std::uint32_t p, std::uint32_t l) {
  CoefficientField c;
  c.l = l;
  c.m = splitting_degree_for_characters(p, l);
  c.field = make_field(l, c.m);
  return c;
}

FieldEmbedding::FieldEmbedding(FieldPtr small, FieldPtr large)
    : small_(std::move(small)), large_(std::move(large)) {
  if (small_->characteristic() != large_->characteristic() ||
      large_->degree() % small_->degree() != 0)
    throw FieldError("no embedding between these fields");
  const auto& f = small_->modulus();
  Elem root = 0;
  bool found = false;
  for (Elem a = 0; a < large_->order() && !found; ++a) {
    Elem v = 0;
    for (std::size_t i = f.size(); i-- > 0;) v = large_->add(large_->mul(v, a), large_->from_int(f[i]));
    if (v == 0) {
      root = a;
      found = true;
    }
  }
  if (!found) throw FieldError("modulus has no root in the extension");
  image_.resize(small_->order());
  for (Elem a = 0; a < small_->order(); ++a) {
    auto c = small_->coords(a);
    Elem v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = large_->add(large_->mul(v, root), large_->from_int(c[i]));
    image_[a] = v;
  }
}

}  // namespace ulab
