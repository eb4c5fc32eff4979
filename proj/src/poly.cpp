#include "unipotent_lab/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace ulab::poly {

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly add(const PrimePowerField& f, const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = f.add(c[i], b[i]);
  trim(c);
  return c;
}

Poly sub(const PrimePowerField& f, const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = f.sub(c[i], b[i]);
  trim(c);
  return c;
}

Poly mul(const PrimePowerField& f, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    f.axpy(std::span<Elem>(c.data() + i, b.size()), a[i], b);
  }
  trim(c);
  return c;
}

std::pair<Poly, Poly> divmod(const PrimePowerField& f, const Poly& a, const Poly& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  Poly r = a;
  trim(r);
  if (r.size() < b.size()) return {{}, r};
  Poly q(r.size() - b.size() + 1, 0);
  const Elem lead_inv = f.inv(b.back());
  for (std::size_t k = r.size(); k-- >= b.size();) {
    Elem c = f.mul(r[k], lead_inv);
    const std::size_t shift = k - (b.size() - 1);
    q[shift] = c;
    if (c != 0) f.axpy(std::span<Elem>(r.data() + shift, b.size()), f.neg(c), b);
    if (k == b.size() - 1) break;
  }
  trim(q);
  trim(r);
  return {q, r};
}

Poly mod(const PrimePowerField& f, const Poly& a, const Poly& b) { return divmod(f, a, b).second; }

Poly monic(const PrimePowerField& f, Poly a) {
  trim(a);
  if (a.empty()) return a;
  f.scale(a, f.inv(a.back()));
  return a;
}

Poly gcd(const PrimePowerField& f, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(f, std::move(a));
}

Poly powmod(const PrimePowerField& f, Poly base, std::uint64_t e, const Poly& m) {
  Poly acc = {1};
  acc = mod(f, acc, m);
  base = mod(f, base, m);
  while (e > 0) {
    if (e & 1) acc = mod(f, mul(f, acc, base), m);
    e >>= 1;
    if (e > 0) base = mod(f, mul(f, base, base), m);
  }
  return acc;
}

Poly derivative(const PrimePowerField& f, const Poly& a) {
  if (a.size() <= 1) return {};
  Poly d(a.size() - 1, 0);
  for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = f.mul(f.from_int(static_cast<std::int64_t>(i)), a[i]);
  trim(d);
  return d;
}

Elem evaluate(const PrimePowerField& f, const Poly& a, Elem x) {
  Elem v = 0;
  for (std::size_t i = a.size(); i-- > 0;) v = f.add(f.mul(v, x), a[i]);
  return v;
}

namespace {

bool is_one(const Poly& a) { return a.size() == 1 && a[0] == 1; }

// p-th root of a polynomial whose exponents are all multiples of p.
Poly pth_root(const PrimePowerField& f, const Poly& a) {
  const std::uint32_t p = f.characteristic();
  std::uint64_t e = 1;
  for (std::uint32_t i = 1; i < f.degree(); ++i) e *= p;  // a -> a^{p^{m-1}} inverts Frobenius
  Poly r(a.size() / p + 1, 0);
  for (std::size_t i = 0; i < a.size(); i += p) r[i / p] = f.pow(a[i], e);
  trim(r);
  return r;
}

void squarefree(const PrimePowerField& f, Poly a, int mult, std::vector<std::pair<Poly, int>>& out) {
  a = monic(f, a);
  if (a.size() <= 1) return;
  Poly d = derivative(f, a);
  if (d.empty()) {
    squarefree(f, pth_root(f, a), mult * static_cast<int>(f.characteristic()), out);
    return;
  }
  Poly c = gcd(f, a, d);
  Poly w = divmod(f, a, c).first;
  int i = 1;
  while (!is_one(w)) {
    Poly y = gcd(f, w, c);
    Poly z = divmod(f, w, y).first;
    if (!is_one(z)) out.emplace_back(monic(f, z), i * mult);
    ++i;
    w = y;
    c = divmod(f, c, y).first;
  }
  if (!is_one(c)) squarefree(f, pth_root(f, c), mult * static_cast<int>(f.characteristic()), out);
}

void equal_degree(const PrimePowerField& f, const Poly& g, int d, std::mt19937_64& rng,
                  std::vector<Poly>& out) {
  const int n = degree(g);
  if (n == d) {
    out.push_back(g);
    return;
  }
  const std::uint64_t q = f.order();
  while (true) {
    Poly r(static_cast<std::size_t>(n), 0);
    for (auto& c : r) c = static_cast<Elem>(rng() % q);
    trim(r);
    if (r.size() <= 1) continue;
    Poly h;
    if (f.characteristic() == 2) {
      // Absolute trace map r + r^2 + ... + r^{2^{k d - 1}}.
      Poly t = r;
      Poly s = r;
      const std::uint64_t steps = std::uint64_t{f.degree()} * static_cast<std::uint64_t>(d);
      for (std::uint64_t i = 1; i < steps; ++i) {
        s = mod(f, mul(f, s, s), g);
        t = add(f, t, s);
      }
      h = gcd(f, g, t);
    } else {
      // r^{(q^d - 1)/2} = (r^{1 + q + ... + q^{d-1}})^{(q-1)/2}
      Poly s = mod(f, r, g);
      Poly acc = s;
      for (int i = 1; i < d; ++i) {
        s = powmod(f, s, q, g);
        acc = mod(f, mul(f, acc, s), g);
      }
      Poly t = powmod(f, acc, (q - 1) / 2, g);
      t = sub(f, t, Poly{1});
      h = gcd(f, g, t);
    }
    if (degree(h) > 0 && degree(h) < n) {
      equal_degree(f, h, d, rng, out);
      equal_degree(f, monic(f, divmod(f, g, h).first), d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<Poly, int>> factor(const PrimePowerField& f, const Poly& a, std::uint64_t seed) {
  std::vector<std::pair<Poly, int>> sqf;
  squarefree(f, a, 1, sqf);
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Poly, int>> out;
  const std::uint64_t q = f.order();
  for (auto& [part, mult] : sqf) {
    Poly g = part;
    Poly h = {0, 1};
    const Poly x = {0, 1};
    int i = 1;
    while (degree(g) >= 2 * i) {
      h = powmod(f, h, q, g);
      Poly dd = gcd(f, g, sub(f, h, x));
      if (!is_one(dd)) {
        std::vector<Poly> pieces;
        equal_degree(f, dd, i, rng, pieces);
        for (auto& pc : pieces) out.emplace_back(pc, mult);
        g = monic(f, divmod(f, g, dd).first);
        h = mod(f, h, g);
      }
      ++i;
    }
    if (degree(g) > 0) out.emplace_back(g, mult);
  }
  // merge equal factors coming from different squarefree layers
  std::sort(out.begin(), out.end(), [](const auto& u, const auto& v) {
    if (u.first.size() != v.first.size()) return u.first.size() < v.first.size();
    return u.first < v.first;
  });
  std::vector<std::pair<Poly, int>> merged;
  for (auto& e : out) {
    if (!merged.empty() && merged.back().first == e.first)
      merged.back().second += e.second;
    else
      merged.push_back(e);
  }
  return merged;
}

Poly char_poly(const Matrix& a) {
  if (!a.square()) throw std::invalid_argument("char_poly of non-square matrix");
  const auto& f = *a.field();
  const std::size_t n = a.rows();
  Matrix h = a;
  // Reduce to upper Hessenberg form by similarity.
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t i = m;
    while (i < n && h(i, m - 1) == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      std::swap_ranges(h.row(i).begin(), h.row(i).end(), h.row(m).begin());
      for (std::size_t r = 0; r < n; ++r) std::swap(h(r, i), h(r, m));
    }
    const Elem piv_inv = f.inv(h(m, m - 1));
    for (std::size_t j = m + 1; j < n; ++j) {
      Elem u = f.mul(h(j, m - 1), piv_inv);
      if (u == 0) continue;
      f.axpy(h.row(j), f.neg(u), h.row(m));
      for (std::size_t r = 0; r < n; ++r) h(r, m) = f.add(h(r, m), f.mul(u, h(r, j)));
    }
  }
  // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_{ik} (prod_{j=i+1}^{k} h_{j,j-1}) p_{i-1}
  std::vector<Poly> p(n + 1);
  p[0] = {1};
  for (std::size_t k = 1; k <= n; ++k) {
    Poly next = mul(f, Poly{f.neg(h(k - 1, k - 1)), 1}, p[k - 1]);
    Elem prod = 1;
    for (std::size_t i = k - 1; i-- > 0;) {
      prod = f.mul(prod, h(i + 1, i));
      if (prod == 0) break;
      Elem coef = f.mul(h(i, k - 1), prod);
      if (coef != 0) next = sub(f, next, mul(f, Poly{coef}, p[i]));
    }
    p[k] = next;
  }
  return p[n];
}

Matrix evaluate(const Poly& p, const Matrix& a) {
  const auto& field = a.field();
  Matrix acc(field, a.rows(), a.cols());
  for (std::size_t i = p.size(); i-- > 0;) {
    acc = acc * a;
    for (std::size_t d = 0; d < a.rows(); ++d) acc(d, d) = field->add(acc(d, d), p[i]);
  }
  return acc;
}

}  // namespace ulab::poly
