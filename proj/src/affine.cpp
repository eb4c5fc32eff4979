#include "unipotent_lab/affine.hpp"

#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "unipotent_lab/errors.hpp"

namespace ulab {

ExtAffineWeylElem ExtAffineWeylElem::identity(int n) {
  Permutation id(static_cast<std::size_t>(n));
  std::iota(id.begin(), id.end(), 0);
  return {std::vector<int>(static_cast<std::size_t>(n), 0), id};
}

ExtAffineWeylElem ExtAffineWeylElem::translation(std::vector<int> t) {
  auto w = identity(static_cast<int>(t.size()));
  w.t = std::move(t);
  return w;
}

ExtAffineWeylElem ExtAffineWeylElem::finite(Permutation sigma) {
  auto w = identity(static_cast<int>(sigma.size()));
  w.sigma = std::move(sigma);
  return w;
}

ExtAffineWeylElem ExtAffineWeylElem::operator*(const ExtAffineWeylElem& o) const {
  ExtAffineWeylElem r{t, compose(sigma, o.sigma)};
  for (std::size_t j = 0; j < o.t.size(); ++j) r.t[static_cast<std::size_t>(sigma[j])] += o.t[j];
  return r;
}

ExtAffineWeylElem ExtAffineWeylElem::inverse() const {
  ExtAffineWeylElem r{std::vector<int>(t.size()), Permutation(sigma.size())};
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const auto sj = static_cast<std::size_t>(sigma[j]);
    r.sigma[sj] = static_cast<int>(j);
    r.t[j] = -t[sj];
  }
  return r;
}

nlohmann::json ExtAffineWeylElem::to_json() const { return {{"t", t}, {"perm", sigma}}; }

std::string ExtAffineWeylElem::str() const { return to_json().dump(); }

ExtAffineWeylElem affine_simple_reflection(int n, int i) {
  if (n < 2 || i < 0 || i >= n) throw std::invalid_argument("no affine simple reflection s" + std::to_string(i));
  auto w = ExtAffineWeylElem::identity(n);
  const auto last = static_cast<std::size_t>(n - 1);
  if (i == 0) {
    std::swap(w.sigma[0], w.sigma[last]);
    w.t[0] = -1;
    w.t[last] = 1;
  } else {
    std::swap(w.sigma[static_cast<std::size_t>(i) - 1], w.sigma[static_cast<std::size_t>(i)]);
  }
  return w;
}

ExtAffineWeylElem rotation(int n) {
  auto w = ExtAffineWeylElem::identity(n);
  for (int j = 0; j < n; ++j) w.sigma[static_cast<std::size_t>(j)] = (j + n - 1) % n;
  w.t[static_cast<std::size_t>(n - 1)] = 1;
  return w;
}

int awg_length(const ExtAffineWeylElem& w) {
  const std::size_t n = w.t.size();
  Permutation inv(n);
  for (std::size_t j = 0; j < n; ++j) inv[static_cast<std::size_t>(w.sigma[j])] = static_cast<int>(j);
  int len = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) len += std::abs(w.t[a] - w.t[b] + (inv[a] > inv[b] ? 1 : 0));
  return len;
}

std::vector<ExtAffineWeylElem> box_elements(int n, int lo, int hi) {
  std::vector<ExtAffineWeylElem> out;
  const auto perms = symmetric_group(n);
  std::vector<int> t(static_cast<std::size_t>(n), lo);
  while (true) {
    for (const auto& s : perms) out.push_back({t, s});
    std::size_t k = 0;
    while (k < t.size() && t[k] == hi) t[k++] = lo;
    if (k == t.size()) break;
    ++t[k];
  }
  return out;
}

LengthCheck cross_validate_lengths(int n, int box, int padding) {
  const int bound = box + padding;
  auto inside = [&](const ExtAffineWeylElem& w) {
    for (int x : w.t)
      if (x < -bound || x > bound) return false;
    return true;
  };
  std::vector<std::pair<ExtAffineWeylElem, int>> moves;
  for (int i = 0; i < n; ++i) moves.emplace_back(affine_simple_reflection(n, i), 1);
  moves.emplace_back(rotation(n), 0);
  moves.emplace_back(rotation(n).inverse(), 0);

  std::map<ExtAffineWeylElem, int> dist;
  std::deque<ExtAffineWeylElem> dq;
  dist[ExtAffineWeylElem::identity(n)] = 0;
  dq.push_back(ExtAffineWeylElem::identity(n));
  while (!dq.empty()) {
    auto x = dq.front();
    dq.pop_front();
    const int dx = dist[x];
    for (const auto& [s, cost] : moves) {
      auto y = x * s;
      if (!inside(y)) continue;
      auto it = dist.find(y);
      if (it != dist.end() && it->second <= dx + cost) continue;
      dist[y] = dx + cost;
      if (cost == 0)
        dq.push_front(y);
      else
        dq.push_back(y);
    }
  }
  LengthCheck rep;
  for (const auto& w : box_elements(n, -box, box)) {
    ++rep.checked;
    auto it = dist.find(w);
    if (it == dist.end()) {
      rep.bfs_bound_exceeded = true;
      continue;
    }
    if (it->second != awg_length(w)) rep.mismatches.push_back(w);
  }
  return rep;
}

CosetFactorization min_coset_factorization(const ExtAffineWeylElem& w) {
  std::optional<ExtAffineWeylElem> best;
  Permutation best_f;
  bool tie = false;
  for (const auto& s : symmetric_group(w.n())) {
    auto fs = ExtAffineWeylElem::finite(s);
    auto x = fs * w;
    const int lx = awg_length(x);
    if (!best || lx < awg_length(*best)) {
      best = x;
      best_f = fs.inverse().sigma;
      tie = false;
    } else if (lx == awg_length(*best)) {
      tie = true;
    }
  }
  if (tie) throw std::logic_error("coset of " + w.str() + " has two minimal elements");
  return {best_f, *best};
}

bool is_minimal_in_coset(const ExtAffineWeylElem& w) { return min_coset_factorization(w).w0 == w; }

std::vector<Composition> standard_parahoric_labels(int n) { return standard_parabolics(n); }

std::vector<ExtAffineWeylElem> admissible_minimal_elements(int n, int m) {
  std::vector<ExtAffineWeylElem> out;
  for (auto& w : box_elements(n, 0, m - 1))
    if (is_minimal_in_coset(w)) out.push_back(std::move(w));
  return out;
}

TruncatedGroup::TruncatedGroup(int n, FieldPtr fq, int m) : n_(n), fq_(std::move(fq)), m_(m) {
  if (n < 1 || m < 1) throw std::invalid_argument("truncated group needs n, m >= 1");
  long double keys = 1;
  for (int k = 0; k < n * n * m; ++k) keys *= static_cast<long double>(fq_->order());
  if (keys > 1.8e19L) throw ScaleError("truncated matrices do not fit a 64-bit key", static_cast<std::uint64_t>(-1));
}

TruncatedGroup::Mat TruncatedGroup::identity() const {
  Mat a(static_cast<std::size_t>(n_ * n_ * m_), 0);
  for (int i = 0; i < n_; ++i) a[static_cast<std::size_t>((i * n_ + i) * m_)] = 1;
  return a;
}

TruncatedGroup::Mat TruncatedGroup::mul(const Mat& a, const Mat& b) const {
  const auto& f = *fq_;
  Mat c(a.size(), 0);
  auto at = [this](int i, int j, int k) { return static_cast<std::size_t>((i * n_ + j) * m_ + k); };
  for (int i = 0; i < n_; ++i)
    for (int l = 0; l < n_; ++l)
      for (int ka = 0; ka < m_; ++ka) {
        const Elem x = a[at(i, l, ka)];
        if (x == 0) continue;
        for (int j = 0; j < n_; ++j)
          for (int kb = 0; ka + kb < m_; ++kb) {
            const Elem y = b[at(l, j, kb)];
            if (y != 0) c[at(i, j, ka + kb)] = f.add(c[at(i, j, ka + kb)], f.mul(x, y));
          }
      }
  return c;
}

Matrix TruncatedGroup::reduce(const Mat& a) const {
  const auto n = static_cast<std::size_t>(n_);
  Matrix r(fq_, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = a[(i * n + j) * static_cast<std::size_t>(m_)];
  return r;
}

TruncatedGroup::Mat TruncatedGroup::from_matrix(const Matrix& c) const {
  Mat a(static_cast<std::size_t>(n_ * n_ * m_), 0);
  const auto n = static_cast<std::size_t>(n_);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[(i * n + j) * static_cast<std::size_t>(m_)] = c(i, j);
  return a;
}

bool TruncatedGroup::invertible(const Mat& a) const { return ulab::inverse(reduce(a)).has_value(); }

TruncatedGroup::Mat TruncatedGroup::inverse(const Mat& a) const {
  auto r = ulab::inverse(reduce(a));
  if (!r) throw std::invalid_argument("matrix is not invertible mod t");
  Mat x = from_matrix(*r);
  // Newton step x <- x (2 - a x) doubles the t-adic precision
  const auto& f = *fq_;
  for (int prec = 1; prec < m_; prec *= 2) {
    Mat ax = mul(a, x);
    for (auto& e : ax) e = f.neg(e);
    Mat two = identity();
    for (std::size_t k = 0; k < two.size(); ++k) ax[k] = f.add(ax[k], f.add(two[k], two[k]));
    x = mul(x, ax);
  }
  return x;
}

bool TruncatedGroup::in_iwahori(const Mat& a) const {
  Matrix r = reduce(a);
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (r(i, j) != 0) return false;
  return ulab::inverse(r).has_value();
}

bool TruncatedGroup::in_kplus(const Mat& a) const { return reduce(a).is_identity(); }

std::uint64_t TruncatedGroup::key(const Mat& a) const {
  std::uint64_t k = 0;
  for (Elem e : a) k = k * fq_->order() + e;
  return k;
}

TruncatedGroup::Mat TruncatedGroup::from_weyl(const ExtAffineWeylElem& w) const {
  if (w.n() != n_) throw std::invalid_argument("rank mismatch for " + w.str());
  Mat a(static_cast<std::size_t>(n_ * n_ * m_), 0);
  for (int j = 0; j < n_; ++j) {
    const int i = w.sigma[static_cast<std::size_t>(j)];
    const int e = w.t[static_cast<std::size_t>(i)];
    if (e < 0 || e >= m_)
      throw std::invalid_argument("exponent " + std::to_string(e) + " of " + w.str() + " outside [0, m-1]");
    a[static_cast<std::size_t>((i * n_ + j) * m_ + e)] = 1;
  }
  return a;
}

std::uint64_t TruncatedGroup::order() const {
  std::uint64_t o = gl_order(n_, fq_->order());
  for (int k = 0; k < (m_ - 1) * n_ * n_; ++k) o *= fq_->order();
  return o;
}

namespace {

// F_p-basis of F_q as packed elements: p^0, p^1, ...
std::vector<Elem> additive_basis(const PrimePowerField& f) {
  std::vector<Elem> out;
  Elem c = 1;
  for (std::uint32_t s = 0; s < f.degree(); ++s, c *= f.characteristic()) out.push_back(c);
  return out;
}

Elem primitive_element(const PrimePowerField& f) {
  for (Elem x = 1; x < f.order(); ++x)
    if (f.multiplicative_order(x) == f.order() - 1) return x;
  return 1;
}

}  // namespace

std::vector<TruncatedGroup::Mat> TruncatedGroup::kplus_generators() const {
  std::vector<Mat> out;
  for (int k = 1; k < m_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (Elem c : additive_basis(*fq_)) {
          Mat a = identity();
          auto& slot = a[static_cast<std::size_t>((i * n_ + j) * m_ + k)];
          slot = fq_->add(slot, c);
          out.push_back(std::move(a));
        }
  return out;
}

std::vector<TruncatedGroup::Mat> TruncatedGroup::iwahori_generators() const {
  auto out = kplus_generators();
  const auto n = static_cast<std::size_t>(n_);
  if (fq_->order() > 2) {
    const Elem z = primitive_element(*fq_);
    for (std::size_t i = 0; i < n; ++i) {
      Matrix d = Matrix::identity(fq_, n);
      d(i, i) = z;
      out.push_back(from_matrix(d));
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (Elem c : additive_basis(*fq_)) {
        Matrix u = Matrix::identity(fq_, n);
        u(i, j) = c;
        out.push_back(from_matrix(u));
      }
  return out;
}

std::vector<TruncatedGroup::Mat> TruncatedGroup::group_generators() const {
  auto out = kplus_generators();
  const auto n = static_cast<std::size_t>(n_);
  if (fq_->order() > 2) {
    Matrix d = Matrix::identity(fq_, n);
    d(0, 0) = primitive_element(*fq_);
    out.push_back(from_matrix(d));
  }
  if (n > 1) {
    Matrix c(fq_, n, n);
    for (std::size_t j = 0; j < n; ++j) c((j + 1) % n, j) = 1;
    out.push_back(from_matrix(c));
    Matrix u = Matrix::identity(fq_, n);
    u(0, 1) = 1;
    out.push_back(from_matrix(u));
  }
  return out;
}

std::vector<TruncatedGroup::Mat> TruncatedGroup::closure(const std::vector<Mat>& gens, std::uint64_t bound) const {
  std::unordered_set<std::uint64_t> seen;
  std::vector<Mat> out{identity()};
  seen.insert(key(out[0]));
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& g : gens) {
      Mat y = mul(g, out[i]);
      if (seen.insert(key(y)).second) {
        if (out.size() >= bound) throw ScaleError("subgroup exceeds " + std::to_string(bound) + " elements", out.size() + 1);
        out.push_back(std::move(y));
      }
    }
  }
  return out;
}

std::unordered_set<std::uint64_t> TruncatedGroup::double_orbit(const Mat& x, const std::vector<Mat>& left,
                                                               const std::vector<Mat>& right, std::uint64_t bound) const {
  std::unordered_set<std::uint64_t> seen{key(x)};
  std::vector<Mat> queue{x};
  auto visit = [&](Mat y) {
    if (seen.insert(key(y)).second) {
      if (seen.size() > bound) throw ScaleError("double coset exceeds " + std::to_string(bound) + " elements", seen.size());
      queue.push_back(std::move(y));
    }
  };
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& g : left) visit(mul(g, queue[i]));
    for (const auto& g : right) visit(mul(queue[i], g));
  }
  return seen;
}

SetIdentityReport shadow_set_identity(const TruncatedGroup& g, const ExtAffineWeylElem& w0, std::uint64_t bound) {
  if (!is_minimal_in_coset(w0)) throw std::invalid_argument(w0.str() + " is not minimal in its W_f coset");
  const auto x = g.from_weyl(w0);
  const auto iwa = g.iwahori_generators();
  auto iwi = g.double_orbit(x, iwa, iwa, bound);
  auto kwi = g.double_orbit(x, g.kplus_generators(), iwa, bound);
  return {w0, iwi == kwi, iwi.size(), kwi.size()};
}

IndexReport index_invertibility_check(const TruncatedGroup& g, const ExtAffineWeylElem& w,
                                      const TruncatedGroup::Mat& i, std::uint64_t bound) {
  if (!g.in_iwahori(i)) throw std::invalid_argument("index check needs i in the Iwahori");
  const auto x = g.mul(i, g.from_weyl(w));
  const auto xi = g.double_orbit(x, {}, g.iwahori_generators(), bound);
  const auto kplus = g.closure(g.kplus_generators(), bound);
  std::uint64_t stab = 0;
  for (const auto& k : kplus)
    if (xi.count(g.key(g.mul(k, x)))) ++stab;
  IndexReport rep;
  rep.index = kplus.size() / stab;
  std::uint64_t r = rep.index;
  const auto p = g.field()->characteristic();
  while (r % p == 0) r /= p;
  rep.p_power = r == 1 && rep.index * stab == kplus.size();
  return rep;
}

bool AffineReport::all_equal() const {
  for (const auto& r : identities)
    if (!r.equal) return false;
  return !identities.empty();
}

bool AffineReport::ok() const { return lengths.ok() && all_equal() && indices_all_p_powers; }

nlohmann::json AffineReport::to_json() const {
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& r : identities)
    ids.push_back({{"w0", r.w0.to_json()}, {"equal", r.equal}, {"sizes", {r.iwi_size, r.kwi_size}}});
  nlohmann::json mism = nlohmann::json::array();
  for (const auto& w : lengths.mismatches) mism.push_back(w.to_json());
  return {{"n", n},
          {"q", q},
          {"m", m},
          {"group_order", group_order},
          {"lengths", {{"checked", lengths.checked}, {"mismatches", mism}, {"bfs_bound_exceeded", lengths.bfs_bound_exceeded}}},
          {"identities", ids},
          {"equal", all_equal()},
          {"indices", indices},
          {"indices_all_p_powers", indices_all_p_powers}};
}

AffineReport run_affine_suite(int n, std::uint32_t q, int m, std::uint64_t seed, int samples) {
  auto pf = prime_factors(q);
  if (pf.size() != 1) throw FieldError("q = " + std::to_string(q) + " is not a prime power");
  std::uint32_t r = 0;
  for (std::uint64_t x = q; x > 1; x /= pf[0]) ++r;
  TruncatedGroup g(n, make_field(static_cast<std::uint32_t>(pf[0]), r), m);

  AffineReport rep;
  rep.n = n;
  rep.q = q;
  rep.m = m;
  rep.group_order = g.closure(g.group_generators(), kTruncatedBound).size();
  rep.lengths = cross_validate_lengths(n);
  for (const auto& w0 : admissible_minimal_elements(n, m)) rep.identities.push_back(shadow_set_identity(g, w0));

  const auto admissible = box_elements(n, 0, m - 1);
  const auto iwa = g.iwahori_generators();
  std::mt19937_64 rng(seed);
  rep.indices_all_p_powers = true;
  auto record = [&](const ExtAffineWeylElem& w, const TruncatedGroup::Mat& i) {
    auto ix = index_invertibility_check(g, w, i);
    rep.indices.push_back(ix.index);
    rep.indices_all_p_powers = rep.indices_all_p_powers && ix.p_power;
  };
  record(ExtAffineWeylElem::identity(n), g.identity());
  for (int s = 0; s < samples; ++s) {
    const auto& w = admissible[rng() % admissible.size()];
    TruncatedGroup::Mat i = g.identity();
    for (int k = 0; k < 24; ++k) i = g.mul(i, iwa[rng() % iwa.size()]);
    record(w, i);
  }
  return rep;
}

}  // namespace ulab
