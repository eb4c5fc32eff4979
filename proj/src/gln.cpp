#include "unipotent_lab/gln.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "unipotent_lab/errors.hpp"

namespace ulab {

std::vector<Composition> standard_parabolics(int n) {
  if (n < 1) throw std::invalid_argument("standard_parabolics needs n >= 1");
  std::vector<Composition> out;
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    Composition c;
    int run = 1;
    for (int i = 0; i < n - 1; ++i) {
      if (mask & (1u << i)) {
        c.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    c.push_back(run);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Composition& a, const Composition& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a > b;
  });
  return out;
}

std::uint64_t gl_order(int n, std::uint64_t q) {
  unsigned __int128 order = 1;
  unsigned __int128 qn = 1;
  for (int i = 0; i < n; ++i) qn *= q;
  unsigned __int128 qi = 1;
  for (int i = 0; i < n; ++i) {
    order *= (qn - qi);
    qi *= q;
    if (order > static_cast<unsigned __int128>(UINT64_MAX)) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(order);
}

std::vector<Matrix> enumerate_group(int n, const FieldPtr& fq, std::uint64_t bound) {
  if (n < 1 || n > 4) throw ScaleError("GL_n enumeration supports 1 <= n <= 4", static_cast<std::uint64_t>(n));
  const std::uint64_t q = fq->order();
  const std::uint64_t order = gl_order(n, q);
  if (order > bound)
    throw ScaleError("|GL_" + std::to_string(n) + "(F_" + std::to_string(q) + ")| exceeds bound " +
                         std::to_string(bound),
                     order);
  std::uint64_t rows_total = 1;
  for (int i = 0; i < n; ++i) rows_total *= q;

  std::vector<Matrix> out;
  out.reserve(order);
  std::vector<Vec> chosen;
  std::function<void(const Echelon&)> rec = [&](const Echelon& span) {
    if (static_cast<int>(chosen.size()) == n) {
      out.push_back(Matrix::from_rows(fq, chosen, static_cast<std::size_t>(n)));
      return;
    }
    for (std::uint64_t code = 0; code < rows_total; ++code) {
      Vec v(static_cast<std::size_t>(n));
      std::uint64_t c = code;
      for (int j = n - 1; j >= 0; --j) {
        v[static_cast<std::size_t>(j)] = static_cast<Elem>(c % q);
        c /= q;
      }
      Echelon next = span;
      if (!next.insert(v)) continue;
      chosen.push_back(v);
      rec(next);
      chosen.pop_back();
    }
  };
  rec(Echelon(fq, static_cast<std::size_t>(n)));
  return out;
}

GLGroup::GLGroup(int n, FieldPtr fq, std::uint64_t bound) : n_(n), fq_(std::move(fq)) {
  elements_ = enumerate_group(n_, fq_, bound);
  const auto nn = static_cast<std::size_t>(n_);
  std::uint64_t cap = 1;
  for (std::size_t i = 0; i < nn * nn; ++i) {
    if (cap > (UINT64_MAX / fq_->order())) throw ScaleError("matrix key does not fit 64 bits", cap);
    cap *= fq_->order();
  }
  index_.reserve(elements_.size() * 2);
  for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(key(elements_[i]), static_cast<std::uint32_t>(i));
  identity_index_ = index_of(Matrix::identity(fq_, nn));

  if (fq_->generator() != 1) {
    Matrix d = Matrix::identity(fq_, nn);
    d(0, 0) = fq_->generator();
    gens_.push_back(d);
    gen_names_.push_back("diag");
  }
  if (n_ > 1) {
    Matrix c(fq_, nn, nn);
    for (std::size_t j = 0; j < nn; ++j) c((j + 1) % nn, j) = 1;
    gens_.push_back(c);
    gen_names_.push_back("cycle");
    Matrix t = Matrix::identity(fq_, nn);
    t(0, 1) = 1;
    gens_.push_back(t);
    gen_names_.push_back("transvection");
  }

  parent_.assign(elements_.size(), UINT32_MAX);
  parent_gen_.assign(elements_.size(), 0);
  std::vector<std::uint32_t> depth(elements_.size(), 0);
  std::deque<std::uint32_t> queue;
  parent_[identity_index_] = static_cast<std::uint32_t>(identity_index_);
  queue.push_back(static_cast<std::uint32_t>(identity_index_));
  std::size_t reached = 1;
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    bfs_order_.push_back(x);
    for (std::size_t k = 0; k < gens_.size(); ++k) {
      auto y = static_cast<std::uint32_t>(index_of(gens_[k] * elements_[x]));
      if (parent_[y] != UINT32_MAX) continue;
      parent_[y] = x;
      parent_gen_[y] = static_cast<std::uint8_t>(k);
      depth[y] = depth[x] + 1;
      max_bfs_depth_ = std::max<std::size_t>(max_bfs_depth_, depth[y]);
      ++reached;
      queue.push_back(y);
    }
  }
  if (reached != elements_.size()) throw Error("generators do not generate GL_n(F_q)");
}

std::uint64_t GLGroup::key(const Matrix& g) const {
  std::uint64_t k = 0;
  for (Elem e : g.data()) k = k * fq_->order() + e;
  return k;
}

std::size_t GLGroup::index_of(const Matrix& g) const {
  auto it = index_.find(key(g));
  if (it == index_.end()) throw std::invalid_argument("matrix is not an element of the group");
  return it->second;
}

Word GLGroup::bfs_word(std::size_t i) const {
  Word w;
  while (i != identity_index_) {
    w.push_back(parent_gen_[i]);
    i = parent_[i];
  }
  return w;
}

Matrix GLGroup::evaluate(const Word& w) const {
  Matrix acc = Matrix::identity(fq_, static_cast<std::size_t>(n_));
  for (auto k : w) acc = acc * gens_.at(k);
  return acc;
}

std::size_t GLGroup::word_length_bound() const {
  return static_cast<std::size_t>(n_ * n_ + n_) * max_bfs_depth_;
}

Word GLGroup::factor_into_generators(const Matrix& g) const {
  const auto nn = static_cast<std::size_t>(n_);
  const auto& f = *fq_;
  Matrix a = g;
  std::vector<Matrix> inverse_ops;  // E_1^{-1}, E_2^{-1}, ...
  auto transvection = [&](std::size_t i, std::size_t j, Elem c) {
    Matrix t = Matrix::identity(fq_, nn);
    t(i, j) = c;
    return t;
  };
  for (std::size_t c = 0; c < nn; ++c) {
    if (a(c, c) == 0) {
      std::size_t r = c + 1;
      while (r < nn && a(r, c) == 0) ++r;
      if (r == nn) throw std::invalid_argument("factor_into_generators: singular matrix");
      f.axpy(a.row(c), 1, a.row(r));
      inverse_ops.push_back(transvection(c, r, f.neg(1)));
    }
    Elem piv = a(c, c);
    if (piv != 1) {
      f.scale(a.row(c), f.inv(piv));
      Matrix d = Matrix::identity(fq_, nn);
      d(c, c) = piv;
      inverse_ops.push_back(d);
    }
    for (std::size_t r = 0; r < nn; ++r) {
      if (r == c || a(r, c) == 0) continue;
      Elem m = a(r, c);
      f.axpy(a.row(r), f.neg(m), a.row(c));
      inverse_ops.push_back(transvection(r, c, m));
    }
  }
  Word out;
  for (const auto& e : inverse_ops) {
    auto w = bfs_word(index_of(e));
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

StandardParabolic::StandardParabolic(Composition c) : comp_(std::move(c)) {
  for (std::size_t b = 0; b < comp_.size(); ++b) {
    if (comp_[b] < 1) throw std::invalid_argument("composition parts must be positive");
    for (int i = 0; i < comp_[b]; ++i) block_.push_back(static_cast<int>(b));
  }
}

bool StandardParabolic::contains(const Matrix& g) const {
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j)
      if (block_[i] > block_[j] && g(i, j) != 0) return false;
  return true;
}

bool StandardParabolic::in_levi(const Matrix& g) const {
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j)
      if (block_[i] != block_[j] && g(i, j) != 0) return false;
  return true;
}

std::vector<std::pair<int, int>> StandardParabolic::simple_root_coords() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i + 1 < n(); ++i)
    if (block_[i] == block_[i + 1]) out.emplace_back(i, i + 1);
  return out;
}

std::vector<std::pair<int, int>> StandardParabolic::non_simple_root_coords() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n(); ++i)
    for (int j = i + 2; j < n(); ++j)
      if (block_[i] == block_[j]) out.emplace_back(i, j);
  return out;
}

int StandardParabolic::radical_dim() const {
  int d = 0;
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j)
      if (block_[i] < block_[j]) ++d;
  return d;
}

std::uint64_t StandardParabolic::levi_order(std::uint64_t q) const {
  std::uint64_t o = 1;
  for (int part : comp_) o *= gl_order(part, q);
  return o;
}

std::uint64_t StandardParabolic::order(std::uint64_t q) const {
  std::uint64_t o = levi_order(q);
  for (int i = 0; i < radical_dim(); ++i) o *= q;
  return o;
}

std::string StandardParabolic::name() const {
  std::string s = "P(";
  for (std::size_t i = 0; i < comp_.size(); ++i) s += (i ? "," : "") + std::to_string(comp_[i]);
  return s + ")";
}

Matrix block_permutation(const Composition& alpha, const Composition& beta, const FieldPtr& fq) {
  Composition sa = alpha;
  Composition sb = beta;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) throw std::invalid_argument("compositions are not rearrangements of each other");
  const int n = std::accumulate(alpha.begin(), alpha.end(), 0);
  std::vector<int> start_a(alpha.size()), start_b(beta.size());
  for (std::size_t i = 1; i < alpha.size(); ++i) start_a[i] = start_a[i - 1] + alpha[i - 1];
  for (std::size_t i = 1; i < beta.size(); ++i) start_b[i] = start_b[i - 1] + beta[i - 1];
  std::vector<bool> used(beta.size(), false);
  Matrix w(fq, static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    std::size_t j = 0;
    while (used[j] || beta[j] != alpha[i]) ++j;
    used[j] = true;
    for (int t = 0; t < alpha[i]; ++t) w(static_cast<std::size_t>(start_b[j] + t), static_cast<std::size_t>(start_a[i] + t)) = 1;
  }
  return w;
}

CosetTable::CosetTable(std::string subgroup, std::vector<Matrix> reps, KeyFn key)
    : subgroup_(std::move(subgroup)), reps_(std::move(reps)), key_(std::move(key)) {
  for (std::size_t i = 0; i < reps_.size(); ++i) {
    auto inv = inverse(reps_[i]);
    if (!inv) throw std::invalid_argument("coset representative is singular");
    rep_inv_.push_back(*inv);
    by_key_.emplace(key_(reps_[i]), i);
  }
}

std::size_t CosetTable::locate(const Matrix& g) const {
  auto it = by_key_.find(key_(g));
  if (it == by_key_.end()) throw std::logic_error("element outside the tabulated cosets");
  return it->second;
}

std::string parabolic_coset_key(const Matrix& g, const Composition& c) {
  std::string key;
  std::size_t k = 0;
  for (std::size_t b = 0; b + 1 < c.size(); ++b) {
    k += static_cast<std::size_t>(c[b]);
    Matrix cols(g.field(), k, g.rows());
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < g.rows(); ++i) cols(j, i) = g(i, j);
    rref_in_place(cols);
    for (Elem e : cols.data()) {
      key.append(reinterpret_cast<const char*>(&e), sizeof(Elem));
    }
  }
  return key;
}

Matrix unipotent_coset_rep(const Matrix& g) {
  const auto& f = *g.field();
  const std::size_t n = g.rows();
  Matrix rep = g;
  std::vector<std::size_t> piv(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      Elem e = rep(piv[i], j);
      if (e == 0) continue;
      Elem c = f.div(e, rep(piv[i], i));
      for (std::size_t r = 0; r < n; ++r) rep(r, j) = f.sub(rep(r, j), f.mul(c, rep(r, i)));
    }
    std::size_t r = 0;
    while (r < n && rep(r, j) == 0) ++r;
    if (r == n) throw std::invalid_argument("unipotent_coset_rep: singular matrix");
    piv[j] = r;
  }
  return rep;
}

namespace {

std::string matrix_bytes(const Matrix& m) {
  return std::string(reinterpret_cast<const char*>(m.data().data()), m.data().size() * sizeof(Elem));
}

}  // namespace

CosetTable coset_transversal(const GLGroup& g, const StandardParabolic& p) {
  const Composition comp = p.composition();
  auto keyfn = [comp](const Matrix& x) { return parabolic_coset_key(x, comp); };
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<Matrix> reps;
  for (const auto& x : g.elements()) {
    auto k = keyfn(x);
    if (seen.emplace(k, reps.size()).second) reps.push_back(x);
  }
  return CosetTable(p.name(), std::move(reps), keyfn);
}

CosetTable unipotent_transversal(const GLGroup& g) {
  auto keyfn = [](const Matrix& x) { return matrix_bytes(unipotent_coset_rep(x)); };
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<Matrix> reps;
  for (const auto& x : g.elements()) {
    Matrix r = unipotent_coset_rep(x);
    if (seen.emplace(matrix_bytes(r), reps.size()).second) reps.push_back(r);
  }
  return CosetTable("U", std::move(reps), keyfn);
}

std::size_t count_double_cosets(const GLGroup& g, const StandardParabolic& p,
                                const StandardParabolic& q) {
  const CosetTable t = coset_transversal(g, q);
  std::vector<std::size_t> parent(t.index());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& x : g.elements()) {
    if (!p.contains(x)) continue;
    for (std::size_t i = 0; i < t.index(); ++i) {
      std::size_t j = t.locate(x * t.rep(i));
      parent[find(i)] = find(j);
    }
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < t.index(); ++i)
    if (find(i) == i) ++count;
  return count;
}

}  // namespace ulab
