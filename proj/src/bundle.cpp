#include "unipotent_lab/bundle.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "unipotent_lab/errors.hpp"

namespace ulab {

StructureConstAlgebra::StructureConstAlgebra(FieldPtr field, std::vector<std::string> labels,
                                             std::vector<std::vector<Vec>> table, Vec identity)
    : field_(std::move(field)), labels_(std::move(labels)), table_(std::move(table)), identity_(std::move(identity)) {}

Vec StructureConstAlgebra::basis_vector(std::size_t i) const {
  Vec v(dim(), 0);
  v[i] = 1;
  return v;
}

Vec StructureConstAlgebra::multiply(const Vec& a, const Vec& b) const {
  const auto& f = *field_;
  Vec out(dim(), 0);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (b[j] == 0) continue;
      f.axpy(out, f.mul(a[i], b[j]), table_[i][j]);
    }
  }
  return out;
}

bool StructureConstAlgebra::associative() const {
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j)
      for (std::size_t k = 0; k < dim(); ++k)
        if (multiply(table_[i][j], basis_vector(k)) != multiply(basis_vector(i), table_[j][k])) return false;
  return true;
}

bool StructureConstAlgebra::identity_law() const {
  for (std::size_t i = 0; i < dim(); ++i) {
    auto e = basis_vector(i);
    if (multiply(identity_, e) != e || multiply(e, identity_) != e) return false;
  }
  return true;
}

namespace {

Vec flatten(const Matrix& m) { return m.data(); }

// Coordinates in a fixed list of independent vectors, solved on their pivot columns.
class SpanSolver {
 public:
  SpanSolver(const FieldPtr& f, const std::vector<Vec>& rows, std::size_t len) : f_(f), rows_(rows) {
    Matrix b = Matrix::from_rows(f, rows, len);
    Matrix r = b;
    pivots_ = rref_in_place(r);
    if (pivots_.size() != rows.size()) throw std::logic_error("basis matrices are linearly dependent");
    Matrix sq(f, rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t k = 0; k < rows.size(); ++k) sq(i, k) = b(i, pivots_[k]);
    inv_ = *inverse(sq);
  }

  // c with c * B = y, or nullopt if y is outside the span.
  std::optional<Vec> solve(const Vec& y) const {
    const auto& f = *f_;
    const std::size_t k = rows_.size();
    Vec c(k, 0);
    for (std::size_t t = 0; t < k; ++t) {
      Elem yt = y[pivots_[t]];
      if (yt != 0) f.axpy(c, yt, inv_.row(t));
    }
    Vec back(y.size(), 0);
    for (std::size_t i = 0; i < k; ++i)
      if (c[i] != 0) f.axpy(back, c[i], rows_[i]);
    if (back != y) return std::nullopt;
    return c;
  }

 private:
  FieldPtr f_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
  Matrix inv_;
};

}  // namespace

StructureConstAlgebra algebra_from_matrices(const FieldPtr& field, std::vector<std::string> labels,
                                            const std::vector<Matrix>& basis) {
  if (basis.empty()) return StructureConstAlgebra(field, {}, {}, {});
  const std::size_t d = basis[0].rows();
  std::vector<Vec> rows;
  for (const auto& b : basis) rows.push_back(flatten(b));
  SpanSolver solver(field, rows, d * d);
  std::vector<std::vector<Vec>> table(basis.size(), std::vector<Vec>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      auto c = solver.solve(flatten(basis[i] * basis[j]));
      if (!c) throw std::logic_error("product " + labels[i] + " * " + labels[j] + " leaves the span");
      table[i][j] = std::move(*c);
    }
  }
  auto id = solver.solve(flatten(Matrix::identity(field, d)));
  if (!id) throw std::logic_error("identity is not in the span");
  return StructureConstAlgebra(field, std::move(labels), std::move(table), std::move(*id));
}

StructureConstAlgebra end_algebra(const GModule& m) {
  auto h = hom_space(m, m);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < h.dim(); ++i) labels.push_back("e" + std::to_string(i));
  return algebra_from_matrices(m.field(), std::move(labels), h.basis);
}

Permutation bruhat_cell(const Matrix& g) {
  const int n = static_cast<int>(g.rows());
  // r[i][j] = rank of rows i..n-1, columns 0..j; padded with zeros
  std::vector<std::vector<int>> r(static_cast<std::size_t>(n) + 1, std::vector<int>(static_cast<std::size_t>(n) + 1, 0));
  for (int i = n - 1; i >= 0; --i) {
    for (int j = 0; j < n; ++j) {
      Matrix sub(g.field(), static_cast<std::size_t>(n - i), static_cast<std::size_t>(j + 1));
      for (int a = i; a < n; ++a)
        for (int b = 0; b <= j; ++b) sub(static_cast<std::size_t>(a - i), static_cast<std::size_t>(b)) = g(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
      r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j) + 1] = static_cast<int>(rank(sub));
    }
  }
  Permutation w(static_cast<std::size_t>(n), -1);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      if (r[ui][uj + 1] - r[ui + 1][uj + 1] - r[ui][uj] + r[ui + 1][uj] == 1) w[uj] = i;
    }
  }
  return w;
}

int permutation_length(const Permutation& w) {
  int inv = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (w[i] > w[j]) ++inv;
  return inv;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation c(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) c[j] = a[static_cast<std::size_t>(b[j])];
  return c;
}

std::vector<Permutation> symmetric_group(int n) {
  Permutation w(static_cast<std::size_t>(n));
  std::iota(w.begin(), w.end(), 0);
  std::vector<Permutation> out;
  do out.push_back(w);
  while (std::next_permutation(w.begin(), w.end()));
  return out;
}

namespace {

std::string perm_name(const Permutation& w) {
  std::string s = "T[";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i] + 1);
  return s + "]";
}

Permutation simple_reflection(int n, int i) {
  Permutation s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), 0);
  std::swap(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(i) + 1]);
  return s;
}

}  // namespace

HeckeAlgebra hecke_algebra(const GModule& borel_permutation_module) {
  if (!borel_permutation_module.is_permutation())
    throw std::invalid_argument("hecke_algebra needs the permutation module on G/B");
  const auto& table = borel_permutation_module.induced()->table();
  const auto& fp = borel_permutation_module.field();
  HeckeAlgebra h;
  h.n = static_cast<int>(table.rep(0).rows());
  h.elements = symmetric_group(h.n);
  for (std::size_t i = 0; i < h.elements.size(); ++i) h.index[h.elements[i]] = i;
  const std::size_t d = table.index();
  h.matrices.assign(h.elements.size(), Matrix(fp, d, d));
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      h.matrices[h.index.at(bruhat_cell(table.rep_inverse(x) * table.rep(y)))](x, y) = 1;
  std::vector<std::string> labels;
  for (const auto& w : h.elements) labels.push_back(perm_name(w));
  h.algebra = algebra_from_matrices(fp, std::move(labels), h.matrices);
  return h;
}

HeckeReport verify_hecke_presentation(const HeckeAlgebra& h, std::uint32_t q) {
  HeckeReport rep;
  const auto& a = h.algebra;
  const auto& f = *a.field();
  const Elem qf = f.from_int(q);
  auto t = [&](const Permutation& w) { return a.basis_vector(h.index.at(w)); };
  for (int i = 0; i + 1 < h.n; ++i) {
    Vec ts = t(simple_reflection(h.n, i));
    // T_s^2 - (q-1) T_s - q
    Vec lhs = a.multiply(ts, ts);
    f.axpy(lhs, f.neg(f.sub(qf, 1)), ts);
    f.axpy(lhs, f.neg(qf), a.identity());
    ++rep.checked;
    if (std::any_of(lhs.begin(), lhs.end(), [](Elem e) { return e != 0; }))
      rep.failures.push_back("quadratic relation fails for s" + std::to_string(i + 1));
  }
  for (int i = 0; i + 1 < h.n; ++i) {
    for (int j = i + 1; j + 1 < h.n; ++j) {
      Vec si = t(simple_reflection(h.n, i));
      Vec sj = t(simple_reflection(h.n, j));
      ++rep.checked;
      if (j == i + 1) {
        if (a.multiply(a.multiply(si, sj), si) != a.multiply(a.multiply(sj, si), sj))
          rep.failures.push_back("braid relation fails for s" + std::to_string(i + 1) + ", s" + std::to_string(j + 1));
      } else if (a.multiply(si, sj) != a.multiply(sj, si)) {
        rep.failures.push_back("s" + std::to_string(i + 1) + " and s" + std::to_string(j + 1) + " do not commute");
      }
    }
  }
  for (const auto& u : h.elements) {
    for (const auto& w : h.elements) {
      const auto uw = compose(u, w);
      if (permutation_length(uw) != permutation_length(u) + permutation_length(w)) continue;
      ++rep.checked;
      if (a.multiply(t(u), t(w)) != t(uw))
        rep.failures.push_back(perm_name(u) + " * " + perm_name(w) + " != " + perm_name(uw));
    }
  }
  return rep;
}

std::size_t schur_dimension_oracle(int n) {
  const auto sn = symmetric_group(n);
  std::map<Permutation, std::size_t> idx;
  for (std::size_t i = 0; i < sn.size(); ++i) idx[sn[i]] = i;
  auto young = [&](const Composition& c) {
    std::vector<int> block;
    for (std::size_t b = 0; b < c.size(); ++b)
      for (int k = 0; k < c[b]; ++k) block.push_back(static_cast<int>(b));
    std::vector<Permutation> out;
    for (const auto& w : sn) {
      bool keeps = true;
      for (std::size_t j = 0; j < w.size(); ++j) keeps = keeps && block[j] == block[static_cast<std::size_t>(w[j])];
      if (keeps) out.push_back(w);
    }
    return out;
  };
  auto inverse_perm = [](const Permutation& w) {
    Permutation v(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) v[static_cast<std::size_t>(w[j])] = static_cast<int>(j);
    return v;
  };
  std::size_t total = 0;
  for (const auto& alpha : standard_parabolics(n)) {
    for (const auto& beta : standard_parabolics(n)) {
      auto wa = young(alpha), wb = young(beta);
      std::vector<bool> seen(sn.size(), false);
      for (std::size_t i = 0; i < sn.size(); ++i) {
        if (seen[i]) continue;
        ++total;
        for (const auto& a : wa)
          for (const auto& b : wb) seen[idx[compose(compose(a, sn[i]), inverse_perm(b))]] = true;
      }
    }
  }
  return total;
}

Matrix group_algebra_action(const std::vector<Matrix>& actions, std::span<const Elem> z, const FieldPtr& field) {
  const std::size_t d = actions.empty() ? 0 : actions[0].rows();
  Matrix out(field, d, d);
  for (std::size_t g = 0; g < actions.size(); ++g)
    if (z[g] != 0) out.add_scaled(z[g], actions[g]);
  return out;
}

AnnihilatorData compute_annihilator(const GLGroup& g, const GModule& m, std::uint64_t bound) {
  if (g.order() > bound) throw ScaleError("annihilator needs |G| <= " + std::to_string(bound), g.order());
  const auto& fp = m.field();
  const std::size_t d = m.dim();
  AnnihilatorData a;
  a.group_order = g.order();
  auto actions = all_actions(g, m);
  Matrix big(fp, g.order(), d * d);
  for (std::size_t i = 0; i < g.order(); ++i)
    std::copy(actions[i].data().begin(), actions[i].data().end(), big.row(i).begin());
  Matrix r = big;
  auto piv = rref_in_place(r);
  a.image_dim = piv.size();
  a.image_basis = Matrix(fp, a.image_dim, d * d);
  for (std::size_t i = 0; i < a.image_dim; ++i) std::copy(r.row(i).begin(), r.row(i).end(), a.image_basis.row(i).begin());
  a.ideal_basis = left_null_space(big);
  a.ideal_dim = a.ideal_basis.rows();

  // closure of the image under products, on a deterministic sample of pairs
  Echelon span(fp, d * d);
  for (std::size_t i = 0; i < a.image_dim; ++i) span.insert(Vec(a.image_basis.row(i).begin(), a.image_basis.row(i).end()));
  a.closed_under_products = true;
  std::mt19937_64 rng(a.group_order);
  const std::size_t pairs = std::min<std::size_t>(64, a.image_dim * a.image_dim);
  for (std::size_t t = 0; t < pairs && a.image_dim > 0; ++t) {
    Matrix x(fp, d, d), y(fp, d, d);
    auto rx = a.image_basis.row(rng() % a.image_dim);
    auto ry = a.image_basis.row(rng() % a.image_dim);
    std::copy(rx.begin(), rx.end(), x.data().begin());
    std::copy(ry.begin(), ry.end(), y.data().begin());
    if (!span.contains((x * y).data())) a.closed_under_products = false;
  }
  return a;
}

std::size_t GeneratorBundle::gamma_dim() const {
  std::size_t d = 0;
  for (const auto& s : gamma) d += s.module.dim();
  return d;
}

std::size_t GeneratorBundle::q_dim() const {
  std::size_t d = 0;
  for (const auto& s : gamma) d += s.quotient.dim();
  return d;
}

nlohmann::json GeneratorBundle::dims_json() const {
  return {{"P", P.dim()},
          {"V", V.dim()},
          {"Gamma", gamma_dim()},
          {"Gamma_summands", gamma.size()},
          {"I", annihilator.ideal_dim},
          {"image", annihilator.image_dim},
          {"Q", q_dim()},
          {"field", coeffs->descriptor()}};
}

GeneratorBundle build_bundle(int n, std::uint32_t q, std::uint32_t l, const BundleOptions& opt) {
  auto pf = prime_factors(q);
  if (pf.size() != 1) throw FieldError("q = " + std::to_string(q) + " is not a prime power");
  const auto p = static_cast<std::uint32_t>(pf[0]);
  std::uint32_t r = 0;
  for (std::uint64_t x = q; x > 1; x /= p) ++r;
  if (!is_prime(l) || l == p) throw FieldError("l must be a prime different from p");

  GeneratorBundle b;
  b.n = n;
  b.q = q;
  b.l = l;
  b.field_degree = opt.field_degree ? opt.field_degree : splitting_degree_for_characters(p, l);
  b.coeffs = make_field(l, b.field_degree);
  auto group = std::make_shared<GLGroup>(n, make_field(p, r), opt.group_bound);
  b.group = group;
  const GLGroup& g = *group;

  b.P = permutation_module(g, StandardParabolic(Composition(static_cast<std::size_t>(n), 1)), b.coeffs);
  for (const auto& c : standard_parabolics(n)) {
    b.v_index.push_back(c);
    b.v_summands.push_back(permutation_module(g, StandardParabolic(c), b.coeffs));
  }
  b.V = direct_sum(b.v_summands, b.coeffs, g.generators().size());
  b.V.set_label("V_f");

  auto table = std::make_shared<const CosetTable>(unipotent_transversal(g));
  const std::size_t cyclic = table->locate(g.identity());
  for (const auto& c : standard_parabolics(n)) {
    for (const auto& chi : character_set(StandardParabolic(c), *g.field())) {
      GammaSummand s{chi, induce_character_module(g, chi, b.coeffs, table), cyclic, {}, Echelon(b.coeffs, 0), {}};
      s.images.reserve(g.order());
      for (const auto& x : g.elements()) s.images.push_back(s.module.induced()->image(x));
      b.gamma.push_back(std::move(s));
    }
  }
  b.annihilator = compute_annihilator(g, b.P, opt.annihilator_bound);
  build_Q(b);
  return b;
}

void build_Q(GeneratorBundle& b) {
  const auto& f = *b.coeffs;
  const auto& z = b.annihilator.ideal_basis;
  for (auto& s : b.gamma) {
    const std::size_t d = s.module.dim();
    Echelon sub(b.coeffs, d);
    for (std::size_t k = 0; k < z.rows() && !sub.full(); ++k) {
      Vec v(d, 0);
      for (std::size_t gi = 0; gi < z.cols(); ++gi) {
        Elem c = z(k, gi);
        if (c == 0) continue;
        const auto& img = s.images[gi];
        auto j = img.image[s.cyclic_index];
        v[j] = f.add(v[j], f.mul(c, img.scalar[s.cyclic_index]));
      }
      sub.insert(std::move(v));
    }
    s.quotient = quotient_module(s.module, sub);
    s.ideal_image = std::move(sub);
  }
}

std::vector<Matrix> unipotent_generators(const GLGroup& g) {
  const auto& fq = g.field();
  const auto n = static_cast<std::size_t>(g.n());
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Elem c = 1;
      for (std::uint32_t k = 0; k < fq->degree(); ++k, c *= fq->characteristic()) {
        Matrix x = Matrix::identity(fq, n);
        x(i, j) = c;
        out.push_back(x);
      }
    }
  }
  return out;
}

namespace {

bool ideal_kills(const AnnihilatorData& a, const std::vector<Matrix>& actions, const FieldPtr& fp) {
  for (std::size_t k = 0; k < a.ideal_dim; ++k)
    if (!group_algebra_action(actions, a.ideal_basis.row(k), fp).is_zero()) return false;
  return true;
}

// rho_Q(x) for a Gamma summand quotient, from the monomial action on Gamma.
Matrix quotient_action(const GammaSummand& s, const MonomialImage& img, const FieldPtr& fp) {
  const auto np = s.ideal_image.non_pivots();
  Matrix out(fp, np.size(), np.size());
  for (std::size_t jj = 0; jj < np.size(); ++jj) {
    Vec w(s.module.dim(), 0);
    w[img.image[np[jj]]] = img.scalar[np[jj]];
    s.ideal_image.reduce(w);
    for (std::size_t ii = 0; ii < np.size(); ++ii) out(ii, jj) = w[np[ii]];
  }
  return out;
}

// dim {w : rho(u) w = psi(u) w for all listed u}
std::size_t eigen_dim(const std::vector<Matrix>& rho_u, const std::vector<Elem>& psi_u, const FieldPtr& fp,
                      const std::vector<Matrix>& extra_kernels) {
  const std::size_t d = rho_u.empty() ? (extra_kernels.empty() ? 0 : extra_kernels[0].cols()) : rho_u[0].rows();
  if (d == 0) return 0;
  Echelon eqs(fp, d);
  for (std::size_t t = 0; t < rho_u.size(); ++t) {
    Matrix a = rho_u[t];
    for (std::size_t i = 0; i < d; ++i) a(i, i) = fp->sub(a(i, i), psi_u[t]);
    for (std::size_t i = 0; i < d; ++i) eqs.insert(Vec(a.row(i).begin(), a.row(i).end()));
  }
  for (const auto& k : extra_kernels)
    for (std::size_t i = 0; i < k.rows(); ++i) eqs.insert(Vec(k.row(i).begin(), k.row(i).end()));
  return d - eqs.size();
}

}  // namespace

bool ProgeneratorReport::ok() const {
  if (!ideal_kills_q) return false;
  for (bool k : ideal_kills_simple)
    if (!k) return false;
  for (auto h : hom_q_simple)
    if (h == 0) return false;
  return true;
}

ProgeneratorReport progenerator_shadow(const GeneratorBundle& b, const SimpleCatalog& catalog, std::uint64_t seed) {
  const GLGroup& g = *b.group;
  const auto& fp = b.coeffs;
  const auto& f = *fp;
  const auto& a = b.annihilator;
  ProgeneratorReport rep;

  // I_f Q_f = 0: random elements of I_f applied to every basis vector of Gamma land in I_f Gamma
  rep.ideal_kills_q = true;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 8 && a.ideal_dim > 0; ++t) {
    Vec z(g.order(), 0);
    for (std::size_t k = 0; k < a.ideal_dim; ++k) f.axpy(z, static_cast<Elem>(rng() % f.order()), a.ideal_basis.row(k));
    for (const auto& s : b.gamma) {
      const std::size_t d = s.module.dim();
      Matrix zm(fp, d, d);  // column i = z e_i
      for (std::size_t gi = 0; gi < g.order(); ++gi) {
        if (z[gi] == 0) continue;
        const auto& img = s.images[gi];
        for (std::size_t i = 0; i < d; ++i) zm(img.image[i], i) = f.add(zm(img.image[i], i), f.mul(z[gi], img.scalar[i]));
      }
      for (std::size_t i = 0; i < d; ++i)
        if (!s.ideal_image.contains(zm.column(i))) rep.ideal_kills_q = false;
    }
  }

  const auto ugens = unipotent_generators(g);
  const Elem zeta = primitive_root_of_unity(f, g.field()->characteristic());
  std::vector<std::vector<Elem>> psi(b.gamma.size());
  for (std::size_t s = 0; s < b.gamma.size(); ++s)
    for (const auto& u : ugens) psi[s].push_back(character_value(b.gamma[s].chi, u, f, zeta));

  for (std::size_t c = 0; c < catalog.size(); ++c) {
    const GModule& dmod = catalog.module(c);
    auto actions = all_actions(g, dmod);
    const bool kills = ideal_kills(a, actions, fp);
    rep.ideal_kills_simple.push_back(kills);
    std::vector<Matrix> rho_u;
    for (const auto& u : ugens) rho_u.push_back(actions[g.index_of(u)]);
    std::vector<Matrix> extra;
    if (!kills)
      for (std::size_t k = 0; k < a.ideal_dim; ++k) extra.push_back(group_algebra_action(actions, a.ideal_basis.row(k), fp));
    std::size_t h = 0;
    for (std::size_t s = 0; s < b.gamma.size(); ++s) h += eigen_dim(rho_u, psi[s], fp, extra);
    rep.hom_q_simple.push_back(h);
  }

  // End(Q) = Hom(Gamma, Q) = sum over pairs of psi_s-eigenvectors of U in Q_t
  for (const auto& target : b.gamma) {
    if (target.quotient.dim() == 0) continue;
    std::vector<Matrix> rho_u;
    for (const auto& u : ugens) rho_u.push_back(quotient_action(target, target.images[g.index_of(u)], fp));
    for (std::size_t s = 0; s < b.gamma.size(); ++s) rep.end_q_dim += eigen_dim(rho_u, psi[s], fp, {});
  }
  return rep;
}

H0Report h0_dgend_shadow(const GLGroup& g, const GModule& v) {
  const auto& fp = v.field();
  const auto& f = *fp;
  const std::size_t d = v.dim();
  H0Report rep;
  if (d == 0) return rep;
  auto actions = all_actions(g, v);

  // Spin V from standard basis vectors; b_j = g_j * (seed s_j).
  struct Term {
    std::size_t seed;
    std::size_t element;
    Elem coeff;
  };
  TrackedBasis tb(fp, d);
  std::vector<Vec> basis;
  std::vector<std::size_t> seed_of, element_of;
  std::vector<std::vector<Term>> relations;
  std::vector<Vec> seeds;
  Vec c;
  for (std::size_t e = 0; e < d && basis.size() < d; ++e) {
    Vec x(d, 0);
    x[e] = 1;
    if (!tb.insert(x, basis.size(), c)) continue;
    const std::size_t s = seeds.size();
    seeds.push_back(x);
    const std::size_t start = basis.size();
    basis.push_back(x);
    seed_of.push_back(s);
    element_of.push_back(g.identity_index());
    for (std::size_t j = start; j < basis.size(); ++j) {
      for (std::size_t k = 0; k < g.generators().size(); ++k) {
        const std::size_t gk = g.index_of(g.generators()[k] * g.element(element_of[j]));
        Vec w = actions[gk].apply(seeds[seed_of[j]]);
        if (tb.insert(w, basis.size(), c)) {
          basis.push_back(std::move(w));
          seed_of.push_back(seed_of[j]);
          element_of.push_back(gk);
          continue;
        }
        // gk e_s - sum_i c_i g_i e_{s_i}, collected in F[G]^k
        std::map<std::pair<std::size_t, std::size_t>, Elem> rel;
        auto add = [&](std::size_t sd, std::size_t el, Elem a) {
          auto& slot = rel[{sd, el}];
          slot = f.add(slot, a);
        };
        add(seed_of[j], gk, 1);
        for (std::size_t i = 0; i < basis.size(); ++i)
          if (c[i] != 0) add(seed_of[i], element_of[i], f.neg(c[i]));
        std::vector<Term> terms;
        for (const auto& [key, a] : rel)
          if (a != 0) terms.push_back({key.first, key.second, a});
        if (!terms.empty()) relations.push_back(std::move(terms));
      }
    }
  }
  rep.free_rank = seeds.size();
  rep.relations = relations.size();

  // (w_s) in V^k with sum_s x_s w_s = 0 for every relation x
  const std::size_t unknowns = rep.free_rank * d;
  Echelon eqs(fp, unknowns);
  for (const auto& terms : relations) {
    if (eqs.full()) break;
    Matrix block(fp, d, unknowns);
    for (const auto& t : terms) {
      const Matrix& a = actions[t.element];
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          if (a(i, j) != 0) block(i, t.seed * d + j) = f.add(block(i, t.seed * d + j), f.mul(t.coeff, a(i, j)));
    }
    for (std::size_t i = 0; i < d; ++i) eqs.insert(Vec(block.row(i).begin(), block.row(i).end()));
  }
  rep.dim = unknowns - eqs.size();
  return rep;
}

NilpotencyReport nilpotent_action_check(const GLGroup& g, const AnnihilatorData& a, const GModule& v,
                                        const SimpleCatalog& catalog) {
  const auto& fp = v.field();
  NilpotencyReport rep;
  rep.kills_simples = true;
  for (std::size_t c = 0; c < catalog.size(); ++c)
    if (!ideal_kills(a, all_actions(g, catalog.module(c)), fp)) rep.kills_simples = false;

  auto actions = all_actions(g, v);
  std::vector<Matrix> z;
  for (std::size_t k = 0; k < a.ideal_dim; ++k) z.push_back(group_algebra_action(actions, a.ideal_basis.row(k), fp));
  std::vector<Vec> current;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    Vec e(v.dim(), 0);
    e[i] = 1;
    current.push_back(e);
  }
  std::size_t prev = current.size() + 1;
  for (std::size_t step = 1; !current.empty(); ++step) {
    if (current.size() >= prev) return rep;  // stalled: not nilpotent, N stays 0
    prev = current.size();
    Echelon next(fp, v.dim());
    for (const auto& m : z)
      for (const auto& w : current) next.insert(m.apply(w));
    current = next.rows();
    if (current.empty()) rep.N = step;
  }
  return rep;
}

}  // namespace ulab
