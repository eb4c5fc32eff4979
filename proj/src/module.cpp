#include "unipotent_lab/module.hpp"

#include <random>
#include <stdexcept>

#include "unipotent_lab/errors.hpp"

namespace ulab {

InducedAction::InducedAction(std::shared_ptr<const CosetTable> table, Character chi, bool trivial_character)
    : table_(std::move(table)), chi_(std::move(chi)), trivial_(trivial_character) {}

MonomialImage InducedAction::image(const Matrix& g) const {
  MonomialImage out;
  const std::size_t d = dim();
  out.image.resize(d);
  out.scalar.assign(d, 1);
  for (std::size_t i = 0; i < d; ++i) {
    Matrix x = g * table_->rep(i);
    std::size_t j = table_->locate(x);
    out.image[i] = static_cast<std::uint32_t>(j);
    if (!trivial_) out.scalar[i] = chi_(table_->rep_inverse(j) * x);
  }
  return out;
}

Matrix InducedAction::matrix(const Matrix& g, const FieldPtr& coeffs) const {
  auto img = image(g);
  Matrix m(coeffs, dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i) m(img.image[i], i) = img.scalar[i];
  return m;
}

GModule::GModule(FieldPtr field, std::size_t dim, std::vector<Matrix> generators, std::string label)
    : field_(std::move(field)), dim_(dim), gens_(std::move(generators)), label_(std::move(label)) {
  for (const auto& g : gens_)
    if (g.rows() != dim_ || g.cols() != dim_) throw std::invalid_argument("generator matrix has wrong size");
}

GModule::GModule(FieldPtr field, std::vector<Matrix> generators, std::shared_ptr<const InducedAction> induced,
                 std::string label)
    : GModule(std::move(field), induced->dim(), std::move(generators), std::move(label)) {
  induced_ = std::move(induced);
}

Matrix GModule::evaluate(const Word& w) const {
  Matrix acc = Matrix::identity(field_, dim_);
  for (auto k : w) acc = acc * gens_.at(k);
  return acc;
}

Matrix GModule::act(const GLGroup& g, const Matrix& x) const {
  if (induced_) return induced_->matrix(x, field_);
  return evaluate(g.factor_into_generators(x));
}

nlohmann::json GModule::to_json() const {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : gens_) gens.push_back(g.to_json());
  return {{"dim", dim_}, {"field", field_->descriptor()}, {"generators", gens}, {"label", label_}};
}

GModule GModule::from_json(const nlohmann::json& j) {
  auto field = make_field(j.at("field").at("char").get<std::uint32_t>(), j.at("field").at("degree").get<std::uint32_t>());
  const auto dim = j.at("dim").get<std::size_t>();
  std::vector<Matrix> gens;
  for (const auto& g : j.at("generators")) {
    Matrix m = Matrix::from_json(field, g);
    if (dim == 0) m = Matrix(field, 0, 0);
    gens.push_back(std::move(m));
  }
  return GModule(field, dim, std::move(gens), j.value("label", std::string{}));
}

std::vector<Matrix> all_actions(const GLGroup& g, const GModule& m) {
  std::vector<Matrix> out(g.order());
  if (m.induced()) {
    for (std::size_t i = 0; i < g.order(); ++i) out[i] = m.induced()->matrix(g.element(i), m.field());
    return out;
  }
  for (auto i : g.bfs_order()) {
    if (i == g.identity_index()) {
      out[i] = Matrix::identity(m.field(), m.dim());
      continue;
    }
    out[i] = m.generators()[g.parent_generator(i)] * out[g.parent(i)];
  }
  return out;
}

bool respects_relations(const GLGroup& g, const GModule& m, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Matrix& x = g.element(rng() % g.order());
    const Matrix& y = g.element(rng() % g.order());
    if (!(m.act(g, x) * m.act(g, y) == m.act(g, x * y))) return false;
  }
  return true;
}

namespace {

std::vector<Matrix> induced_generators(const GLGroup& g, const InducedAction& a, const FieldPtr& coeffs) {
  std::vector<Matrix> gens;
  for (const auto& x : g.generators()) gens.push_back(a.matrix(x, coeffs));
  return gens;
}

std::string element_bytes(const Matrix& m) {
  return std::string(reinterpret_cast<const char*>(m.data().data()), m.data().size() * sizeof(Elem));
}

}  // namespace

GModule zero_module(const GLGroup& g, const FieldPtr& coeffs) {
  return GModule(coeffs, 0, std::vector<Matrix>(g.generators().size(), Matrix(coeffs, 0, 0)), "0");
}

GModule trivial_module(const GLGroup& g, const FieldPtr& coeffs) {
  return GModule(coeffs, 1, std::vector<Matrix>(g.generators().size(), Matrix::identity(coeffs, 1)), "trivial");
}

GModule regular_module(const GLGroup& g, const FieldPtr& coeffs) {
  auto table = std::make_shared<CosetTable>("1", g.elements(), element_bytes);
  auto action = std::make_shared<InducedAction>(table, nullptr, true);
  return GModule(coeffs, induced_generators(g, *action, coeffs), action, "F[G]");
}

GModule permutation_module(const GLGroup& g, const StandardParabolic& p, const FieldPtr& coeffs) {
  auto table = std::make_shared<CosetTable>(coset_transversal(g, p));
  auto action = std::make_shared<InducedAction>(table, nullptr, true);
  return GModule(coeffs, induced_generators(g, *action, coeffs), action, "ind_" + p.name() + " 1");
}

std::string UnipotentCharacter::name() const {
  std::string s = StandardParabolic(composition).name() + "[";
  for (std::size_t i = 0; i < coefficients.size(); ++i) s += (i ? "," : "") + std::to_string(coefficients[i]);
  return s + "]";
}

std::vector<UnipotentCharacter> character_set(const StandardParabolic& p, const PrimePowerField& fq) {
  const auto roots = p.simple_root_coords();
  const std::size_t n = static_cast<std::size_t>(p.n());
  std::vector<UnipotentCharacter> out;
  std::vector<Elem> digits(roots.size(), 1);
  while (true) {
    UnipotentCharacter chi{p.composition(), std::vector<Elem>(n > 0 ? n - 1 : 0, 0)};
    for (std::size_t r = 0; r < roots.size(); ++r) chi.coefficients[static_cast<std::size_t>(roots[r].first)] = digits[r];
    out.push_back(std::move(chi));
    std::size_t r = roots.size();
    while (r > 0) {
      --r;
      if (++digits[r] < fq.order()) break;
      digits[r] = 1;
      if (r == 0) return out;
    }
    if (roots.empty()) return out;
  }
}

Elem character_value(const UnipotentCharacter& chi, const Matrix& u, const PrimePowerField& coeffs, Elem zeta) {
  const auto& fq = *u.field();
  Elem s = 0;
  for (std::size_t i = 0; i < chi.coefficients.size(); ++i)
    if (chi.coefficients[i] != 0) s = fq.add(s, fq.mul(chi.coefficients[i], u(i, i + 1)));
  return coeffs.pow(zeta, fq.trace_to_prime(s));
}

GModule induce_character_module(const GLGroup& g, const UnipotentCharacter& chi, const FieldPtr& coeffs,
                                std::shared_ptr<const CosetTable> unipotent_table) {
  const std::uint32_t p = g.field()->characteristic();
  if ((coeffs->order() - 1) % p != 0)
    throw FieldError("coefficient field of order " + std::to_string(coeffs->order()) +
                     " has no primitive " + std::to_string(p) + "-th root of unity; enlarge to degree " +
                     std::to_string(splitting_degree_for_characters(p, coeffs->characteristic())));
  const Elem zeta = primitive_root_of_unity(*coeffs, p);
  if (!unipotent_table) unipotent_table = std::make_shared<CosetTable>(unipotent_transversal(g));
  bool trivial = true;
  for (auto a : chi.coefficients) trivial = trivial && a == 0;
  auto action = std::make_shared<InducedAction>(
      std::move(unipotent_table),
      [chi, coeffs, zeta](const Matrix& u) { return character_value(chi, u, *coeffs, zeta); }, trivial);
  return GModule(coeffs, induced_generators(g, *action, coeffs), action, "ind_U " + chi.name());
}


HomSpace hom_space(const GModule& source, const GModule& target) {
  if (*source.field() != *target.field()) throw std::invalid_argument("hom_space: coefficient fields differ");
  if (source.num_generators() != target.num_generators())
    throw std::invalid_argument("hom_space: generator counts differ");
  const auto& fp = source.field();
  const auto& f = *fp;
  const std::size_t m = source.dim();
  const std::size_t n = target.dim();
  HomSpace out{m, n, {}};
  if (m == 0 || n == 0) return out;

  // Spin the source from standard basis vectors, recording how each vector arose.
  struct Relation {
    std::size_t j, k;
    Vec c;
  };
  TrackedBasis tb(fp, m);
  std::vector<Vec> b;
  std::vector<std::size_t> parent;
  std::vector<std::size_t> via;  // generator index, or seed number for seeds
  std::vector<bool> is_seed;
  std::vector<Relation> rels;
  std::size_t seeds = 0;
  Vec c;
  for (std::size_t e = 0; e < m && b.size() < m; ++e) {
    Vec v(m, 0);
    v[e] = 1;
    if (!tb.insert(v, b.size(), c)) continue;
    std::size_t start = b.size();
    b.push_back(v);
    parent.push_back(0);
    via.push_back(seeds++);
    is_seed.push_back(true);
    for (std::size_t j = start; j < b.size(); ++j) {
      for (std::size_t k = 0; k < source.num_generators(); ++k) {
        Vec w = source.generators()[k].apply(b[j]);
        if (tb.insert(w, b.size(), c)) {
          b.push_back(std::move(w));
          parent.push_back(j);
          via.push_back(k);
          is_seed.push_back(false);
        } else {
          rels.push_back({j, k, c});
        }
      }
    }
  }

  // Unknowns: the images of the seeds, seeds * n coordinates.
  const std::size_t u = seeds * n;
  std::vector<Matrix> img(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (is_seed[j]) {
      img[j] = Matrix(fp, n, u);
      for (std::size_t i = 0; i < n; ++i) img[j](i, via[j] * n + i) = 1;
    } else {
      img[j] = target.generators()[via[j]] * img[parent[j]];
    }
  }
  Echelon eqs(fp, u);
  for (const auto& r : rels) {
    if (eqs.full()) break;
    Matrix lhs = target.generators()[r.k] * img[r.j];
    for (std::size_t i = 0; i < m; ++i)
      if (r.c[i] != 0) lhs.add_scaled(f.neg(r.c[i]), img[i]);
    for (std::size_t row = 0; row < n; ++row) {
      auto s = lhs.row(row);
      eqs.insert(Vec(s.begin(), s.end()));
    }
  }
  Matrix sols = null_space(eqs.basis_matrix());
  if (sols.rows() == 0) return out;

  Matrix bmat(fp, m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) bmat(i, j) = b[j][i];
  Matrix binv = *inverse(bmat);
  for (std::size_t s = 0; s < sols.rows(); ++s) {
    auto y = sols.row(s);
    Matrix fimg(fp, n, m);
    for (std::size_t j = 0; j < m; ++j) {
      Vec col = img[j].apply(y);
      for (std::size_t i = 0; i < n; ++i) fimg(i, j) = col[i];
    }
    out.basis.push_back(fimg * binv);
  }
  return out;
}

GModule restrict_to(const GModule& m, const Echelon& sub) {
  const auto& fp = m.field();
  const std::size_t d = sub.size();
  std::vector<Matrix> gens;
  for (const auto& a : m.generators()) {
    Matrix r(fp, d, d);
    for (std::size_t i = 0; i < d; ++i) {
      Vec w = a.apply(sub.rows()[i]);
      Vec check = w;
      sub.reduce(check);
      for (auto e : check)
        if (e != 0) throw std::logic_error("restrict_to: subspace is not invariant");
      auto co = sub.coordinates(w);
      for (std::size_t k = 0; k < d; ++k) r(k, i) = co[k];
    }
    gens.push_back(std::move(r));
  }
  return GModule(fp, d, std::move(gens), m.label().empty() ? "" : "sub(" + m.label() + ")");
}

Submodule spin_submodule(const GModule& m, const std::vector<Vec>& seeds) {
  Echelon e(m.field(), m.dim());
  std::vector<Vec> queue;
  for (const auto& s : seeds)
    if (e.insert(s)) queue.push_back(s);
  for (std::size_t i = 0; i < queue.size() && !e.full(); ++i) {
    for (const auto& a : m.generators()) {
      Vec w = a.apply(queue[i]);
      if (e.insert(w)) queue.push_back(std::move(w));
    }
  }
  GModule sub = restrict_to(m, e);
  return {std::move(e), std::move(sub)};
}

GModule quotient_module(const GModule& m, const Echelon& sub) {
  const auto& fp = m.field();
  const auto np = sub.non_pivots();
  const std::size_t d = np.size();
  std::vector<Matrix> gens;
  for (const auto& a : m.generators()) {
    Matrix r(fp, d, d);
    for (std::size_t jj = 0; jj < d; ++jj) {
      Vec w = a.column(np[jj]);
      sub.reduce(w);
      for (std::size_t ii = 0; ii < d; ++ii) r(ii, jj) = w[np[ii]];
    }
    gens.push_back(std::move(r));
  }
  return GModule(fp, d, std::move(gens), m.label().empty() ? "" : "quot(" + m.label() + ")");
}

GModule direct_sum(const std::vector<GModule>& parts, const FieldPtr& coeffs, std::size_t num_generators) {
  std::size_t d = 0;
  for (const auto& p : parts) {
    if (p.num_generators() != num_generators) throw std::invalid_argument("direct_sum: generator counts differ");
    d += p.dim();
  }
  std::vector<Matrix> gens(num_generators, Matrix(coeffs, d, d));
  std::size_t off = 0;
  std::string label;
  for (const auto& p : parts) {
    for (std::size_t k = 0; k < num_generators; ++k)
      for (std::size_t i = 0; i < p.dim(); ++i)
        for (std::size_t j = 0; j < p.dim(); ++j) gens[k](off + i, off + j) = p.generators()[k](i, j);
    off += p.dim();
    label += (label.empty() ? "" : " + ") + p.label();
  }
  return GModule(coeffs, d, std::move(gens), label);
}

GModule dual_module(const GModule& m) {
  std::vector<Matrix> gens;
  for (const auto& a : m.generators()) gens.push_back(inverse(a)->transpose());
  return GModule(m.field(), m.dim(), std::move(gens), m.label().empty() ? "" : "dual(" + m.label() + ")");
}

GModule extend_scalars(const GModule& m, const FieldEmbedding& e) {
  std::vector<Matrix> gens;
  for (const auto& a : m.generators()) {
    Matrix b(e.target(), a.rows(), a.cols());
    for (std::size_t i = 0; i < a.data().size(); ++i) b.data()[i] = e(a.data()[i]);
    gens.push_back(std::move(b));
  }
  return GModule(e.target(), m.dim(), std::move(gens), m.label());
}

Matrix fixed_space(const GLGroup& g, const GModule& m, const std::vector<Matrix>& elements) {
  const std::size_t d = m.dim();
  Matrix stacked(m.field(), elements.size() * d, d);
  for (std::size_t e = 0; e < elements.size(); ++e) {
    Matrix a = m.act(g, elements[e]);
    for (std::size_t i = 0; i < d; ++i) {
      a(i, i) = m.field()->sub(a(i, i), 1);
      for (std::size_t j = 0; j < d; ++j) stacked(e * d + i, j) = a(i, j);
    }
  }
  return null_space(stacked);
}

}  // namespace ulab
