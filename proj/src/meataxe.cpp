#include "unipotent_lab/meataxe.hpp"

#include <random>

#include "unipotent_lab/errors.hpp"

namespace ulab {

nlohmann::json NortonCertificate::to_json() const {
  nlohmann::json w = nlohmann::json::array();
  for (const auto& word : words) w.push_back(std::vector<int>(word.begin(), word.end()));
  return {{"words", w}, {"coefficients", coefficients}, {"factor", factor}, {"nullity", nullity}};
}

namespace {

Matrix combine(const GModule& m, const std::vector<Matrix>& images, const std::vector<Elem>& c) {
  Matrix a(m.field(), m.dim(), m.dim());
  for (std::size_t i = 0; i < images.size(); ++i)
    if (c[i] != 0) a.add_scaled(c[i], images[i]);
  return a;
}

GModule transposed(const GModule& m) {
  std::vector<Matrix> gens;
  for (const auto& a : m.generators()) gens.push_back(a.transpose());
  return GModule(m.field(), m.dim(), std::move(gens));
}

std::size_t spin_dim(const GModule& m, const Vec& v) { return spin_submodule(m, {v}).basis.size(); }

// Kernel vector of p(theta) and its nullity.
std::pair<Matrix, std::size_t> kernel_of(const poly::Poly& p, const Matrix& theta) {
  Matrix k = null_space(poly::evaluate(p, theta));
  return {k, k.rows()};
}

Vec first_row(const Matrix& k) { return Vec(k.row(0).begin(), k.row(0).end()); }

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitResult split_or_certify(const GModule& m, std::uint64_t seed, int budget) {
  if (m.dim() == 0) throw std::invalid_argument("split_or_certify: zero module");
  SplitResult out;
  if (m.dim() == 1) {
    out.irreducible = true;
    out.certificate.factor = {0, 1};
    out.certificate.nullity = 1;
    return out;
  }
  const auto& f = *m.field();
  std::mt19937_64 rng(seed);
  std::vector<Word> words(kRandomWords);
  std::vector<Matrix> images;
  for (auto& w : words) {
    const std::size_t len = 1 + rng() % 6;
    for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<std::uint8_t>(rng() % m.num_generators()));
    images.push_back(m.evaluate(w));
  }
  const GModule mt = transposed(m);
  for (int attempt = 1; attempt <= budget; ++attempt) {
    std::vector<Elem> c(kRandomWords);
    for (auto& x : c) x = static_cast<Elem>(rng() % f.order());
    Matrix theta = combine(m, images, c);
    auto factors = poly::factor(f, poly::char_poly(theta), rng());
    for (const auto& [p, mult] : factors) {
      auto [kern, nullity] = kernel_of(p, theta);
      Vec v = first_row(kern);
      auto sub = spin_submodule(m, {v});
      if (sub.basis.size() < m.dim()) {
        out.submodule = std::move(sub.basis);
        out.attempts = attempt;
        return out;
      }
      if (nullity != static_cast<std::size_t>(poly::degree(p))) continue;
      Matrix kt = null_space(poly::evaluate(p, theta.transpose()));
      auto wsub = spin_submodule(mt, {first_row(kt)});
      if (wsub.basis.size() < m.dim()) {
        // annihilator of a transpose-invariant subspace is invariant
        Matrix perp = null_space(wsub.basis.basis_matrix());
        Echelon e(m.field(), m.dim());
        for (std::size_t i = 0; i < perp.rows(); ++i) e.insert(Vec(perp.row(i).begin(), perp.row(i).end()));
        out.submodule = std::move(e);
        out.attempts = attempt;
        return out;
      }
      out.irreducible = true;
      out.attempts = attempt;
      out.certificate = {words, c, p, nullity};
      return out;
    }
  }
  throw InconclusiveError("meataxe: no split or certificate after " + std::to_string(budget) +
                          " random elements (dim " + std::to_string(m.dim()) + ")");
}

bool verify_certificate(const GModule& m, const NortonCertificate& c) {
  if (m.dim() == 1) return true;
  if (c.words.size() != c.coefficients.size() || c.factor.empty()) return false;
  std::vector<Matrix> images;
  for (const auto& w : c.words) images.push_back(m.evaluate(w));
  Matrix theta = combine(m, images, c.coefficients);
  auto [kern, nullity] = kernel_of(c.factor, theta);
  if (nullity != static_cast<std::size_t>(poly::degree(c.factor)) || nullity == 0) return false;
  if (spin_dim(m, first_row(kern)) != m.dim()) return false;
  Matrix kt = null_space(poly::evaluate(c.factor, theta.transpose()));
  return spin_dim(transposed(m), first_row(kt)) == m.dim();
}

namespace {

void series_rec(const GModule& m, std::uint64_t seed, std::uint64_t& counter, CompositionSeries& out,
                std::size_t base) {
  if (m.dim() == 0) return;
  auto r = split_or_certify(m, mix(seed, counter++));
  if (r.irreducible) {
    out.factors.push_back(m);
    out.filtration.push_back(base + m.dim());
    return;
  }
  const Echelon& sub = *r.submodule;
  GModule s = restrict_to(m, sub);
  GModule q = quotient_module(m, sub);
  series_rec(s, seed, counter, out, base);
  series_rec(q, seed, counter, out, base + s.dim());
}

}  // namespace

CompositionSeries composition_series(const GModule& m, std::uint64_t seed) {
  CompositionSeries out;
  std::uint64_t counter = 0;
  series_rec(m, seed, counter, out, 0);
  return out;
}

bool iso_test(const GModule& a, const GModule& b) {
  if (a.dim() != b.dim()) return false;
  return hom_space(a, b).dim() >= 1;
}

SimpleCatalog::SimpleCatalog(std::size_t num_generators) {
  // every word of length 1..3 in the generators
  std::vector<Word> frontier = {Word{}};
  for (int len = 1; len <= 3; ++len) {
    std::vector<Word> next;
    for (const auto& w : frontier) {
      for (std::size_t k = 0; k < num_generators; ++k) {
        Word x = w;
        x.push_back(static_cast<std::uint8_t>(k));
        next.push_back(x);
        words_.push_back(x);
      }
    }
    frontier = std::move(next);
  }
}

std::vector<Elem> SimpleCatalog::fingerprint_of(const GModule& s) const {
  std::vector<Elem> fp = {static_cast<Elem>(s.dim())};
  for (const auto& w : words_) fp.push_back(s.evaluate(w).trace());
  return fp;
}

std::optional<std::size_t> SimpleCatalog::find(const GModule& s) const {
  auto fp = fingerprint_of(s);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].fingerprint != fp) continue;
    ++hom_solves_;
    if (hom_space(s, entries_[i].module).dim() >= 1) return i;
  }
  return std::nullopt;
}

std::size_t SimpleCatalog::add(const GModule& s) {
  if (auto i = find(s)) return *i;
  entries_.push_back({s, fingerprint_of(s), hom_space(s, s).dim()});
  return entries_.size() - 1;
}

bool SimpleCatalog::verify() const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].end_dim != 1) return false;
    for (std::size_t j = 0; j < entries_.size(); ++j)
      if (i != j && hom_space(entries_[i].module, entries_[j].module).dim() != 0) return false;
  }
  return true;
}

std::vector<std::size_t> composition_factors(const GModule& m, SimpleCatalog& catalog, std::uint64_t seed) {
  std::vector<std::size_t> out;
  for (const auto& s : composition_series(m, seed).factors) out.push_back(catalog.add(s));
  return out;
}

AbsolutelyIrreducible ensure_absolutely_irreducible(const GModule& s, std::uint64_t seed,
                                                    std::uint32_t max_degree) {
  const std::size_t e = hom_space(s, s).dim();
  if (e == 1) return {s, 1};
  if (e > max_degree)
    throw FieldError("absolute irreducibility needs an extension of degree " + std::to_string(e) +
                     " (bound " + std::to_string(max_degree) + ")");
  const auto& small = s.field();
  auto large = make_field(small->characteristic(), small->degree() * static_cast<std::uint32_t>(e));
  GModule ext = extend_scalars(s, FieldEmbedding(small, large));
  auto series = composition_series(ext, seed);
  GModule piece = series.factors.front();
  piece.set_label(s.label());
  if (hom_space(piece, piece).dim() != 1) throw FieldError("extension did not split the endomorphism field");
  return {piece, static_cast<std::uint32_t>(e)};
}

}  // namespace ulab
