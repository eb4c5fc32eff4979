#include "unipotent_lab/labeling.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "unipotent_lab/errors.hpp"

namespace ulab {

namespace {

void partitions_rec(int remaining, int max_part, Partition& cur, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions_rec(remaining - part, part, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions(int n) {
  if (n < 1) throw std::invalid_argument("partitions needs n >= 1");
  std::vector<Partition> out;
  Partition cur;
  partitions_rec(n, n, cur, out);
  return out;
}

bool dominance_leq(const Partition& a, const Partition& b) {
  int sa = 0, sb = 0;
  const std::size_t len = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < len; ++i) {
    sa += i < a.size() ? a[i] : 0;
    sb += i < b.size() ? b[i] : 0;
    if (sa > sb) return false;
  }
  return sa == sb;
}

// Lexicographic descent refines dominance, so the lexicographically descending list is
// already a decreasing extension.
std::vector<Partition> linear_extension(int n) { return partitions(n); }

std::vector<Partition> alternate_linear_extension(int n) {
  auto all = partitions(n);
  std::vector<Partition> out;
  std::vector<bool> used(all.size(), false);
  while (out.size() < all.size()) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (used[i]) continue;
      bool maximal = true;
      for (std::size_t j = 0; j < all.size(); ++j)
        if (!used[j] && j != i && dominance_leq(all[i], all[j])) maximal = false;
      if (maximal && (!pick || all[i] < all[*pick])) pick = i;
    }
    used[*pick] = true;
    out.push_back(all[*pick]);
  }
  return out;
}

Partition sort_to_partition(const Composition& c) {
  Partition p(c.begin(), c.end());
  std::sort(p.begin(), p.end(), std::greater<>());
  return p;
}

std::string partition_name(const Partition& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

Labeling label_simples(const GLGroup& g, const FieldPtr& coeffs, SimpleCatalog& catalog, std::uint64_t seed,
                       std::vector<Partition> order) {
  Labeling lab;
  lab.order = order.empty() ? linear_extension(g.n()) : std::move(order);
  std::map<std::size_t, Partition> owner;
  for (std::size_t idx = 0; idx < lab.order.size(); ++idx) {
    const Partition& kappa = lab.order[idx];
    GModule ind = permutation_module(g, StandardParabolic(Composition(kappa.begin(), kappa.end())), coeffs);
    auto facs = composition_factors(ind, catalog, seed + 7919 * idx);
    lab.factors[kappa] = facs;
    std::set<std::size_t> excluded;
    for (const auto& [mu, s] : lab.label)
      if (mu != kappa && dominance_leq(kappa, mu)) excluded.insert(s);
    std::set<std::size_t> candidates;
    for (auto s : facs)
      if (!excluded.count(s)) candidates.insert(s);
    if (candidates.size() != 1) {
      std::ostringstream msg;
      msg << "labeling " << partition_name(kappa) << ": " << candidates.size() << " candidates {";
      for (auto s : candidates) msg << " S" << s << "(dim " << catalog.module(s).dim() << ")";
      msg << " } among factors of " << ind.label();
      throw LabelingError(msg.str());
    }
    const std::size_t s = *candidates.begin();
    if (owner.count(s))
      throw LabelingError("labeling " + partition_name(kappa) + ": simple S" + std::to_string(s) +
                          " already labels " + partition_name(owner[s]));
    owner[s] = kappa;
    lab.label[kappa] = s;
  }
  return lab;
}

nlohmann::json DecompositionMatrix::to_json() const {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : partitions) parts.push_back(p);
  const auto v = verify_unitriangular(*this);
  const auto k0 = k0_generation_check(*this);
  return {{"n", n},         {"q", q},           {"l", l}, {"partitions", parts}, {"dims", dims},
          {"matrix", matrix}, {"unitriangular", v.empty()}, {"det", k0.det}};
}

std::string DecompositionMatrix::to_csv() const {
  std::ostringstream out;
  out << "n,q,l,kappa";
  for (const auto& mu : partitions) out << ",\"D" << partition_name(mu) << "\"";
  out << "\n";
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    out << n << "," << q << "," << l << ",\"" << partition_name(partitions[i]) << "\"";
    for (auto v : matrix[i]) out << "," << v;
    out << "\n";
  }
  return out.str();
}

DecompositionMatrix decomposition_matrix(const Labeling& lab, const SimpleCatalog& catalog, int n, std::uint32_t q,
                                         std::uint32_t l) {
  DecompositionMatrix d;
  d.n = n;
  d.q = q;
  d.l = l;
  d.partitions = lab.order;
  for (const auto& mu : lab.order) d.dims.push_back(catalog.module(lab.label.at(mu)).dim());
  for (const auto& kappa : lab.order) {
    std::vector<long long> row;
    const auto& facs = lab.factors.at(kappa);
    for (const auto& mu : lab.order)
      row.push_back(std::count(facs.begin(), facs.end(), lab.label.at(mu)));
    d.matrix.push_back(std::move(row));
  }
  return d;
}

std::vector<Violation> verify_unitriangular(const DecompositionMatrix& d) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < d.partitions.size(); ++i) {
    for (std::size_t j = 0; j < d.partitions.size(); ++j) {
      const long long v = d.matrix[i][j];
      if (i == j && v != 1) out.push_back({d.partitions[i], d.partitions[j], v, "diagonal entry is not 1"});
      if (i != j && v != 0 && !dominance_leq(d.partitions[i], d.partitions[j]))
        out.push_back({d.partitions[i], d.partitions[j], v, "column does not dominate row"});
    }
  }
  return out;
}

K0Check k0_generation_check(const DecompositionMatrix& d) {
  long long det = integer_determinant(d.matrix);
  return {det == 1 || det == -1, det};
}

std::optional<Matrix> find_isomorphism(const GModule& m, const GModule& n, std::uint64_t seed, int tries) {
  if (m.dim() != n.dim()) return std::nullopt;
  auto h = hom_space(m, n);
  if (h.dim() == 0) return std::nullopt;
  for (const auto& b : h.basis)
    if (inverse(b)) return b;
  std::mt19937_64 rng(seed);
  const auto& f = *m.field();
  for (int t = 0; t < tries; ++t) {
    Matrix x(m.field(), n.dim(), m.dim());
    for (const auto& b : h.basis) x.add_scaled(static_cast<Elem>(rng() % f.order()), b);
    if (inverse(x)) return x;
  }
  return std::nullopt;
}

}  // namespace ulab
