#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "unipotent_lab/labeling.hpp"
#include "unipotent_lab/meataxe.hpp"
#include "unipotent_lab/module.hpp"

namespace ulab {

inline constexpr std::uint64_t kAnnihilatorBound = 12000;

/// Finite-dimensional algebra as basis labels and structure constants.
class StructureConstAlgebra {
 public:
  StructureConstAlgebra() = default;
  StructureConstAlgebra(FieldPtr field, std::vector<std::string> labels, std::vector<std::vector<Vec>> table,
                        Vec identity);

  const FieldPtr& field() const { return field_; }
  std::size_t dim() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Coordinates of b_i b_j.
  const Vec& product(std::size_t i, std::size_t j) const { return table_[i][j]; }
  Vec multiply(const Vec& a, const Vec& b) const;
  const Vec& identity() const { return identity_; }
  Vec basis_vector(std::size_t i) const;

  bool associative() const;
  bool identity_law() const;

 private:
  FieldPtr field_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Vec>> table_;
  Vec identity_;
};

/// Algebra spanned by linearly independent square matrices that is closed under products.
/// Throws std::logic_error if a product leaves the span.
StructureConstAlgebra algebra_from_matrices(const FieldPtr& field, std::vector<std::string> labels,
                                            const std::vector<Matrix>& basis);
/// End_G(M) on the hom_space basis.
StructureConstAlgebra end_algebra(const GModule& m);

using Permutation = std::vector<int>;  // w(j) for j = 0..n-1

/// The permutation w with g in B w B (B upper triangular), by lower-left rank profiles.
Permutation bruhat_cell(const Matrix& g);
int permutation_length(const Permutation& w);
Permutation compose(const Permutation& a, const Permutation& b);  // a after b
std::vector<Permutation> symmetric_group(int n);

/// End(ind_B^G 1) on the orbital basis T_w[x, y] = [x^{-1} y in BwB].
struct HeckeAlgebra {
  int n = 0;
  std::vector<Permutation> elements;
  std::map<Permutation, std::size_t> index;
  std::vector<Matrix> matrices;
  StructureConstAlgebra algebra;
};
HeckeAlgebra hecke_algebra(const GModule& borel_permutation_module);

struct HeckeReport {
  std::vector<std::string> failures;
  std::size_t checked = 0;
  bool ok() const { return failures.empty(); }
};
/// Quadratic relations with q read in the coefficient field, braid and commutation
/// relations, and T_u T_w = T_{uw} whenever lengths add.
HeckeReport verify_hecke_presentation(const HeckeAlgebra& h, std::uint32_t q);

/// sum over composition pairs (alpha, beta) of #(W_alpha \ S_n / W_beta), counted on S_n.
std::size_t schur_dimension_oracle(int n);

struct AnnihilatorData {
  std::size_t group_order = 0;
  std::size_t image_dim = 0;
  std::size_t ideal_dim = 0;
  Matrix image_basis;  // rows: flattened rho(x)
  Matrix ideal_basis;  // rows: group algebra vectors in G.elements() order
  bool closed_under_products = false;
};

/// Kernel of F[G] -> End(M). |G| above `bound` is a ScaleError.
AnnihilatorData compute_annihilator(const GLGroup& g, const GModule& m, std::uint64_t bound = kAnnihilatorBound);
/// sum_g z_g rho(g)
Matrix group_algebra_action(const std::vector<Matrix>& actions, std::span<const Elem> z, const FieldPtr& field);

struct GammaSummand {
  UnipotentCharacter chi;
  GModule module;
  std::size_t cyclic_index = 0;     // basis index of the identity coset
  std::vector<MonomialImage> images;  // rho(g) for every g, in G.elements() order
  Echelon ideal_image{nullptr, 0};  // I_f v
  GModule quotient;                 // Q summand
};

struct GeneratorBundle {
  int n = 0;
  std::uint32_t q = 0;
  std::uint32_t l = 0;
  std::uint32_t field_degree = 0;
  std::shared_ptr<const GLGroup> group;
  FieldPtr coeffs;
  GModule P;
  std::vector<Composition> v_index;
  std::vector<GModule> v_summands;
  GModule V;
  std::vector<GammaSummand> gamma;
  AnnihilatorData annihilator;

  std::size_t gamma_dim() const;
  std::size_t q_dim() const;
  nlohmann::json dims_json() const;
};

struct BundleOptions {
  std::uint64_t group_bound = kDefaultGroupBound;
  std::uint64_t annihilator_bound = kAnnihilatorBound;
  /// Coefficient field degree over F_l; 0 means the splitting degree for p-th roots.
  std::uint32_t field_degree = 0;
};

/// P_f, V_f, Gamma_f, I_f and Q_f for GL_n(F_q) over F_{l^m}.
GeneratorBundle build_bundle(int n, std::uint32_t q, std::uint32_t l, const BundleOptions& opt = {});
/// Fills ideal_image and quotient of every Gamma summand: Q = Gamma / I_f Gamma, where
/// I_f Gamma = sum over summands of I_f v for the cyclic vector v.
void build_Q(GeneratorBundle& b);

/// Root elements x_ij(c), c over an F_p-basis of F_q; they generate U.
std::vector<Matrix> unipotent_generators(const GLGroup& g);

struct ProgeneratorReport {
  bool ideal_kills_q = false;
  std::vector<bool> ideal_kills_simple;
  std::vector<std::size_t> hom_q_simple;
  std::size_t end_q_dim = 0;
  bool ok() const;
};
/// I_f Q_f = 0 by sampled elements of I_f on every basis vector, I_f D = 0 and
/// dim Hom(Q_f, D) for each catalog simple D.
ProgeneratorReport progenerator_shadow(const GeneratorBundle& b, const SimpleCatalog& catalog, std::uint64_t seed);

struct H0Report {
  std::size_t free_rank = 0;  // rank of F0
  std::size_t relations = 0;  // rank of F1
  std::size_t dim = 0;
};
/// {f0 in End(F0) : f0(im d1) in im d1} / {f0 : f0(F0) in im d1} for a free presentation
/// F1 -> F0 -> V built by spinning V from one cyclic vector per summand.
H0Report h0_dgend_shadow(const GLGroup& g, const GModule& v);

struct NilpotencyReport {
  bool kills_simples = false;
  std::size_t N = 0;
};
NilpotencyReport nilpotent_action_check(const GLGroup& g, const AnnihilatorData& a, const GModule& v,
                                        const SimpleCatalog& catalog);

}  // namespace ulab
