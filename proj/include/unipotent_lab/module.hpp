#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "unipotent_lab/field.hpp"
#include "unipotent_lab/gln.hpp"
#include "unipotent_lab/matrix.hpp"

namespace ulab {

/// g e_i = scalar[i] e_{image[i]}
struct MonomialImage {
  std::vector<std::uint32_t> image;
  std::vector<Elem> scalar;
};

/// Induced module ind_H^G(chi) for a linear character chi of H, on the basis of a
/// left transversal: g t_i = t_j h gives g e_i = chi(h) e_j.
class InducedAction {
 public:
  using Character = std::function<Elem(const Matrix&)>;

  InducedAction(std::shared_ptr<const CosetTable> table, Character chi, bool trivial_character);

  std::size_t dim() const { return table_->index(); }
  const CosetTable& table() const { return *table_; }
  bool trivial_character() const { return trivial_; }
  MonomialImage image(const Matrix& g) const;
  Matrix matrix(const Matrix& g, const FieldPtr& coeffs) const;

 private:
  std::shared_ptr<const CosetTable> table_;
  Character chi_;
  bool trivial_;
};

/// Representation of GL_n(F_q) over a coefficient field, stored as the images of the
/// group generators. Induced modules also carry their monomial structure.
class GModule {
 public:
  GModule() = default;
  GModule(FieldPtr field, std::size_t dim, std::vector<Matrix> generators, std::string label = {});
  GModule(FieldPtr field, std::vector<Matrix> generators, std::shared_ptr<const InducedAction> induced,
          std::string label);

  const FieldPtr& field() const { return field_; }
  std::size_t dim() const { return dim_; }
  const std::vector<Matrix>& generators() const { return gens_; }
  std::size_t num_generators() const { return gens_.size(); }
  const std::string& label() const { return label_; }
  void set_label(std::string s) { label_ = std::move(s); }
  const std::shared_ptr<const InducedAction>& induced() const { return induced_; }
  bool is_permutation() const { return induced_ && induced_->trivial_character(); }

  /// rho(x) for an arbitrary group element: monomial if induced, else by word evaluation.
  Matrix act(const GLGroup& g, const Matrix& x) const;
  Matrix evaluate(const Word& w) const;

  nlohmann::json to_json() const;
  static GModule from_json(const nlohmann::json& j);

 private:
  FieldPtr field_;
  std::size_t dim_ = 0;
  std::vector<Matrix> gens_;
  std::shared_ptr<const InducedAction> induced_;
  std::string label_;
};

/// rho(g) for every element, indexed like g.elements().
std::vector<Matrix> all_actions(const GLGroup& g, const GModule& m);

/// Checks rho(x) rho(y) = rho(xy) on random pairs.
bool respects_relations(const GLGroup& g, const GModule& m, int samples, std::uint64_t seed);

GModule zero_module(const GLGroup& g, const FieldPtr& coeffs);
GModule trivial_module(const GLGroup& g, const FieldPtr& coeffs);
/// F[G] with its left regular action.
GModule regular_module(const GLGroup& g, const FieldPtr& coeffs);
/// ind_P^G 1 on the transversal of G/P.
GModule permutation_module(const GLGroup& g, const StandardParabolic& p, const FieldPtr& coeffs);

/// Character of U (upper unitriangular) given by one F_q coefficient per superdiagonal
/// coordinate: u -> zeta^{Tr(sum_i a_i u_{i,i+1})}. Coefficients are zero off the blocks.
struct UnipotentCharacter {
  Composition composition;
  std::vector<Elem> coefficients;
  std::string name() const;
};

/// X_P: characters of U_P nontrivial on every simple root group of M_P, extended trivially
/// across blocks. (q-1)^{#simple roots} entries.
std::vector<UnipotentCharacter> character_set(const StandardParabolic& p, const PrimePowerField& fq);

/// Value of chi on an upper unitriangular matrix, in the coefficient field (needs zeta).
Elem character_value(const UnipotentCharacter& chi, const Matrix& u, const PrimePowerField& coeffs, Elem zeta);

/// ind_P^G infl ind_{U_P}^{M_P} chi, realised as ind_U^G of chi extended trivially to U.
/// Throws FieldError if coeffs lacks a primitive p-th root of unity.
GModule induce_character_module(const GLGroup& g, const UnipotentCharacter& chi, const FieldPtr& coeffs,
                                std::shared_ptr<const CosetTable> unipotent_table = nullptr);

/// Basis of Hom_G(source, target) as target.dim x source.dim matrices.
struct HomSpace {
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  std::vector<Matrix> basis;
  std::size_t dim() const { return basis.size(); }
};

/// Intertwiners solved on the generators with spinning: M is presented by a spanning set
/// built from seed vectors, and f is determined by its values on the seeds.
HomSpace hom_space(const GModule& source, const GModule& target);

struct Submodule {
  Echelon basis;
  GModule module;
};

/// Smallest submodule containing the seeds.
Submodule spin_submodule(const GModule& m, const std::vector<Vec>& seeds);
/// Action on an invariant subspace in the coordinates of its echelon basis.
GModule restrict_to(const GModule& m, const Echelon& sub);
/// M / sub on the non-pivot coordinates of sub.
GModule quotient_module(const GModule& m, const Echelon& sub);
GModule direct_sum(const std::vector<GModule>& parts, const FieldPtr& coeffs, std::size_t num_generators);
/// rho*(g) = rho(g^{-1})^T
GModule dual_module(const GModule& m);
GModule extend_scalars(const GModule& m, const FieldEmbedding& e);

/// Vectors fixed by every listed group element.
Matrix fixed_space(const GLGroup& g, const GModule& m, const std::vector<Matrix>& elements);

}  // namespace ulab
