#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "unipotent_lab/field.hpp"
#include "unipotent_lab/matrix.hpp"

namespace ulab {

/// A word in the group generators; gens[w[0]] * gens[w[1]] * ...
using Word = std::vector<std::uint8_t>;

/// Ordered tuple of positive integers summing to n; indexes standard parabolics.
using Composition = std::vector<int>;

/// All 2^{n-1} compositions of n: by number of parts, then lexicographically descending.
std::vector<Composition> standard_parabolics(int n);

/// |GL_n(F_q)| = prod_{i<n} (q^n - q^i).
std::uint64_t gl_order(int n, std::uint64_t q);

inline constexpr std::uint64_t kDefaultGroupBound = 100000;

/// Every invertible n x n matrix over fq, each once, in row-major lexicographic order.
std::vector<Matrix> enumerate_group(int n, const FieldPtr& fq,
                                    std::uint64_t bound = kDefaultGroupBound);

/// GL_n(F_q) materialised: generators, element index, and a breadth-first word for every
/// element. Immutable after construction.
class GLGroup {
 public:
  GLGroup(int n, FieldPtr fq, std::uint64_t bound = kDefaultGroupBound);

  int n() const { return n_; }
  const FieldPtr& field() const { return fq_; }
  std::uint64_t order() const { return elements_.size(); }
  std::uint32_t q() const { return fq_->order(); }

  /// diag(z,1,...,1) with z primitive, the n-cycle permutation matrix, 1 + E_{12}.
  /// Generators equal to the identity are dropped (n = 1, or q = 2 for the diagonal).
  const std::vector<Matrix>& generators() const { return gens_; }
  const std::vector<std::string>& generator_names() const { return gen_names_; }

  const std::vector<Matrix>& elements() const { return elements_; }
  const Matrix& element(std::size_t i) const { return elements_[i]; }
  std::size_t index_of(const Matrix& g) const;
  std::uint64_t key(const Matrix& g) const;
  const Matrix& identity() const { return elements_[identity_index_]; }
  std::size_t identity_index() const { return identity_index_; }

  /// Shortest word (in positive generator powers) for element i.
  Word bfs_word(std::size_t i) const;
  Matrix evaluate(const Word& w) const;
  /// Row-reduce g to the identity; each elementary factor contributes its shortest word.
  Word factor_into_generators(const Matrix& g) const;
  std::size_t word_length_bound() const;
  /// Elements in breadth-first order from the identity; parent(i) precedes i and
  /// element(i) = generators()[parent_generator(i)] * element(parent(i)).
  const std::vector<std::uint32_t>& bfs_order() const { return bfs_order_; }
  std::size_t parent(std::size_t i) const { return parent_[i]; }
  std::size_t parent_generator(std::size_t i) const { return parent_gen_[i]; }

  Matrix multiply(const Matrix& a, const Matrix& b) const { return a * b; }

 private:
  int n_;
  FieldPtr fq_;
  std::vector<Matrix> gens_;
  std::vector<std::string> gen_names_;
  std::vector<Matrix> elements_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> parent_gen_;
  std::vector<std::uint32_t> bfs_order_;
  std::size_t identity_index_ = 0;
  std::size_t max_bfs_depth_ = 0;
};

/// Block upper triangular matrices for a composition of n.
class StandardParabolic {
 public:
  explicit StandardParabolic(Composition c);

  const Composition& composition() const { return comp_; }
  int n() const { return static_cast<int>(block_.size()); }
  int block_of(int i) const { return block_[i]; }
  bool contains(const Matrix& g) const;
  bool in_levi(const Matrix& g) const;
  /// Strictly upper triangular within-block coordinates.
  std::vector<std::pair<int, int>> simple_root_coords() const;
  std::vector<std::pair<int, int>> non_simple_root_coords() const;
  int radical_dim() const;
  std::uint64_t levi_order(std::uint64_t q) const;
  std::uint64_t order(std::uint64_t q) const;
  std::string name() const;

 private:
  Composition comp_;
  std::vector<int> block_;
};

/// Permutation matrix w with w M_alpha w^{-1} = M_beta for compositions that are
/// rearrangements of each other (block permutation).
Matrix block_permutation(const Composition& alpha, const Composition& beta, const FieldPtr& fq);

/// Ordered left-coset transversal of a subgroup H; locate(g) is the index of gH.
class CosetTable {
 public:
  using KeyFn = std::function<std::string(const Matrix&)>;

  CosetTable(std::string subgroup, std::vector<Matrix> reps, KeyFn key);

  const std::string& subgroup() const { return subgroup_; }
  std::size_t index() const { return reps_.size(); }
  const std::vector<Matrix>& reps() const { return reps_; }
  const Matrix& rep(std::size_t i) const { return reps_[i]; }
  const Matrix& rep_inverse(std::size_t i) const { return rep_inv_[i]; }
  std::size_t locate(const Matrix& g) const;

 private:
  std::string subgroup_;
  std::vector<Matrix> reps_;
  std::vector<Matrix> rep_inv_;
  KeyFn key_;
  std::unordered_map<std::string, std::size_t> by_key_;
};

/// Key of gP: reduced echelon forms of the column spans of g up to each block boundary.
std::string parabolic_coset_key(const Matrix& g, const Composition& c);
/// Canonical representative of gU, U the upper unitriangular group.
Matrix unipotent_coset_rep(const Matrix& g);

CosetTable coset_transversal(const GLGroup& g, const StandardParabolic& p);
/// Transversal of G/U with canonical representatives.
CosetTable unipotent_transversal(const GLGroup& g);

/// Number of (P,Q) double cosets in G, by counting P-orbits on G/Q.
std::size_t count_double_cosets(const GLGroup& g, const StandardParabolic& p,
                                const StandardParabolic& q);

}  // namespace ulab
