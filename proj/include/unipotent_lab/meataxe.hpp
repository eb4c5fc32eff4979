#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "unipotent_lab/gln.hpp"
#include "unipotent_lab/module.hpp"
#include "unipotent_lab/poly.hpp"

namespace ulab {

inline constexpr int kSplitBudget = 200;
inline constexpr std::size_t kRandomWords = 10;

/// Witness for irreducibility: theta = sum c_i rho(w_i) has an irreducible factor p of its
/// characteristic polynomial with nullity(p(theta)) = deg p, and a kernel vector spins to
/// the whole module for both the module and its transpose.
struct NortonCertificate {
  std::vector<Word> words;
  std::vector<Elem> coefficients;
  poly::Poly factor;
  std::size_t nullity = 0;
  nlohmann::json to_json() const;
};

struct SplitResult {
  bool irreducible = false;
  std::optional<Echelon> submodule;
  NortonCertificate certificate;
  int attempts = 0;
};

/// Finds a proper nonzero submodule or certifies irreducibility; throws InconclusiveError
/// when `budget` random elements give neither.
SplitResult split_or_certify(const GModule& m, std::uint64_t seed, int budget = kSplitBudget);
bool verify_certificate(const GModule& m, const NortonCertificate& c);

struct CompositionSeries {
  std::vector<GModule> factors;         // bottom to top
  std::vector<std::size_t> filtration;  // dims of 0 < M_1 < ... < M
};

CompositionSeries composition_series(const GModule& m, std::uint64_t seed);

/// Both arguments irreducible: true iff Hom is nonzero. Dimension mismatch short-circuits.
bool iso_test(const GModule& a, const GModule& b);

/// Isomorphism classes of simple modules with trace fingerprints. Not thread-safe.
class SimpleCatalog {
 public:
  explicit SimpleCatalog(std::size_t num_generators);

  /// Index of the class of s, adding it if new.
  std::size_t add(const GModule& s);
  std::optional<std::size_t> find(const GModule& s) const;

  std::size_t size() const { return entries_.size(); }
  const GModule& module(std::size_t i) const { return entries_[i].module; }
  const std::vector<Elem>& fingerprint(std::size_t i) const { return entries_[i].fingerprint; }
  std::size_t end_dim(std::size_t i) const { return entries_[i].end_dim; }
  std::vector<Elem> fingerprint_of(const GModule& s) const;
  const std::vector<Word>& fingerprint_words() const { return words_; }
  /// Hom solves performed after a fingerprint match.
  std::size_t hom_solves() const { return hom_solves_; }
  /// Re-checks Hom(S_i, S_j) = 0 for all i != j and End(S_i) one-dimensional.
  bool verify() const;

 private:
  struct Entry {
    GModule module;
    std::vector<Elem> fingerprint;
    std::size_t end_dim;
  };
  std::vector<Word> words_;
  std::vector<Entry> entries_;
  mutable std::size_t hom_solves_ = 0;
};

/// Catalog indices of the composition factors, bottom to top.
std::vector<std::size_t> composition_factors(const GModule& m, SimpleCatalog& catalog, std::uint64_t seed);

struct AbsolutelyIrreducible {
  GModule module;
  std::uint32_t enlargement = 1;
};

/// Extends scalars by dim End(s) when that exceeds 1 and keeps one composition factor.
AbsolutelyIrreducible ensure_absolutely_irreducible(const GModule& s, std::uint64_t seed,
                                                    std::uint32_t max_degree = 8);

}  // namespace ulab
