#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unipotent_lab/meataxe.hpp"
#include "unipotent_lab/module.hpp"

namespace ulab {

/// Non-increasing positive parts.
using Partition = std::vector<int>;

/// All partitions of n, lexicographically descending: (n), (n-1,1), ...
std::vector<Partition> partitions(int n);
/// a <= b in dominance: every prefix sum of a is at most that of b.
bool dominance_leq(const Partition& a, const Partition& b);
/// Decreasing linear extension of dominance with ties broken reverse-lexicographically.
std::vector<Partition> linear_extension(int n);
/// A second decreasing extension (Kahn's algorithm, lexicographically smallest source first).
std::vector<Partition> alternate_linear_extension(int n);
Partition sort_to_partition(const Composition& c);
std::string partition_name(const Partition& p);

struct Labeling {
  std::vector<Partition> order;
  std::map<Partition, std::size_t> label;  // catalog index of D(lambda)
  std::map<Partition, std::vector<std::size_t>> factors;  // of ind_{P(kappa)} 1
};

/// D(kappa) is the unique composition factor of ind_{P(kappa)} 1 not labelled by a strictly
/// dominating partition. Throws LabelingError with the candidate list otherwise.
Labeling label_simples(const GLGroup& g, const FieldPtr& coeffs, SimpleCatalog& catalog, std::uint64_t seed,
                       std::vector<Partition> order = {});

struct DecompositionMatrix {
  int n = 0;
  std::uint32_t q = 0;
  std::uint32_t l = 0;
  std::vector<Partition> partitions;
  std::vector<std::size_t> dims;
  std::vector<std::vector<long long>> matrix;  // [kappa][mu]

  nlohmann::json to_json() const;
  /// Header line plus one line per row partition.
  std::string to_csv() const;
};

DecompositionMatrix decomposition_matrix(const Labeling& lab, const SimpleCatalog& catalog, int n, std::uint32_t q,
                                         std::uint32_t l);

struct Violation {
  Partition row;
  Partition col;
  long long value;
  std::string reason;
};

/// Entries with m != 0 where col does not dominate row, and diagonal entries other than 1.
std::vector<Violation> verify_unitriangular(const DecompositionMatrix& d);

struct K0Check {
  bool invertible = false;
  long long det = 0;
};
K0Check k0_generation_check(const DecompositionMatrix& d);

/// An invertible intertwiner M -> N, if one is found among random combinations of a Hom basis.
std::optional<Matrix> find_isomorphism(const GModule& m, const GModule& n, std::uint64_t seed, int tries = 64);

}  // namespace ulab
