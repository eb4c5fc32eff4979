#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "unipotent_lab/field.hpp"

namespace ulab {

using Vec = std::vector<Elem>;

/// Dense row-major matrix over a finite field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(FieldPtr field, std::size_t n);
  static Matrix from_rows(FieldPtr field, const std::vector<Vec>& rows, std::size_t cols);

  const FieldPtr& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Elem& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Elem operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<Elem> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Elem> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vec column(std::size_t j) const;
  const std::vector<Elem>& data() const { return data_; }
  std::vector<Elem>& data() { return data_; }

  Matrix operator*(const Matrix& b) const;
  Matrix operator+(const Matrix& b) const;
  Matrix operator-(const Matrix& b) const;
  Matrix scaled(Elem a) const;
  /// this += a * b
  void add_scaled(Elem a, const Matrix& b);
  Vec apply(std::span<const Elem> v) const;  // M v (column convention)
  Matrix transpose() const;
  bool is_zero() const;
  bool is_identity() const;
  Elem trace() const;

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  nlohmann::json to_json() const;
  static Matrix from_json(FieldPtr field, const nlohmann::json& j);

 private:
  FieldPtr field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

/// Row-reduced echelon form in place; returns pivot columns.
std::vector<std::size_t> rref_in_place(Matrix& a);
std::size_t rank(Matrix a);
/// Basis (as rows) of {v : A v = 0}.
Matrix null_space(const Matrix& a);
/// Basis (as rows) of {z : z A = 0}.
Matrix left_null_space(const Matrix& a);
std::optional<Matrix> inverse(const Matrix& a);
Elem determinant(Matrix a);

/// Incrementally maintained reduced echelon basis of a subspace of F^d.
/// Coordinates of a vector in the span are its entries at the pivot columns.
class Echelon {
 public:
  Echelon(FieldPtr field, std::size_t dim) : field_(std::move(field)), dim_(dim) {}

  std::size_t ambient_dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  bool full() const { return rows_.size() == dim_; }
  const std::vector<Vec>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  const FieldPtr& field() const { return field_; }

  /// Reduce v against the basis in place; v ends zero iff it lay in the span.
  void reduce(Vec& v) const;
  bool contains(Vec v) const;
  /// Adds v if independent; returns whether the basis grew.
  bool insert(Vec v);
  /// Coordinates of a vector known to lie in the span.
  Vec coordinates(std::span<const Elem> v) const;
  /// Sorted list of non-pivot columns.
  std::vector<std::size_t> non_pivots() const;
  Matrix basis_matrix() const;

 private:
  FieldPtr field_;
  std::size_t dim_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

/// Semi-echelon basis that remembers each row as a combination of the vectors inserted,
/// so a dependent vector comes back expanded in those vectors.
class TrackedBasis {
 public:
  TrackedBasis(FieldPtr field, std::size_t dim) : f_(std::move(field)), dim_(dim) {}

  /// Inserts v as vector number `index` (< dim) if independent; otherwise fills coeffs with
  /// v = sum coeffs[i] * (vector i).
  bool insert(const Vec& v, std::size_t index, Vec& coeffs);
  std::size_t size() const { return rows_.size(); }

 private:
  FieldPtr f_;
  std::size_t dim_;
  std::vector<Vec> rows_;
  std::vector<Vec> track_;
  std::vector<std::size_t> pivots_;
};

/// Integer determinant by fraction-free elimination (exact for small entries).
long long integer_determinant(std::vector<std::vector<long long>> a);

}  // namespace ulab
