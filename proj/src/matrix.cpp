#include "unipotent_lab/matrix.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "unipotent_lab/errors.hpp"

namespace ulab {

Matrix Matrix::identity(FieldPtr field, std::size_t n) {
  Matrix m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(FieldPtr field, const std::vector<Vec>& rows, std::size_t cols) {
  Matrix m(std::move(field), rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  return m;
}

Vec Matrix::column(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::operator*(const Matrix& b) const {
  if (cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
  Matrix c(field_, rows_, b.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < cols_; ++k) {
      Elem a = (*this)(i, k);
      if (a != 0) field_->axpy(out, a, b.row(k));
    }
  }
  return c;
}

Matrix Matrix::operator+(const Matrix& b) const {
  Matrix c = *this;
  c.add_scaled(1, b);
  return c;
}

Matrix Matrix::operator-(const Matrix& b) const {
  Matrix c = *this;
  c.add_scaled(field_->neg(1), b);
  return c;
}

Matrix Matrix::scaled(Elem a) const {
  Matrix c = *this;
  field_->scale(c.data_, a);
  return c;
}

void Matrix::add_scaled(Elem a, const Matrix& b) {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("matrix sum shape mismatch");
  field_->axpy(data_, a, b.data_);
}

Vec Matrix::apply(std::span<const Elem> v) const {
  Vec out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    Elem acc = 0;
    const auto r = row(i);
    for (std::size_t j = 0; j < cols_; ++j)
      if (r[j] != 0 && v[j] != 0) acc = field_->add(acc, field_->mul(r[j], v[j]));
    out[i] = acc;
  }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Elem e) { return e == 0; });
}

bool Matrix::is_identity() const {
  if (!square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != (i == j ? 1u : 0u)) return false;
  return true;
}

Elem Matrix::trace() const {
  Elem t = 0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t = field_->add(t, (*this)(i, i));
  return t;
}

nlohmann::json Matrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < rows_; ++i) {
    auto r = row(i);
    rows.push_back(std::vector<Elem>(r.begin(), r.end()));
  }
  return rows;
}

Matrix Matrix::from_json(FieldPtr field, const nlohmann::json& j) {
  const std::size_t r = j.size();
  const std::size_t c = r == 0 ? 0 : j[0].size();
  Matrix m(std::move(field), r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < c; ++k) m(i, k) = j[i][k].get<Elem>();
  return m;
}

std::vector<std::size_t> rref_in_place(Matrix& a) {
  const auto& f = *a.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != r) std::swap_ranges(a.row(piv).begin(), a.row(piv).end(), a.row(r).begin());
    f.scale(a.row(r), f.inv(a(r, c)));
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i != r && a(i, c) != 0) f.axpy(a.row(i), f.neg(a(i, c)), a.row(r));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(Matrix a) { return rref_in_place(a).size(); }

Matrix null_space(const Matrix& a) {
  Matrix r = a;
  auto pivots = rref_in_place(r);
  const auto& f = *a.field();
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(a.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(r(i, free));
    basis.push_back(std::move(v));
  }
  return Matrix::from_rows(a.field(), basis, a.cols());
}

Matrix left_null_space(const Matrix& a) { return null_space(a.transpose()); }

std::optional<Matrix> inverse(const Matrix& a) {
  if (!a.square()) return std::nullopt;
  const std::size_t n = a.rows();
  Matrix aug(a.field(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = rref_in_place(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix inv(a.field(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

Elem determinant(Matrix a) {
  if (!a.square()) throw std::invalid_argument("determinant of non-square matrix");
  const auto& f = *a.field();
  const std::size_t n = a.rows();
  Elem det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap_ranges(a.row(piv).begin(), a.row(piv).end(), a.row(c).begin());
      det = f.neg(det);
    }
    det = f.mul(det, a(c, c));
    Elem inv = f.inv(a(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) != 0) f.axpy(a.row(i), f.neg(f.mul(a(i, c), inv)), a.row(c));
    }
  }
  return det;
}

void Echelon::reduce(Vec& v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Elem c = v[pivots_[i]];
    if (c != 0) field_->axpy(v, field_->neg(c), rows_[i]);
  }
}

bool Echelon::contains(Vec v) const {
  reduce(v);
  return std::all_of(v.begin(), v.end(), [](Elem e) { return e == 0; });
}

bool Echelon::insert(Vec v) {
  if (v.size() != dim_) throw std::invalid_argument("echelon vector length mismatch");
  reduce(v);
  std::size_t piv = 0;
  while (piv < dim_ && v[piv] == 0) ++piv;
  if (piv == dim_) return false;
  field_->scale(v, field_->inv(v[piv]));
  for (auto& r : rows_) {
    if (r[piv] != 0) field_->axpy(r, field_->neg(r[piv]), v);
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(piv);
  return true;
}

Vec Echelon::coordinates(std::span<const Elem> v) const {
  Vec c(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) c[i] = v[pivots_[i]];
  return c;
}

std::vector<std::size_t> Echelon::non_pivots() const {
  std::vector<bool> is_pivot(dim_, false);
  for (auto p : pivots_) is_pivot[p] = true;
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < dim_; ++c)
    if (!is_pivot[c]) out.push_back(c);
  return out;
}

Matrix Echelon::basis_matrix() const { return Matrix::from_rows(field_, rows_, dim_); }

bool TrackedBasis::insert(const Vec& v, std::size_t index, Vec& coeffs) {
  const auto& f = *f_;
  Vec w = v;
  Vec t(dim_, 0);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Elem e = w[pivots_[r]];
    if (e == 0) continue;
    Elem ne = f.neg(e);
    f.axpy(w, ne, rows_[r]);
    f.axpy(t, ne, track_[r]);
  }
  std::size_t piv = 0;
  while (piv < dim_ && w[piv] == 0) ++piv;
  if (piv == dim_) {
    coeffs.resize(dim_);
    for (std::size_t i = 0; i < dim_; ++i) coeffs[i] = f.neg(t[i]);
    return false;
  }
  t[index] = f.add(t[index], 1);
  Elem inv = f.inv(w[piv]);
  f.scale(w, inv);
  f.scale(t, inv);
  rows_.push_back(std::move(w));
  track_.push_back(std::move(t));
  pivots_.push_back(piv);
  return true;
}

long long integer_determinant(std::vector<std::vector<long long>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  long long sign = 1;
  long long prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace ulab
