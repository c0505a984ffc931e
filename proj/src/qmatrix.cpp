#include "qmatrix.hpp"

#include <cassert>
#include <stdexcept>

namespace lspace {

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool QMatrix::is_zero() const {
  for (const auto& x : data_)
    if (!lspace::is_zero(x)) return false;
  return true;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
  QMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rat& a = at(i, k);
      if (lspace::is_zero(a)) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const Rat& b = o.at(k, j);
        if (!lspace::is_zero(b)) r.at(i, j) += a * b;
      }
    }
  return r;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("matrix sum: dimension mismatch");
  QMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("matrix difference: dimension mismatch");
  QMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

QMatrix QMatrix::scaled(const Rat& a) const {
  QMatrix r = *this;
  for (auto& x : r.data_) x *= a;
  return r;
}

QMatrix QMatrix::transpose() const {
  QMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

QVec QMatrix::apply(const QVec& v) const {
  if (v.size() != cols_) throw std::invalid_argument("matrix apply: dimension mismatch");
  QVec r = zero_vec(rows_);
  for (std::size_t j = 0; j < cols_; ++j) {
    if (lspace::is_zero(v[j])) continue;
    for (std::size_t i = 0; i < rows_; ++i) {
      const Rat& a = at(i, j);
      if (!lspace::is_zero(a)) r[i] += a * v[j];
    }
  }
  return r;
}

std::vector<std::size_t> QMatrix::rref() {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
    std::size_t sel = rows_;
    for (std::size_t i = row; i < rows_; ++i)
      if (!lspace::is_zero(at(i, col))) {
        sel = i;
        break;
      }
    if (sel == rows_) continue;
    if (sel != row)
      for (std::size_t j = 0; j < cols_; ++j) std::swap(at(sel, j), at(row, j));
    Rat inv = 1 / at(row, col);
    for (std::size_t j = col; j < cols_; ++j) at(row, j) *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == row) continue;
      Rat f = at(i, col);
      if (lspace::is_zero(f)) continue;
      for (std::size_t j = col; j < cols_; ++j) at(i, j) -= f * at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t QMatrix::rank() const {
  QMatrix m = *this;
  return m.rref().size();
}

QMatrix QMatrix::kernel_basis() const {
  QMatrix m = *this;
  auto pivots = m.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::size_t nullity = cols_ - pivots.size();
  QMatrix k(cols_, nullity);
  std::size_t out = 0;
  for (std::size_t free_col = 0; free_col < cols_; ++free_col) {
    if (is_pivot[free_col]) continue;
    k.at(free_col, out) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      k.at(pivots[r], out) = -m.at(r, free_col);
    ++out;
  }
  return k;
}

QMatrix QMatrix::image_basis() const {
  QMatrix m = *this;
  auto pivots = m.rref();
  QMatrix im(rows_, pivots.size());
  for (std::size_t j = 0; j < pivots.size(); ++j)
    for (std::size_t i = 0; i < rows_; ++i) im.at(i, j) = at(i, pivots[j]);
  return im;
}

std::optional<QVec> QMatrix::solve(const QVec& b) const {
  if (b.size() != rows_) throw std::invalid_argument("solve: dimension mismatch");
  QMatrix aug(rows_, cols_ + 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_) = b[i];
  }
  auto pivots = aug.rref();
  if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;  // inconsistent
  QVec x = zero_vec(cols_);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, cols_);
  return x;
}

QMatrix QMatrix::hcat(const QMatrix& o) const {
  if (rows_ != o.rows_) throw std::invalid_argument("hcat: dimension mismatch");
  QMatrix r(rows_, cols_ + o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
  }
  return r;
}

QMatrix QMatrix::col(std::size_t j) const {
  QMatrix c(rows_, 1);
  for (std::size_t i = 0; i < rows_; ++i) c.at(i, 0) = at(i, j);
  return c;
}

void QMatrix::set_col(std::size_t j, const QVec& v) {
  assert(v.size() == rows_);
  for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
}

QVec QMatrix::col_vec(std::size_t j) const {
  QVec v = zero_vec(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

Subspace Subspace::span(std::size_t ambient, const std::vector<QVec>& gens) {
  QMatrix m(gens.size(), ambient);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].size() != ambient) throw std::invalid_argument("span: dimension mismatch");
    for (std::size_t j = 0; j < ambient; ++j) m.at(i, j) = gens[i][j];
  }
  auto pivots = m.rref();
  Subspace s(ambient);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    QVec row = zero_vec(ambient);
    for (std::size_t j = 0; j < ambient; ++j) row[j] = m.at(r, j);
    s.rows_.push_back(std::move(row));
  }
  return s;
}

namespace {
// Reduce v against RREF rows; returns the residual and the coefficients used.
QVec reduce_against(const std::vector<QVec>& rows, const QVec& v, QVec* coeffs) {
  QVec r = v;
  if (coeffs) *coeffs = zero_vec(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t p = 0;
    while (p < rows[i].size() && is_zero(rows[i][p])) ++p;
    if (p == rows[i].size()) continue;
    Rat f = r[p];  // pivot entry is 1 in RREF
    if (is_zero(f)) continue;
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= f * rows[i][j];
    if (coeffs) (*coeffs)[i] = f;
  }
  return r;
}
}  // namespace

bool Subspace::contains(const QVec& v) const {
  if (v.size() != ambient_) throw std::invalid_argument("contains: dimension mismatch");
  return vec_is_zero(reduce_against(rows_, v, nullptr));
}

bool Subspace::contains(const Subspace& other) const {
  for (const auto& r : other.rows_)
    if (!contains(r)) return false;
  return true;
}

bool Subspace::operator==(const Subspace& o) const {
  return ambient_ == o.ambient_ && rows_ == o.rows_;
}

std::optional<QVec> Subspace::coordinates(const QVec& v) const {
  QVec c;
  QVec res = reduce_against(rows_, v, &c);
  if (!vec_is_zero(res)) return std::nullopt;
  return c;
}

}  // namespace lspace
