#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rational.hpp"

namespace lspace {

// Dense matrix over Q. Rows index the target basis, columns the source basis;
// a linear map sends source basis vector j to the column vector col(j).
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

  static QMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rat& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rat& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const;
  bool operator==(const QMatrix& o) const = default;

  QMatrix operator*(const QMatrix& o) const;
  QMatrix operator+(const QMatrix& o) const;
  QMatrix operator-(const QMatrix& o) const;
  QMatrix scaled(const Rat& a) const;
  QMatrix transpose() const;

  QVec apply(const QVec& v) const;

  // Reduced row echelon form; returns pivot column indices.
  std::vector<std::size_t> rref();

  std::size_t rank() const;

  // Basis of ker(this), as columns gathered in a matrix (cols = nullity).
  QMatrix kernel_basis() const;

  // Basis of im(this): the pivot columns of the original matrix.
  QMatrix image_basis() const;

  // A particular solution of this * x = b, if one exists.
  std::optional<QVec> solve(const QVec& b) const;

  // Horizontal concatenation [this | o].
  QMatrix hcat(const QMatrix& o) const;

  QMatrix col(std::size_t j) const;
  void set_col(std::size_t j, const QVec& v);
  QVec col_vec(std::size_t j) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rat> data_;
};

// A subspace of Q^n, stored as an RREF row basis (each row a vector).
class Subspace {
 public:
  explicit Subspace(std::size_t ambient) : ambient_(ambient) {}
  // Span of the given vectors.
  static Subspace span(std::size_t ambient, const std::vector<QVec>& gens);

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<QVec>& basis() const { return rows_; }

  bool contains(const QVec& v) const;
  bool contains(const Subspace& other) const;
  bool operator==(const Subspace& o) const;

  // Coordinates of v in the row basis, if v lies in the subspace.
  std::optional<QVec> coordinates(const QVec& v) const;

 private:
  std::size_t ambient_;
  std::vector<QVec> rows_;  // RREF rows, pivot-sorted
};

}  // namespace lspace
