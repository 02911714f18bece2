#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "condensate/errors.hpp"
#include "condensate/scalar.hpp"

namespace condensate {

/// Dense row-major matrix of exact rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
      throw InputError("matrix entry count " + std::to_string(entries_.size()) + " != " +
                       std::to_string(rows_) + "x" + std::to_string(cols_));
  }

  /// Row-wise literal, e.g. Matrix::from_rows({{1, 2}, {2, 4}}).
  static Matrix from_rows(std::initializer_list<std::initializer_list<Scalar>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw InputError("ragged matrix literal");
      std::size_t j = 0;
      for (const auto& v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<Scalar>& entries() const noexcept { return entries_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  bool is_square() const noexcept { return rows_ == cols_; }
  bool is_zero() const {
    for (const auto& e : entries_)
      if (!condensate::is_zero(e)) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix column_block(std::size_t first, std::size_t count) const {
    Matrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw InputError("matrix product shape mismatch: " + std::to_string(a.rows_) + "x" +
                       std::to_string(a.cols_) + " * " + std::to_string(b.rows_) + "x" +
                       std::to_string(b.cols_));
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& aik = a(i, k);
        if (condensate::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Scalar& bkj = b(k, j);
          if (!condensate::is_zero(bkj)) c(i, j) += aik * bkj;
        }
      }
    return c;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    a.check_same_shape(b);
    for (std::size_t i = 0; i < a.entries_.size(); ++i) a.entries_[i] += b.entries_[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    a.check_same_shape(b);
    for (std::size_t i = 0; i < a.entries_.size(); ++i) a.entries_[i] -= b.entries_[i];
    return a;
  }

  friend Matrix operator*(const Scalar& s, Matrix a) {
    for (auto& e : a.entries_) e *= s;
    return a;
  }

  /// Number of nonzero entries.
  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& e : entries_)
      if (!condensate::is_zero(e)) ++n;
    return n;
  }

 private:
  void check_same_shape(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw InputError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> entries_;
};

}  // namespace condensate
