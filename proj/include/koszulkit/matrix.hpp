#pragma once

// Dense matrices over an arbitrary exact scalar.  Sizes in this project stay
// tiny (ranks <= a few dozen), so the representation is a flat row-major
// vector with no sparsity or blocking tricks.

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "koszulkit/numeric.hpp"
#include "koszulkit/polynomial.hpp"

namespace koszulkit {

template <class R>
class Matrix {
public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, R(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<R> entries)
      : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows * cols) throw std::invalid_argument("matrix: entry count mismatch");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = R(1);
    return m;
  }
  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  R& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const R& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!is_zero_entry(x)) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] + b.a_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] - b.a_[i];
    return r;
  }
  Matrix operator-() const {
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix: product shape mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const R& aik = a.at(i, k);
        if (is_zero_entry(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r.at(i, j) += aik * b.at(k, j);
      }
    return r;
  }
  Matrix scaled(const R& c) const {
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
    return r;
  }

  Matrix transposed() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  std::vector<R> column(std::size_t j) const {
    std::vector<R> c(rows_, R(0));
    for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
  }
  void set_column(std::size_t j, const std::vector<R>& c) {
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) = c[i];
  }

  Matrix columns(const std::vector<std::size_t>& idx) const {
    Matrix r(rows_, idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
      for (std::size_t i = 0; i < rows_; ++i) r.at(i, j) = at(i, idx[j]);
    return r;
  }
  Matrix row_range(std::size_t lo, std::size_t hi) const {  // rows [lo, hi)
    Matrix r(hi - lo, cols_);
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r.at(i - lo, j) = at(i, j);
    return r;
  }

  static Matrix hstack(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_) throw std::invalid_argument("matrix: hstack row mismatch");
    Matrix r(a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
    }
    return r;
  }
  static Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.cols_) throw std::invalid_argument("matrix: vstack column mismatch");
    Matrix r(a.rows_ + b.rows_, a.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) r.at(a.rows_ + i, j) = b.at(i, j);
    return r;
  }
  // Block diagonal [[a, 0], [0, b]].
  static Matrix diag_blocks(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows_ + b.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) r.at(a.rows_ + i, a.cols_ + j) = b.at(i, j);
    return r;
  }

  static std::vector<R> apply(const Matrix& m, const std::vector<R>& v) {
    if (m.cols_ != v.size()) throw std::invalid_argument("matrix: apply shape mismatch");
    std::vector<R> r(m.rows_, R(0));
    for (std::size_t i = 0; i < m.rows_; ++i)
      for (std::size_t j = 0; j < m.cols_; ++j) r[i] += m.at(i, j) * v[j];
    return r;
  }

  static bool is_zero_entry(const R& x) {
    using koszulkit::is_zero;
    return is_zero(x);
  }

private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix: shape mismatch");
  }
  std::size_t rows_, cols_;
  std::vector<R> a_;
};

}  // namespace koszulkit
