#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "mvph/rational.hpp"

namespace mvph {

/// Dense row-major matrix over Q. Small sizes only; all algorithms are
/// plain Gaussian elimination.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);
  /// Entrywise exact image of a double matrix.
  static RationalMatrix exact(const Eigen::MatrixXd& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RationalMatrix submatrix(const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& cols) const;
  RationalMatrix transpose() const;
  Eigen::MatrixXd to_double() const;
  bool is_zero() const;

  RationalMatrix operator-() const;
  friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Exact determinant; the empty matrix has determinant 1.
Rational determinant(const RationalMatrix& a);

/// Exact rank.
std::size_t rank(const RationalMatrix& a);

}  // namespace mvph
