#ifndef COLLECTIVE_MATRIX_HPP
#define COLLECTIVE_MATRIX_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "collective/rational.hpp"

namespace collective {

class SingularMatrixError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Small dense matrix over the rationals, row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix diagonal(const RationalVector& entries);
  static RationalMatrix from_columns(const std::vector<RationalVector>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalVector row(std::size_t r) const;
  RationalVector column(std::size_t c) const;

  RationalMatrix operator*(const RationalMatrix& other) const;
  RationalVector operator*(const RationalVector& v) const;
  bool operator==(const RationalMatrix& other) const = default;

  /// Gauss-Jordan elimination with exact pivots. Throws SingularMatrixError.
  RationalMatrix inverse() const;
  Rational determinant() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

std::string format_matrix_rows(const RationalMatrix& m);

}  // namespace collective

#endif  // COLLECTIVE_MATRIX_HPP
