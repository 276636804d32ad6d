#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "varstab/rational.hpp"

namespace varstab {

using Vec = std::vector<Rational>;

Vec zeros(std::size_t n);
Vec unit(std::size_t n, std::size_t i);
Vec from_ints(std::initializer_list<long> values);

Rational dot(const Vec& a, const Vec& b);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator-(const Vec& a);
Vec operator*(const Rational& s, const Vec& a);
bool is_zero(const Vec& a);

/// Concatenates two vectors.
Vec concat(const Vec& a, const Vec& b);
Vec slice(const Vec& a, std::size_t begin, std::size_t count);

/// Positive rescaling to a primitive integer vector (gcd of entries is 1).
Vec primitive(const Vec& a);

std::string to_string(const Vec& v);

/// Dense row-major rational matrix.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  static RatMatrix identity(std::size_t n);
  static RatMatrix from_rows(std::size_t cols, const std::vector<Vec>& rows);
  static RatMatrix from_ints(std::initializer_list<std::initializer_list<long>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec row(std::size_t i) const;
  Vec col(std::size_t j) const;
  std::vector<Vec> row_list() const;

  RatMatrix transpose() const;
  /// Columns [begin, begin + count).
  RatMatrix col_block(std::size_t begin, std::size_t count) const;
  RatMatrix select_rows(const std::vector<std::size_t>& idx) const;
  RatMatrix hstack(const RatMatrix& right) const;

  Vec operator*(const Vec& v) const;
  RatMatrix operator*(const RatMatrix& o) const;
  RatMatrix operator+(const RatMatrix& o) const;

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form; `pivots` receives the pivot column of each
/// nonzero row.
RatMatrix rref(const RatMatrix& m, std::vector<std::size_t>* pivots = nullptr);

std::size_t rank(const RatMatrix& m);
std::size_t rank(std::size_t cols, const std::vector<Vec>& rows);

/// Basis of {x : M x = 0}; empty iff the kernel is trivial.
std::vector<Vec> kernel_basis(const RatMatrix& m);

/// Some solution of M x = rhs, if one exists.
std::optional<Vec> solve_linear(const RatMatrix& m, const Vec& rhs);

/// True iff v lies in the span of the given vectors.
bool in_span(const std::vector<Vec>& span, const Vec& v);

}  // namespace varstab
