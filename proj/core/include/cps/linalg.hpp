#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "cps/field.hpp"

namespace cps {

using FieldVector = std::vector<FieldScalar>;
using IntVector = std::vector<std::int64_t>;
using RationalVector = std::vector<Rational>;

FieldVector operator+(const FieldVector& x, const FieldVector& y);
FieldVector operator-(const FieldVector& x, const FieldVector& y);
FieldVector operator-(const FieldVector& x);
FieldVector operator*(const FieldScalar& s, const FieldVector& x);
FieldScalar dot(const FieldVector& x, const FieldVector& y);
bool is_zero(const FieldVector& x);
FieldVector to_field(const IntVector& v);
FieldVector to_field(const RationalVector& v);
std::vector<double> to_double(const FieldVector& v);

IntVector operator+(const IntVector& x, const IntVector& y);
IntVector operator-(const IntVector& x, const IntVector& y);
IntVector operator-(const IntVector& x);

/// Dense row-major matrix over a quadratic field.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  FieldMatrix(std::initializer_list<std::initializer_list<FieldScalar>> rows);

  static FieldMatrix identity(std::size_t n);
  /// Matrix whose columns are the given vectors.
  static FieldMatrix from_columns(const std::vector<FieldVector>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  FieldScalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const FieldScalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  FieldVector column(std::size_t c) const;
  FieldVector row(std::size_t r) const;
  FieldMatrix transpose() const;
  FieldMatrix conj() const;

  FieldScalar determinant() const;
  FieldMatrix inverse() const;
  /// Basis of {x : A x = 0}; free variables set to 1 in turn.
  std::vector<FieldVector> nullspace() const;
  std::size_t rank() const;
  bool is_diagonal() const;

  friend FieldMatrix operator*(const FieldMatrix& x, const FieldMatrix& y);
  friend FieldVector operator*(const FieldMatrix& x, const FieldVector& v);
  friend FieldMatrix operator+(const FieldMatrix& x, const FieldMatrix& y);
  friend FieldMatrix operator-(const FieldMatrix& x, const FieldMatrix& y);
  friend FieldMatrix operator*(const FieldScalar& s, const FieldMatrix& x);
  friend bool operator==(const FieldMatrix& x, const FieldMatrix& y);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<FieldScalar> data_;
};

FieldMatrix pow(const FieldMatrix& m, unsigned e);

/// Exact solution of M x = v. Throws kSingularMatrix when det(M) == 0.
FieldVector mat_solve(const FieldMatrix& m, const FieldVector& v);

/// Solves a (possibly rectangular) rational system; free variables are set to
/// zero. Returns nullopt when inconsistent.
std::optional<RationalVector> solve_rational(std::vector<RationalVector> rows, RationalVector rhs);

/// Small integer matrix with overflow-checked arithmetic.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);
  explicit IntMatrix(const std::vector<std::vector<std::int64_t>>& rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Integer determinant() const;
  /// Inverse of a unimodular matrix; throws kNotUnimodular otherwise.
  IntMatrix inverse() const;
  FieldMatrix to_field() const;
  std::vector<std::vector<std::int64_t>> to_rows() const;
  /// Coefficients c_0..c_k of det(x I - M), monic.
  std::vector<Integer> char_poly() const;
  std::string to_string() const;

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y);
  friend IntVector operator*(const IntMatrix& x, const IntVector& v);
  friend bool operator==(const IntMatrix& x, const IntMatrix& y) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

IntMatrix pow(const IntMatrix& m, unsigned e);

/// Multiplicative order of M acting on (Z/N)^k; 1 when N == 1.
std::uint64_t order_mod(const IntMatrix& m, const Integer& modulus, std::uint64_t cap = 1000000);

std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);

}  // namespace cps
