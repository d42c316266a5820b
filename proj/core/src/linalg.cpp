#include "cps/linalg.hpp"

#include <sstream>

#include "cps/error.hpp"

namespace cps {

namespace {

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::kDimensionMismatch, "vector sizes differ");
}

}  // namespace

FieldVector operator+(const FieldVector& x, const FieldVector& y) {
  require_same_size(x.size(), y.size());
  FieldVector r(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

FieldVector operator-(const FieldVector& x, const FieldVector& y) {
  require_same_size(x.size(), y.size());
  FieldVector r(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

FieldVector operator-(const FieldVector& x) {
  FieldVector r(x);
  for (auto& v : r) v = -v;
  return r;
}

FieldVector operator*(const FieldScalar& s, const FieldVector& x) {
  FieldVector r(x);
  for (auto& v : r) v *= s;
  return r;
}

FieldScalar dot(const FieldVector& x, const FieldVector& y) {
  require_same_size(x.size(), y.size());
  FieldScalar s;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

bool is_zero(const FieldVector& x) {
  for (const auto& v : x) {
    if (!v.is_zero()) return false;
  }
  return true;
}

FieldVector to_field(const IntVector& v) {
  FieldVector r;
  r.reserve(v.size());
  for (auto x : v) r.emplace_back(static_cast<long>(x));
  return r;
}

FieldVector to_field(const RationalVector& v) {
  FieldVector r;
  r.reserve(v.size());
  for (const auto& x : v) r.emplace_back(x);
  return r;
}

std::vector<double> to_double(const FieldVector& v) {
  std::vector<double> r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(x.to_double());
  return r;
}

IntVector operator+(const IntVector& x, const IntVector& y) {
  require_same_size(x.size(), y.size());
  IntVector r(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = checked_add(r[i], y[i]);
  return r;
}

IntVector operator-(const IntVector& x, const IntVector& y) {
  require_same_size(x.size(), y.size());
  IntVector r(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = checked_add(r[i], -y[i]);
  return r;
}

IntVector operator-(const IntVector& x) {
  IntVector r(x);
  for (auto& v : r) v = -v;
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::kBoundExceeded, "integer overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::kBoundExceeded, "integer overflow");
  return r;
}

// ---------------------------------------------------------------- FieldMatrix

FieldMatrix::FieldMatrix(std::initializer_list<std::initializer_list<FieldScalar>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::kDimensionMismatch, "ragged matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

FieldMatrix FieldMatrix::identity(std::size_t n) {
  FieldMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FieldMatrix FieldMatrix::from_columns(const std::vector<FieldVector>& columns) {
  if (columns.empty()) return {};
  FieldMatrix m(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    require_same_size(columns[c].size(), m.rows_);
    for (std::size_t r = 0; r < m.rows_; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

FieldVector FieldMatrix::column(std::size_t c) const {
  FieldVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

FieldVector FieldMatrix::row(std::size_t r) const {
  return FieldVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

FieldMatrix FieldMatrix::transpose() const {
  FieldMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

FieldMatrix FieldMatrix::conj() const {
  FieldMatrix t(*this);
  for (auto& v : t.data_) v = v.conj();
  return t;
}

FieldMatrix operator*(const FieldMatrix& x, const FieldMatrix& y) {
  if (x.cols_ != y.rows_) throw Error(ErrorCode::kDimensionMismatch, "matrix product shape");
  FieldMatrix r(x.rows_, y.cols_);
  for (std::size_t i = 0; i < x.rows_; ++i) {
    for (std::size_t k = 0; k < x.cols_; ++k) {
      const FieldScalar& a = x(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += a * y(k, j);
    }
  }
  return r;
}

FieldVector operator*(const FieldMatrix& x, const FieldVector& v) {
  if (x.cols_ != v.size()) throw Error(ErrorCode::kDimensionMismatch, "matrix-vector shape");
  FieldVector r(x.rows_);
  for (std::size_t i = 0; i < x.rows_; ++i) {
    for (std::size_t k = 0; k < x.cols_; ++k) {
      if (!x(i, k).is_zero() && !v[k].is_zero()) r[i] += x(i, k) * v[k];
    }
  }
  return r;
}

FieldMatrix operator+(const FieldMatrix& x, const FieldMatrix& y) {
  if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw Error(ErrorCode::kDimensionMismatch, "sum shape");
  FieldMatrix r(x);
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += y.data_[i];
  return r;
}

FieldMatrix operator-(const FieldMatrix& x, const FieldMatrix& y) {
  if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw Error(ErrorCode::kDimensionMismatch, "sum shape");
  FieldMatrix r(x);
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= y.data_[i];
  return r;
}

FieldMatrix operator*(const FieldScalar& s, const FieldMatrix& x) {
  FieldMatrix r(x);
  for (auto& v : r.data_) v *= s;
  return r;
}

bool operator==(const FieldMatrix& x, const FieldMatrix& y) {
  return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.data_ == y.data_;
}

namespace {

// Gauss-Jordan elimination in place; returns pivot columns.
std::vector<std::size_t> reduce_rows(FieldMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
    }
    FieldScalar inv = FieldScalar(1) / m(row, col);
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      FieldScalar f = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

FieldScalar FieldMatrix::determinant() const {
  if (rows_ != cols_) throw Error(ErrorCode::kDimensionMismatch, "determinant of non-square matrix");
  FieldMatrix m(*this);
  FieldScalar det = 1;
  for (std::size_t col = 0; col < cols_; ++col) {
    std::size_t piv = col;
    while (piv < rows_ && m(piv, col).is_zero()) ++piv;
    if (piv == rows_) return FieldScalar();
    if (piv != col) {
      for (std::size_t c = 0; c < cols_; ++c) std::swap(m(piv, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    FieldScalar inv = FieldScalar(1) / m(col, col);
    for (std::size_t r = col + 1; r < rows_; ++r) {
      if (m(r, col).is_zero()) continue;
      FieldScalar f = m(r, col) * inv;
      for (std::size_t c = col; c < cols_; ++c) m(r, c) -= f * m(col, c);
    }
  }
  return det;
}

FieldMatrix FieldMatrix::inverse() const {
  if (rows_ != cols_) throw Error(ErrorCode::kDimensionMismatch, "inverse of non-square matrix");
  FieldMatrix aug(rows_, 2 * cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) aug(r, c) = (*this)(r, c);
    aug(r, cols_ + r) = 1;
  }
  auto pivots = reduce_rows(aug);
  if (pivots.size() < rows_ || pivots.back() >= cols_) {
    throw Error(ErrorCode::kSingularMatrix, "matrix is singular");
  }
  FieldMatrix inv(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) inv(r, c) = aug(r, cols_ + c);
  }
  return inv;
}

std::vector<FieldVector> FieldMatrix::nullspace() const {
  FieldMatrix m(*this);
  auto pivots = reduce_rows(m);
  std::vector<bool> is_pivot(cols_, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<FieldVector> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    FieldVector v(cols_);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t FieldMatrix::rank() const {
  FieldMatrix m(*this);
  return reduce_rows(m).size();
}

bool FieldMatrix::is_diagonal() const {
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (r != c && !(*this)(r, c).is_zero()) return false;
    }
  }
  return true;
}

FieldMatrix pow(const FieldMatrix& m, unsigned e) {
  FieldMatrix result = FieldMatrix::identity(m.rows());
  FieldMatrix base = m;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

FieldVector mat_solve(const FieldMatrix& m, const FieldVector& v) {
  if (m.rows() != m.cols() || m.rows() != v.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "mat_solve shape");
  }
  FieldMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = v[r];
  }
  auto pivots = reduce_rows(aug);
  if (pivots.size() < m.rows() || pivots.back() >= m.cols()) {
    throw Error(ErrorCode::kSingularMatrix, "matrix is singular");
  }
  FieldVector x(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) x[r] = aug(r, m.cols());
  return x;
}

std::optional<RationalVector> solve_rational(std::vector<RationalVector> rows, RationalVector rhs) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : rows.front().size();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n_cols && row < n_rows; ++col) {
    std::size_t piv = row;
    while (piv < n_rows && sgn(rows[piv][col]) == 0) ++piv;
    if (piv == n_rows) continue;
    std::swap(rows[piv], rows[row]);
    std::swap(rhs[piv], rhs[row]);
    Rational inv = 1 / rows[row][col];
    for (std::size_t c = col; c < n_cols; ++c) rows[row][c] *= inv;
    rhs[row] *= inv;
    for (std::size_t r = 0; r < n_rows; ++r) {
      if (r == row || sgn(rows[r][col]) == 0) continue;
      Rational f = rows[r][col];
      for (std::size_t c = col; c < n_cols; ++c) rows[r][c] -= f * rows[row][c];
      rhs[r] -= f * rhs[row];
    }
    pivots.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < n_rows; ++r) {
    if (sgn(rhs[r]) != 0) return std::nullopt;
  }
  RationalVector x(n_cols, Rational(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = rhs[i];
  return x;
}

// ------------------------------------------------------------------ IntMatrix

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::kDimensionMismatch, "ragged matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix::IntMatrix(const std::vector<std::vector<std::int64_t>>& rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::kDimensionMismatch, "ragged matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::block_diag(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows_ + b.rows_, a.cols_ + b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    for (std::size_t c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
  }
  for (std::size_t r = 0; r < b.rows_; ++r) {
    for (std::size_t c = 0; c < b.cols_; ++c) m(a.rows_ + r, a.cols_ + c) = b(r, c);
  }
  return m;
}

FieldMatrix IntMatrix::to_field() const {
  FieldMatrix m(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(r, c) = FieldScalar(static_cast<long>((*this)(r, c)));
  }
  return m;
}

std::vector<std::vector<std::int64_t>> IntMatrix::to_rows() const {
  std::vector<std::vector<std::int64_t>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    out[r].assign(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }
  return out;
}

Integer IntMatrix::determinant() const {
  FieldScalar d = to_field().determinant();
  return d.a().get_num();
}

IntMatrix IntMatrix::inverse() const {
  Integer det = determinant();
  if (det != 1 && det != -1) {
    throw Error(ErrorCode::kNotUnimodular, "determinant " + det.get_str() + " is not +-1");
  }
  FieldMatrix inv = to_field().inverse();
  IntMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) r(i, j) = inv(i, j).a().get_num().get_si();
  }
  return r;
}

std::vector<Integer> IntMatrix::char_poly() const {
  // Faddeev-LeVerrier over the rationals.
  const std::size_t n = rows_;
  FieldMatrix a = to_field();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  FieldMatrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    FieldMatrix next = a * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += FieldScalar(c[n - k + 1]);
    mk = next;
    FieldMatrix am = a * mk;
    Rational trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i).a();
    c[n - k] = -trace / static_cast<long>(k);
  }
  std::vector<Integer> out;
  out.reserve(n + 1);
  for (const auto& q : c) out.push_back(q.get_num());
  return out;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ",[" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? "," : "") << (*this)(r, c);
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols_ != y.rows_) throw Error(ErrorCode::kDimensionMismatch, "matrix product shape");
  IntMatrix r(x.rows_, y.cols_);
  for (std::size_t i = 0; i < x.rows_; ++i) {
    for (std::size_t j = 0; j < y.cols_; ++j) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < x.cols_; ++k) s = checked_add(s, checked_mul(x(i, k), y(k, j)));
      r(i, j) = s;
    }
  }
  return r;
}

IntVector operator*(const IntMatrix& x, const IntVector& v) {
  if (x.cols_ != v.size()) throw Error(ErrorCode::kDimensionMismatch, "matrix-vector shape");
  IntVector r(x.rows_, 0);
  for (std::size_t i = 0; i < x.rows_; ++i) {
    for (std::size_t k = 0; k < x.cols_; ++k) r[i] = checked_add(r[i], checked_mul(x(i, k), v[k]));
  }
  return r;
}

IntMatrix pow(const IntMatrix& m, unsigned e) {
  IntMatrix result = IntMatrix::identity(m.rows());
  IntMatrix base = m;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

std::uint64_t order_mod(const IntMatrix& m, const Integer& modulus, std::uint64_t cap) {
  if (modulus == 1) return 1;
  const std::size_t n = m.rows();
  std::vector<Integer> base(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    Integer v = Integer(static_cast<long>(m(i / n, i % n))) % modulus;
    if (v < 0) v += modulus;
    base[i] = v;
  }
  std::vector<Integer> cur = base;
  auto is_identity = [&](const std::vector<Integer>& a) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (a[i * n + j] != (i == j ? 1 : 0)) return false;
      }
    }
    return true;
  };
  for (std::uint64_t k = 1; k <= cap; ++k) {
    if (is_identity(cur)) return k;
    std::vector<Integer> next(n * n, Integer(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Integer s = 0;
        for (std::size_t l = 0; l < n; ++l) s += cur[i * n + l] * base[l * n + j];
        next[i * n + j] = s % modulus;
        if (next[i * n + j] < 0) next[i * n + j] += modulus;
      }
    }
    cur = std::move(next);
  }
  throw Error(ErrorCode::kBoundExceeded, "matrix order modulo " + modulus.get_str() + " exceeds cap");
}

}  // namespace cps
