#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cps/field.hpp"
#include "cps/linalg.hpp"

namespace cps {

/// Eventually periodic continued fraction [p0; p1, ..., pm, (a0, ..., an)*].
/// The first preperiod entry is the integer part and may be zero or negative;
/// every other quotient is positive.
struct ContinuedFraction {
  std::vector<Integer> preperiod;
  std::vector<Integer> period;

  friend bool operator==(const ContinuedFraction&, const ContinuedFraction&) = default;
};

/// Expands a quadratic irrational; the period is found by exact repetition of
/// the complete quotient.
ContinuedFraction cf_expand(const FieldScalar& alpha);

/// Exact value of an eventually periodic continued fraction.
FieldScalar cf_value(const ContinuedFraction& cf);

/// First `count` partial quotients of the infinite expansion.
std::vector<Integer> cf_terms(const ContinuedFraction& cf, std::size_t count);

struct SlopeMatrix {
  IntMatrix matrix;      ///< M with M (1, alpha) = lambda (1, alpha), |lambda| > 1
  IntMatrix normalizer;  ///< T taking the slope line into 0 < alpha' < 1
  FieldScalar alpha;
  FieldScalar eigenvalue;
};

/// GL(2,Z) matrix preserving the line of slope alpha, built from products of
/// [[a,1],[1,0]] blocks and oriented so the line is expanded.
SlopeMatrix cf_to_matrix(const ContinuedFraction& cf);

/// Validated Euclidean cut-and-project scheme over Z^k with a hyperbolic
/// unimodular M. Physical space is the expanding generalised eigenspace,
/// internal space the contracting one; coordinates are taken in the
/// eigenbases. Copies share the immutable data.
class Scheme {
 public:
  /// Validates M and derives the splitting. When `radicand` is empty it is
  /// inferred from the spectrum.
  static Scheme build(const IntMatrix& m, std::optional<std::int64_t> radicand = std::nullopt,
                      std::string label = {});

  /// Companion matrix of x^{k} + c_{k-1} x^{k-1} + ... + c_0 (coeffs = c_0..c_{k-1});
  /// requires a one-dimensional contracting line.
  static Scheme companion(const std::vector<std::int64_t>& coeffs);

  int k() const;
  int d() const;
  int n() const;
  std::int64_t radicand() const;
  const std::string& label() const;
  const IntMatrix& matrix() const;
  const IntMatrix& matrix_inverse() const;

  const std::vector<FieldVector>& phys_basis() const;
  const std::vector<FieldVector>& int_basis() const;
  const FieldMatrix& proj_phys() const;  ///< d x k
  const FieldMatrix& proj_int() const;   ///< n x k
  const FieldMatrix& L() const;          ///< d x d, M on physical coordinates
  const FieldMatrix& A() const;          ///< n x n, M on internal coordinates

  /// Eigenvalues of A and L, with multiplicity.
  const std::vector<FieldScalar>& contracting_eigenvalues() const;
  const std::vector<FieldScalar>& expanding_eigenvalues() const;

  bool block_diagonal() const;
  bool density_certified() const;
  const std::vector<std::string>& warnings() const;

  FieldVector star(const IntVector& g) const;
  FieldVector project_phys(const IntVector& g) const;
  FieldVector star(const RationalVector& q) const;
  FieldVector project_phys(const RationalVector& q) const;

  /// Ambient Euclidean squared norm of a physical (resp. internal) coordinate vector.
  FieldScalar phys_norm2(const FieldVector& p) const;
  FieldScalar int_norm2(const FieldVector& x) const;

  /// Floating images used only for prefilters and rendering.
  std::vector<double> star_approx(const IntVector& g) const;
  std::vector<double> phys_approx(const IntVector& g) const;
  double phys_norm_approx(const std::vector<double>& p) const;

  /// Unique q in Q^k with star(q) = x when the Q-span of Gamma_< fills the
  /// internal space, or any solution otherwise; nullopt if none exists.
  std::optional<RationalVector> rational_lift(const FieldVector& x) const;

  FieldMatrix A_pow(unsigned m) const;
  FieldMatrix L_pow(unsigned m) const;
  IntMatrix M_pow(unsigned m) const;

  /// Restriction of an integer matrix to physical/internal coordinates, or
  /// nullopt when it does not preserve the subspace.
  std::optional<FieldMatrix> restrict_phys(const IntMatrix& s) const;
  std::optional<FieldMatrix> restrict_int(const IntMatrix& s) const;

  struct Data;

 private:
  explicit Scheme(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

/// Monic integer quadratic factor x^2 - trace x + norm of a characteristic polynomial.
struct QuadraticFactor {
  std::int64_t trace;
  std::int64_t norm;
  int multiplicity;
};

/// Splits a monic integer polynomial (coeffs c_0..c_k) into x-+1 roots and
/// quadratic factors x^2 - t x + n with n = +-1. Throws kUnsupportedSpectrum
/// if something else remains.
std::vector<QuadraticFactor> factor_unimodular_poly(const std::vector<Integer>& coeffs);

}  // namespace cps
