#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

namespace cps {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p/q" or a decimal such as "0.25" into a reduced rational.
Rational parse_rational(std::string_view text);
std::string rational_to_string(const Rational& q);

/// Largest integer not exceeding q.
Integer floor(const Rational& q);

/// Writes n = s^2 * f with f squarefree and returns f (sign preserved).
Integer squarefree_part(const Integer& n);

/// Exact element a + b*sqrt(D) of a real quadratic field.
///
/// D == 0 marks a plain rational that adopts the radicand of whatever it is
/// combined with. Two scalars with distinct nonzero radicands never mix.
class FieldScalar {
 public:
  FieldScalar() = default;
  FieldScalar(long value) : a_(value) {}  // NOLINT(google-explicit-constructor)
  FieldScalar(Rational a) : a_(std::move(a)) { a_.canonicalize(); }  // NOLINT
  FieldScalar(Rational a, Rational b, std::int64_t radicand);

  static FieldScalar sqrt(std::int64_t radicand);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  std::int64_t radicand() const { return d_; }

  bool is_rational() const { return sgn(b_) == 0; }
  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  int sign() const;

  FieldScalar conj() const;
  /// Field norm a^2 - b^2 D.
  Rational norm() const;
  FieldScalar abs() const { return sign() < 0 ? -*this : *this; }
  Integer floor() const;
  double to_double() const;

  /// Rational bounds lo <= x <= hi with hi - lo <= |b| * 2^-bits.
  std::pair<Rational, Rational> enclose(unsigned bits = 64) const;

  FieldScalar operator-() const;
  FieldScalar& operator+=(const FieldScalar& o);
  FieldScalar& operator-=(const FieldScalar& o);
  FieldScalar& operator*=(const FieldScalar& o);
  FieldScalar& operator/=(const FieldScalar& o);

  friend FieldScalar operator+(FieldScalar x, const FieldScalar& y) { return x += y; }
  friend FieldScalar operator-(FieldScalar x, const FieldScalar& y) { return x -= y; }
  friend FieldScalar operator*(FieldScalar x, const FieldScalar& y) { return x *= y; }
  friend FieldScalar operator/(FieldScalar x, const FieldScalar& y) { return x /= y; }

  friend bool operator==(const FieldScalar& x, const FieldScalar& y);
  friend std::strong_ordering operator<=>(const FieldScalar& x, const FieldScalar& y);

  /// Human syntax "p/q+r/s*sqrtD"; parse accepts the same plus "(…)" wrappers.
  std::string to_string() const;
  static FieldScalar parse(std::string_view text, std::int64_t default_radicand = 0);

 private:
  std::int64_t join(const FieldScalar& o) const;

  Rational a_;
  Rational b_;
  std::int64_t d_ = 0;
};

/// Three-way exact comparison; throws kFieldMismatch on distinct radicands.
std::strong_ordering field_cmp(const FieldScalar& x, const FieldScalar& y);

inline FieldScalar galois_conj(const FieldScalar& x) { return x.conj(); }

std::ostream& operator<<(std::ostream& os, const FieldScalar& x);

}  // namespace cps
