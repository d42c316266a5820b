#pragma once

#include <random>

#include "cps/field.hpp"
#include "cps/linalg.hpp"
#include "cps/region.hpp"
#include "cps/scheme.hpp"
#include "cps/substitution.hpp"
#include "cps/window.hpp"

namespace cps::testing {

inline FieldScalar q(long p, long d = 1) { return FieldScalar(Rational(p, d)); }
inline FieldScalar s5(long p, long d = 1) { return FieldScalar(Rational(0), Rational(p, d), 5); }
inline FieldScalar s2(long p, long d = 1) { return FieldScalar(Rational(0), Rational(p, d), 2); }

inline IntVector unit(int k, int i, std::int64_t s = 1) {
  IntVector e(static_cast<std::size_t>(k), 0);
  e[static_cast<std::size_t>(i)] = s;
  return e;
}

inline Scheme fibonacci() { return Scheme::build(IntMatrix{{1, 1}, {1, 0}}); }
inline Scheme non_sturm() { return Scheme::build(IntMatrix{{2, -1}, {1, -1}}); }
inline Scheme ammann_beenker() { return Scheme::build(IntMatrix{{1, 1, 0, -1}, {1, 1, 1, 0}, {0, 1, 1, 1}, {-1, 0, 1, 1}}); }
inline Scheme blockdiag() {
  return Scheme::build(IntMatrix::block_diag(IntMatrix{{1, 1}, {1, 0}}, IntMatrix{{2, 1}, {1, 1}}));
}

/// Vertex-at-origin window [0, star(e2 - e1)].
inline Window fibonacci_window(const Scheme& s) {
  return Window::single(Region::interval(FieldScalar(0), s.star(IntVector{-1, 1})[0]));
}
inline FieldVector fibonacci_centre(const Scheme& s) { return {s.star(IntVector{-1, 1})[0] / FieldScalar(2)}; }

/// Octagon star([0,1]^4) translated so that its centre is the origin.
inline Window octagon(const Scheme& ab) {
  RationalVector half(4, Rational(-1, 2));
  return Window::single(canonical_window(ab).translate(ab.star(half)));
}

inline Region square(const FieldScalar& lo, const FieldScalar& hi) { return Region::box({lo, lo}, {hi, hi}); }

inline std::mt19937_64& rng() {
  static std::mt19937_64 r(20240611);
  return r;
}

/// Uniform-ish rational in [-span, span] with denominator at most `den`.
inline Rational random_rational(long span, long den) {
  long d = std::uniform_int_distribution<long>(1, den)(rng());
  long n = std::uniform_int_distribution<long>(-span * d, span * d)(rng());
  return Rational(n, d);
}

}  // namespace cps::testing
