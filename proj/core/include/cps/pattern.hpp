#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "cps/field.hpp"
#include "cps/linalg.hpp"
#include "cps/scheme.hpp"
#include "cps/window.hpp"

namespace cps {

/// Internal shift t (the pattern is cut with W - t). With a direction the
/// pattern is the one-sided limit at t + eps d1 + eps^2 d2, which selects a
/// single pattern even for singular t.
struct Shift {
  FieldVector base;
  std::optional<FieldVector> d1;
  std::optional<FieldVector> d2;

  static Shift zero(int n) { return Shift{FieldVector(static_cast<std::size_t>(n)), {}, {}}; }
  static Shift at(FieldVector t) { return Shift{std::move(t), {}, {}}; }
  Shift with_direction(FieldVector a, FieldVector b = {}) const;
};

struct PatternPoint {
  IntVector lattice;
  int colour = 0;
  friend bool operator==(const PatternPoint&, const PatternPoint&) = default;
};

/// Cut-and-project points g with |g_phys| <= radius and star(g) + t in W.
struct PointSet {
  Shift shift;
  FieldScalar radius;
  std::vector<PatternPoint> points;       ///< lexicographic by lattice vector
  std::vector<IntVector> boundary_hits;   ///< star(g) + t on the window boundary; not in `points`

  bool contains(const IntVector& g) const;
  std::optional<int> colour_of(const IntVector& g) const;
  bool singular() const { return !boundary_hits.empty(); }
};

PointSet generate(const Scheme& scheme, const Window& window, const Shift& shift, const FieldScalar& radius);

/// Physical coordinates (in the eigenbasis) of a 1D pattern, ascending.
std::vector<FieldScalar> physical_coordinates(const Scheme& scheme, const PointSet& ps);

struct GapCount {
  FieldScalar length;
  std::size_t count = 0;
};

/// Distinct gaps between consecutive points, ascending by length.
std::vector<GapCount> gaps_1d(const Scheme& scheme, const PointSet& ps);

struct Patch {
  IntVector centre;
  FieldScalar radius;
  std::vector<ColouredVector> points;  ///< relative to the centre, sorted
  bool singular = false;               ///< a flagged boundary hit lies in the ball
};

/// Throws kOutOfRadius unless the ball of radius r around g lies inside the
/// generated ball.
Patch patch_at(const Scheme& scheme, const PointSet& ps, const IntVector& g, const FieldScalar& r);

/// Points x with x + v present (with colour) for all `in` and absent for all
/// `out`, restricted to x whose indicator ball lies inside the generated ball.
std::vector<IntVector> indicator_set(const Scheme& scheme, const PointSet& ps, const Indicator& ind);

/// Canonical representative of t modulo Gamma_<: star of the fractional part
/// of the rational lift of t.
FieldVector torus_param(const Scheme& scheme, const FieldVector& t);

/// Rational shifts with denominator 9973 drawn uniformly from the bounding
/// box of the window, reproducible for a given seed on every platform.
std::vector<Shift> random_shifts(const Window& window, std::size_t count, std::uint64_t seed);

/// |g_phys| <= r, decided exactly.
bool phys_within(const Scheme& scheme, const FieldVector& p, const FieldScalar& r);

}  // namespace cps
