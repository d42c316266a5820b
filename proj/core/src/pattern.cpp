#include "cps/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cps/error.hpp"
#include "cps/lattice.hpp"

namespace cps {

Shift Shift::with_direction(FieldVector a, FieldVector b) const {
  Shift s = *this;
  if (b.empty() && a.size() == 2) b = FieldVector{-a[1], a[0]};
  if (b.empty()) b = a;
  s.d1 = std::move(a);
  s.d2 = std::move(b);
  return s;
}

bool PointSet::contains(const IntVector& g) const { return colour_of(g).has_value(); }

std::optional<int> PointSet::colour_of(const IntVector& g) const {
  auto it = std::lower_bound(points.begin(), points.end(), g,
                             [](const PatternPoint& p, const IntVector& v) { return p.lattice < v; });
  if (it == points.end() || it->lattice != g) return std::nullopt;
  return it->colour;
}

bool phys_within(const Scheme& scheme, const FieldVector& p, const FieldScalar& r) {
  if (r.sign() < 0) return false;
  return scheme.phys_norm2(p) <= r * r;
}

PointSet generate(const Scheme& scheme, const Window& window, const Shift& shift, const FieldScalar& radius) {
  if (static_cast<int>(shift.base.size()) != scheme.n() || window.dim() != scheme.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "window or shift does not match the internal dimension");
  }
  if (radius.sign() <= 0) throw Error(ErrorCode::kValidation, "radius must be positive");
  PointSet ps;
  ps.shift = shift;
  ps.radius = radius;
  auto [lo, hi] = window.support().bounds();
  for (const auto& g : enumerate_lattice(scheme, radius, lo - shift.base, hi - shift.base)) {
    FieldVector x = scheme.star(g) + shift.base;
    bool hit = false;
    for (const auto& c : window.components()) {
      if (shift.d1) {
        if (c.region.contains_limit(x, *shift.d1, *shift.d2)) {
          ps.points.push_back({g, c.colour});
          break;
        }
        continue;
      }
      Location loc = c.region.locate(x);
      if (loc == Location::kInside) {
        ps.points.push_back({g, c.colour});
        break;
      }
      if (loc == Location::kBoundary) hit = true;
    }
    if (hit && (ps.points.empty() || ps.points.back().lattice != g)) ps.boundary_hits.push_back(g);
  }
  return ps;
}

std::vector<FieldScalar> physical_coordinates(const Scheme& scheme, const PointSet& ps) {
  if (scheme.d() != 1) throw Error(ErrorCode::kDimensionMismatch, "physical space is not one-dimensional");
  std::vector<FieldScalar> xs;
  xs.reserve(ps.points.size());
  for (const auto& p : ps.points) xs.push_back(scheme.project_phys(p.lattice)[0]);
  std::sort(xs.begin(), xs.end());
  return xs;
}

std::vector<GapCount> gaps_1d(const Scheme& scheme, const PointSet& ps) {
  auto xs = physical_coordinates(scheme, ps);
  if (xs.size() < 2) throw Error(ErrorCode::kValidation, "fewer than two points");
  std::vector<FieldScalar> gaps;
  for (std::size_t i = 1; i < xs.size(); ++i) gaps.push_back(xs[i] - xs[i - 1]);
  std::sort(gaps.begin(), gaps.end());
  std::vector<GapCount> out;
  for (auto& g : gaps) {
    if (!out.empty() && out.back().length == g) {
      ++out.back().count;
    } else {
      out.push_back({std::move(g), 1});
    }
  }
  return out;
}

namespace {

double approx_distance(const Scheme& scheme, const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return scheme.phys_norm_approx(d);
}

}  // namespace

Patch patch_at(const Scheme& scheme, const PointSet& ps, const IntVector& g, const FieldScalar& r) {
  FieldVector pg = scheme.project_phys(g);
  if (!phys_within(scheme, pg, ps.radius - r)) {
    throw Error(ErrorCode::kOutOfRadius, "patch ball leaves the generated ball");
  }
  Patch patch{g, r, {}, false};
  const double fr = r.to_double() * (1 + 1e-9) + 1e-9;
  auto fg = scheme.phys_approx(g);
  for (const auto& p : ps.points) {
    if (approx_distance(scheme, scheme.phys_approx(p.lattice), fg) > fr) continue;
    IntVector rel = p.lattice - g;
    if (phys_within(scheme, scheme.project_phys(rel), r)) patch.points.push_back({rel, p.colour});
  }
  for (const auto& h : ps.boundary_hits) {
    if (phys_within(scheme, scheme.project_phys(IntVector(h - g)), r)) patch.singular = true;
  }
  std::sort(patch.points.begin(), patch.points.end(), [](const ColouredVector& a, const ColouredVector& b) {
    return std::tie(a.vector, a.colour) < std::tie(b.vector, b.colour);
  });
  return patch;
}

std::vector<IntVector> indicator_set(const Scheme& scheme, const PointSet& ps, const Indicator& ind) {
  FieldScalar reach;
  for (const auto* list : {&ind.in, &ind.out}) {
    for (const auto& v : *list) {
      // Compare squared norms to keep the reach exact.
      FieldScalar n2 = scheme.phys_norm2(scheme.project_phys(v.vector));
      while (reach * reach < n2) reach += FieldScalar(1);
    }
  }
  std::vector<IntVector> out;
  for (const auto& p : ps.points) {
    if (p.colour != ind.centre_colour) continue;
    if (!phys_within(scheme, scheme.project_phys(p.lattice), ps.radius - reach)) continue;
    bool ok = true;
    for (const auto& v : ind.in) {
      auto c = ps.colour_of(p.lattice + v.vector);
      if (!c || *c != v.colour) {
        ok = false;
        break;
      }
    }
    for (const auto& v : ind.out) {
      if (!ok) break;
      auto c = ps.colour_of(p.lattice + v.vector);
      if (c && *c == v.colour) ok = false;
    }
    if (ok) out.push_back(p.lattice);
  }
  return out;
}

FieldVector torus_param(const Scheme& scheme, const FieldVector& t) {
  auto q = scheme.rational_lift(t);
  if (!q) throw Error(ErrorCode::kUnsupported, "shift is not in the rational span of the internal lattice");
  for (auto& c : *q) c -= Rational(floor(c));
  return scheme.star(*q);
}

std::vector<Shift> random_shifts(const Window& window, std::size_t count, std::uint64_t seed) {
  constexpr long kDen = 9973;
  std::mt19937_64 rng(seed);
  auto [lo, hi] = window.support().bounds();
  std::vector<Shift> out;
  for (std::size_t i = 0; i < count; ++i) {
    FieldVector t;
    for (std::size_t c = 0; c < lo.size(); ++c) {
      // Engine output is specified exactly by the standard; distributions are not.
      long a = (lo[c] * FieldScalar(kDen)).floor().get_si();
      long b = (hi[c] * FieldScalar(kDen)).floor().get_si() + 1;
      long p = a + static_cast<long>(rng() % static_cast<std::uint64_t>(b - a + 1));
      t.push_back(FieldScalar(Rational(p, kDen)));
    }
    out.push_back(Shift::at(std::move(t)));
  }
  return out;
}

}  // namespace cps
