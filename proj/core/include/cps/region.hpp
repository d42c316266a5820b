#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cps/field.hpp"
#include "cps/linalg.hpp"

namespace cps {

struct Interval {
  FieldScalar lo;
  FieldScalar hi;
};

/// Convex polygon with counterclockwise vertices, no repeated or collinear
/// consecutive vertices, positive area.
struct ConvexPolygon {
  std::vector<FieldVector> vertices;
};

enum class Location { kInside, kBoundary, kOutside };

const char* location_name(Location loc);

/// Closed half-plane {x : normal . x <= offset}.
struct HalfPlane {
  FieldVector normal;
  FieldScalar offset;
};

struct Segment {
  FieldVector a;
  FieldVector b;
};

/// Regularised (closure of interior) subset of a 1- or 2-dimensional
/// internal space. In 1D it is a sorted union of disjoint closed intervals,
/// in 2D a list of interior-disjoint convex pieces. Zero-measure parts are
/// never stored, so every operation is the kappa-regularised one.
class Region {
 public:
  Region() = default;
  explicit Region(int dim) : dim_(dim) {}

  static Region empty(int dim) { return Region(dim); }
  static Region interval(const FieldScalar& lo, const FieldScalar& hi);
  static Region intervals(const std::vector<Interval>& parts);
  /// Convex polygon from its vertices in any rotational order.
  static Region polygon(const std::vector<FieldVector>& vertices);
  /// Union of convex pieces which may overlap.
  static Region polygons(const std::vector<std::vector<FieldVector>>& pieces);
  static Region convex_hull(std::vector<FieldVector> points);
  /// Axis-aligned box [lo, hi] in any dimension 1 or 2.
  static Region box(const FieldVector& lo, const FieldVector& hi);

  int dim() const { return dim_; }
  bool is_empty() const { return intervals_.empty() && pieces_.empty(); }
  const std::vector<Interval>& interval_list() const { return intervals_; }
  const std::vector<ConvexPolygon>& pieces() const { return pieces_; }
  std::size_t piece_count() const { return dim_ == 1 ? intervals_.size() : pieces_.size(); }

  FieldScalar measure() const;
  /// Exact axis-aligned bounds; requires a nonempty region.
  std::pair<FieldVector, FieldVector> bounds() const;
  std::vector<FieldVector> vertex_points() const;

  Region intersect(const Region& other) const;
  Region unite(const Region& other) const;
  Region subtract(const Region& other) const;
  /// Regularised complement inside `box`.
  Region complement(const Region& box) const;
  Region linear_image(const FieldMatrix& t) const;
  Region translate(const FieldVector& v) const;

  bool equals(const Region& other) const;
  bool subset_of(const Region& other) const;
  bool interiors_disjoint(const Region& other) const;

  Location locate(const FieldVector& x) const;
  /// Membership of x + eps d1 + eps^2 d2 for infinitesimal eps > 0. In 1D only
  /// the sign of d1[0] matters. Never returns kBoundary when d1, d2 are
  /// linearly independent (2D) or d1 != 0 (1D).
  bool contains_limit(const FieldVector& x, const FieldVector& d1, const FieldVector& d2) const;

  /// Maximal pieces of the topological boundary: endpoints in 1D (as
  /// degenerate segments), edge sub-segments in 2D.
  std::vector<Segment> boundary_segments() const;

  /// Region::translate(shift) of `other` equals this region.
  std::optional<FieldVector> congruent_by_translation(const Region& other) const;

  std::string describe() const;

 private:
  void require_same(const Region& other) const;
  void add_piece(ConvexPolygon p);

  int dim_ = 0;
  std::vector<Interval> intervals_;
  std::vector<ConvexPolygon> pieces_;
};

struct SignCell {
  Region region;
  std::vector<bool> inside;  ///< per cutter
};

/// Cells of `base` cut by every cutter region; cells partition the base.
/// Throws kCutterOverflow when there are more cutters than `max_cutters`.
std::vector<SignCell> arrangement_cells(const Region& base, const std::vector<Region>& cutters,
                                        std::size_t max_cutters = 64);

/// Internal building blocks shared with window-kit.
FieldScalar cross2(const FieldVector& a, const FieldVector& b);
std::vector<HalfPlane> edge_halfplanes(const ConvexPolygon& p);
std::optional<ConvexPolygon> clip(const ConvexPolygon& p, const HalfPlane& h);

}  // namespace cps
