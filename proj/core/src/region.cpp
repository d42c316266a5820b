#include "cps/region.hpp"

#include <algorithm>
#include <sstream>

#include "cps/error.hpp"

namespace cps {

const char* location_name(Location loc) {
  switch (loc) {
    case Location::kInside: return "inside";
    case Location::kBoundary: return "boundary";
    case Location::kOutside: return "outside";
  }
  return "?";
}

FieldScalar cross2(const FieldVector& a, const FieldVector& b) { return a[0] * b[1] - a[1] * b[0]; }

namespace {

FieldVector vec2(FieldScalar x, FieldScalar y) { return FieldVector{std::move(x), std::move(y)}; }

FieldScalar twice_area(const std::vector<FieldVector>& v) {
  FieldScalar s;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross2(v[i], v[(i + 1) % v.size()]);
  return s;
}

// Drops repeated and collinear vertices and orients counterclockwise.
std::optional<ConvexPolygon> normalize(std::vector<FieldVector> v) {
  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < v.size() && v.size() >= 3; ++i) {
      const auto& prev = v[(i + v.size() - 1) % v.size()];
      const auto& next = v[(i + 1) % v.size()];
      if (v[i] == prev || cross2(v[i] - prev, next - v[i]).is_zero()) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (v.size() < 3) return std::nullopt;
  int s = twice_area(v).sign();
  if (s == 0) return std::nullopt;
  if (s < 0) std::reverse(v.begin(), v.end());
  return ConvexPolygon{std::move(v)};
}

std::optional<ConvexPolygon> convex_intersection(const ConvexPolygon& p, const ConvexPolygon& q) {
  std::optional<ConvexPolygon> cur = p;
  for (const auto& h : edge_halfplanes(q)) {
    cur = clip(*cur, h);
    if (!cur) return std::nullopt;
  }
  return cur;
}

std::vector<ConvexPolygon> convex_difference(const ConvexPolygon& p, const ConvexPolygon& q) {
  std::vector<ConvexPolygon> out;
  std::optional<ConvexPolygon> rest = p;
  for (const auto& h : edge_halfplanes(q)) {
    HalfPlane flipped{-h.normal, -h.offset};
    if (auto outside = clip(*rest, flipped)) out.push_back(std::move(*outside));
    rest = clip(*rest, h);
    if (!rest) break;
  }
  return out;
}

struct Box2 {
  FieldScalar x0, y0, x1, y1;
};

Box2 box_of(const ConvexPolygon& p) {
  Box2 b{p.vertices[0][0], p.vertices[0][1], p.vertices[0][0], p.vertices[0][1]};
  for (const auto& v : p.vertices) {
    if (v[0] < b.x0) b.x0 = v[0];
    if (v[0] > b.x1) b.x1 = v[0];
    if (v[1] < b.y0) b.y0 = v[1];
    if (v[1] > b.y1) b.y1 = v[1];
  }
  return b;
}

bool boxes_overlap(const Box2& a, const Box2& b) {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

std::vector<Interval> normalize_intervals(std::vector<Interval> parts) {
  std::erase_if(parts, [](const Interval& i) { return !(i.lo < i.hi); });
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (auto& i : parts) {
    if (!out.empty() && i.lo <= out.back().hi) {
      if (i.hi > out.back().hi) out.back().hi = i.hi;
    } else {
      out.push_back(std::move(i));
    }
  }
  return out;
}

int half_of(const FieldVector& d) {
  int sy = d[1].sign();
  return (sy > 0 || (sy == 0 && d[0].sign() > 0)) ? 0 : 1;
}

bool angle_less(const FieldVector& a, const FieldVector& b) {
  int ha = half_of(a);
  int hb = half_of(b);
  if (ha != hb) return ha < hb;
  return cross2(a, b).sign() > 0;
}

}  // namespace

std::vector<HalfPlane> edge_halfplanes(const ConvexPolygon& p) {
  std::vector<HalfPlane> out;
  const auto& v = p.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    FieldVector n = vec2(b[1] - a[1], a[0] - b[0]);
    FieldScalar c = dot(n, a);
    out.push_back({std::move(n), std::move(c)});
  }
  return out;
}

std::optional<ConvexPolygon> clip(const ConvexPolygon& p, const HalfPlane& h) {
  const auto& v = p.vertices;
  std::vector<FieldScalar> f;
  f.reserve(v.size());
  bool any_out = false;
  bool any_in = false;
  for (const auto& x : v) {
    f.push_back(dot(h.normal, x) - h.offset);
    int s = f.back().sign();
    any_out |= s > 0;
    any_in |= s < 0;
  }
  if (!any_out) return p;
  if (!any_in) return std::nullopt;
  std::vector<FieldVector> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t j = (i + 1) % v.size();
    int si = f[i].sign();
    int sj = f[j].sign();
    if (si <= 0) out.push_back(v[i]);
    if ((si < 0 && sj > 0) || (si > 0 && sj < 0)) {
      FieldScalar t = f[i] / (f[i] - f[j]);
      out.push_back(v[i] + t * (v[j] - v[i]));
    }
  }
  return normalize(std::move(out));
}

Region Region::interval(const FieldScalar& lo, const FieldScalar& hi) {
  return intervals({Interval{lo, hi}});
}

Region Region::intervals(const std::vector<Interval>& parts) {
  Region r(1);
  r.intervals_ = normalize_intervals(parts);
  return r;
}

Region Region::polygon(const std::vector<FieldVector>& vertices) {
  for (const auto& v : vertices) {
    if (v.size() != 2) throw Error(ErrorCode::kDimensionMismatch, "polygon vertex must be 2D");
  }
  Region r(2);
  auto p = normalize(vertices);
  if (!p) return r;
  auto hp = edge_halfplanes(*p);
  for (const auto& v : p->vertices) {
    for (const auto& h : hp) {
      if (dot(h.normal, v) > h.offset) throw Error(ErrorCode::kValidation, "polygon piece is not convex");
    }
  }
  r.pieces_.push_back(std::move(*p));
  return r;
}

Region Region::polygons(const std::vector<std::vector<FieldVector>>& pieces) {
  Region r(2);
  for (const auto& p : pieces) r = r.unite(polygon(p));
  return r;
}

Region Region::convex_hull(std::vector<FieldVector> points) {
  std::sort(points.begin(), points.end(), [](const FieldVector& a, const FieldVector& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return Region(2);
  std::vector<FieldVector> hull(2 * points.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]).sign() <= 0) --k;
    hull[k++] = points[i];
  }
  for (std::size_t i = points.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross2(hull[k - 1] - hull[k - 2], points[i - 1] - hull[k - 2]).sign() <= 0) --k;
    hull[k++] = points[i - 1];
  }
  hull.resize(k - 1);
  return polygon(hull);
}

Region Region::box(const FieldVector& lo, const FieldVector& hi) {
  if (lo.size() == 1) return interval(lo[0], hi[0]);
  if (lo.size() != 2) throw Error(ErrorCode::kDimensionMismatch, "box must be 1D or 2D");
  return polygon({vec2(lo[0], lo[1]), vec2(hi[0], lo[1]), vec2(hi[0], hi[1]), vec2(lo[0], hi[1])});
}

void Region::require_same(const Region& other) const {
  if (dim_ != other.dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "regions of dimension " + std::to_string(dim_) + " and " + std::to_string(other.dim_));
  }
}

void Region::add_piece(ConvexPolygon p) { pieces_.push_back(std::move(p)); }

FieldScalar Region::measure() const {
  FieldScalar s;
  for (const auto& i : intervals_) s += i.hi - i.lo;
  for (const auto& p : pieces_) s += twice_area(p.vertices);
  if (dim_ == 2) s /= FieldScalar(2);
  return s;
}

std::pair<FieldVector, FieldVector> Region::bounds() const {
  if (is_empty()) throw Error(ErrorCode::kValidation, "bounds of an empty region");
  if (dim_ == 1) return {FieldVector{intervals_.front().lo}, FieldVector{intervals_.back().hi}};
  FieldVector lo = pieces_[0].vertices[0];
  FieldVector hi = lo;
  for (const auto& p : pieces_) {
    for (const auto& v : p.vertices) {
      for (int c = 0; c < 2; ++c) {
        if (v[c] < lo[c]) lo[c] = v[c];
        if (v[c] > hi[c]) hi[c] = v[c];
      }
    }
  }
  return {lo, hi};
}

std::vector<FieldVector> Region::vertex_points() const {
  std::vector<FieldVector> out;
  for (const auto& i : intervals_) {
    out.push_back({i.lo});
    out.push_back({i.hi});
  }
  for (const auto& p : pieces_) {
    for (const auto& v : p.vertices) {
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
  }
  return out;
}

Region Region::intersect(const Region& other) const {
  require_same(other);
  Region r(dim_);
  if (dim_ == 1) {
    std::size_t i = 0;
    std::size_t j = 0;
    std::vector<Interval> parts;
    while (i < intervals_.size() && j < other.intervals_.size()) {
      const auto& a = intervals_[i];
      const auto& b = other.intervals_[j];
      const FieldScalar& lo = a.lo > b.lo ? a.lo : b.lo;
      const FieldScalar& hi = a.hi < b.hi ? a.hi : b.hi;
      if (lo < hi) parts.push_back({lo, hi});
      if (a.hi < b.hi) {
        ++i;
      } else {
        ++j;
      }
    }
    r.intervals_ = normalize_intervals(std::move(parts));
    return r;
  }
  std::vector<Box2> other_boxes;
  for (const auto& q : other.pieces_) other_boxes.push_back(box_of(q));
  for (const auto& p : pieces_) {
    Box2 bp = box_of(p);
    for (std::size_t j = 0; j < other.pieces_.size(); ++j) {
      if (!boxes_overlap(bp, other_boxes[j])) continue;
      if (auto c = convex_intersection(p, other.pieces_[j])) r.add_piece(std::move(*c));
    }
  }
  return r;
}

Region Region::subtract(const Region& other) const {
  require_same(other);
  Region r(dim_);
  if (dim_ == 1) {
    std::vector<Interval> parts;
    for (const auto& a : intervals_) {
      FieldScalar cur = a.lo;
      for (const auto& b : other.intervals_) {
        if (b.hi <= cur || b.lo >= a.hi) continue;
        if (b.lo > cur) parts.push_back({cur, b.lo});
        if (b.hi > cur) cur = b.hi;
        if (cur >= a.hi) break;
      }
      if (cur < a.hi) parts.push_back({cur, a.hi});
    }
    r.intervals_ = normalize_intervals(std::move(parts));
    return r;
  }
  std::vector<Box2> other_boxes;
  for (const auto& q : other.pieces_) other_boxes.push_back(box_of(q));
  for (const auto& p : pieces_) {
    std::vector<ConvexPolygon> parts{p};
    for (std::size_t j = 0; j < other.pieces_.size() && !parts.empty(); ++j) {
      std::vector<ConvexPolygon> next;
      for (auto& part : parts) {
        if (!boxes_overlap(box_of(part), other_boxes[j])) {
          next.push_back(std::move(part));
          continue;
        }
        for (auto& piece : convex_difference(part, other.pieces_[j])) next.push_back(std::move(piece));
      }
      parts = std::move(next);
    }
    for (auto& part : parts) r.add_piece(std::move(part));
  }
  return r;
}

Region Region::unite(const Region& other) const {
  require_same(other);
  if (dim_ == 1) {
    std::vector<Interval> parts = intervals_;
    parts.insert(parts.end(), other.intervals_.begin(), other.intervals_.end());
    return intervals(parts);
  }
  Region r = *this;
  for (auto& p : other.subtract(*this).pieces_) r.add_piece(std::move(p));
  return r;
}

Region Region::complement(const Region& box) const { return box.subtract(*this); }

Region Region::linear_image(const FieldMatrix& t) const {
  if (t.rows() != static_cast<std::size_t>(dim_) || t.cols() != static_cast<std::size_t>(dim_)) {
    throw Error(ErrorCode::kDimensionMismatch, "linear map has wrong size");
  }
  if (t.determinant().is_zero()) throw Error(ErrorCode::kSingularMatrix, "singular linear map");
  Region r(dim_);
  if (dim_ == 1) {
    std::vector<Interval> parts;
    for (const auto& i : intervals_) {
      FieldScalar a = t(0, 0) * i.lo;
      FieldScalar b = t(0, 0) * i.hi;
      if (a < b) {
        parts.push_back({a, b});
      } else {
        parts.push_back({b, a});
      }
    }
    r.intervals_ = normalize_intervals(std::move(parts));
    return r;
  }
  for (const auto& p : pieces_) {
    std::vector<FieldVector> v;
    for (const auto& x : p.vertices) v.push_back(t * x);
    if (auto q = normalize(std::move(v))) r.add_piece(std::move(*q));
  }
  return r;
}

Region Region::translate(const FieldVector& v) const {
  if (v.size() != static_cast<std::size_t>(dim_)) throw Error(ErrorCode::kDimensionMismatch, "translation has wrong size");
  Region r = *this;
  for (auto& i : r.intervals_) {
    i.lo += v[0];
    i.hi += v[0];
  }
  for (auto& p : r.pieces_) {
    for (auto& x : p.vertices) x = x + v;
  }
  return r;
}

bool Region::subset_of(const Region& other) const { return subtract(other).is_empty(); }

bool Region::equals(const Region& other) const {
  require_same(other);
  if (measure() != other.measure()) return false;
  return subset_of(other) && other.subset_of(*this);
}

bool Region::interiors_disjoint(const Region& other) const { return intersect(other).is_empty(); }

Location Region::locate(const FieldVector& x) const {
  if (x.size() != static_cast<std::size_t>(dim_)) throw Error(ErrorCode::kDimensionMismatch, "point has wrong size");
  if (dim_ == 1) {
    for (const auto& i : intervals_) {
      if (x[0] < i.lo) return Location::kOutside;
      if (x[0] == i.lo || x[0] == i.hi) return Location::kBoundary;
      if (x[0] < i.hi) return Location::kInside;
    }
    return Location::kOutside;
  }
  struct Touch {
    std::vector<FieldVector> active;
  };
  std::vector<Touch> touched;
  for (const auto& p : pieces_) {
    Touch t;
    bool out = false;
    for (auto& h : edge_halfplanes(p)) {
      int s = (dot(h.normal, x) - h.offset).sign();
      if (s > 0) {
        out = true;
        break;
      }
      if (s == 0) t.active.push_back(std::move(h.normal));
    }
    if (out) continue;
    if (t.active.empty()) return Location::kInside;
    touched.push_back(std::move(t));
  }
  if (touched.empty()) return Location::kOutside;

  // x lies on piece boundaries only: it is interior iff the tangent cones of
  // the touching pieces cover every direction.
  std::vector<FieldVector> rays;
  for (const auto& t : touched) {
    for (const auto& n : t.active) {
      FieldVector d = vec2(-n[1], n[0]);
      rays.push_back(d);
      rays.push_back(-d);
    }
  }
  std::sort(rays.begin(), rays.end(), angle_less);
  std::vector<FieldVector> uniq;
  for (auto& r : rays) {
    if (!uniq.empty() && half_of(uniq.back()) == half_of(r) && cross2(uniq.back(), r).is_zero()) continue;
    uniq.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    const auto& a = uniq[i];
    const auto& b = uniq[(i + 1) % uniq.size()];
    int cr = cross2(a, b).sign();
    FieldVector probe;
    if (cr > 0) {
      probe = a + b;
    } else if (cr < 0) {
      probe = -(a + b);
    } else {
      probe = vec2(-a[1], a[0]);
    }
    bool covered = false;
    for (const auto& t : touched) {
      bool all = true;
      for (const auto& n : t.active) {
        if (dot(n, probe).sign() >= 0) {
          all = false;
          break;
        }
      }
      if (all) {
        covered = true;
        break;
      }
    }
    if (!covered) return Location::kBoundary;
  }
  return Location::kInside;
}

bool Region::contains_limit(const FieldVector& x, const FieldVector& d1, const FieldVector& d2) const {
  if (dim_ == 1) {
    int dir = d1[0].sign();
    for (const auto& i : intervals_) {
      if (x[0] < i.lo || (x[0] == i.lo && dir <= 0)) return false;
      if (x[0] < i.hi || (x[0] == i.hi && dir < 0)) return true;
    }
    return false;
  }
  for (const auto& p : pieces_) {
    bool in = true;
    for (const auto& h : edge_halfplanes(p)) {
      int s = (dot(h.normal, x) - h.offset).sign();
      if (s == 0) s = dot(h.normal, d1).sign();
      if (s == 0) s = dot(h.normal, d2).sign();
      if (s >= 0) {
        in = false;
        break;
      }
    }
    if (in) return true;
  }
  return false;
}

std::vector<Segment> Region::boundary_segments() const {
  std::vector<Segment> out;
  if (dim_ == 1) {
    for (const auto& i : intervals_) {
      out.push_back({{i.lo}, {i.lo}});
      out.push_back({{i.hi}, {i.hi}});
    }
    return out;
  }
  std::vector<FieldVector> all = vertex_points();
  const FieldScalar half(Rational(1, 2));
  for (const auto& p : pieces_) {
    const auto& v = p.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto& a = v[i];
      const auto& b = v[(i + 1) % v.size()];
      FieldVector e = b - a;
      FieldScalar len2 = dot(e, e);
      std::vector<FieldScalar> params{FieldScalar(0), FieldScalar(1)};
      for (const auto& q : all) {
        if (!cross2(e, q - a).is_zero()) continue;
        FieldScalar t = dot(e, q - a) / len2;
        if (t > FieldScalar(0) && t < FieldScalar(1)) params.push_back(t);
      }
      std::sort(params.begin(), params.end());
      params.erase(std::unique(params.begin(), params.end()), params.end());
      for (std::size_t j = 0; j + 1 < params.size(); ++j) {
        FieldVector s = a + params[j] * e;
        FieldVector t = a + params[j + 1] * e;
        FieldVector mid = half * (s + t);
        if (locate(mid) == Location::kBoundary) out.push_back({std::move(s), std::move(t)});
      }
    }
  }
  return out;
}

std::optional<FieldVector> Region::congruent_by_translation(const Region& other) const {
  require_same(other);
  if (is_empty() || other.is_empty()) {
    if (is_empty() && other.is_empty()) return FieldVector(static_cast<std::size_t>(dim_));
    return std::nullopt;
  }
  auto lexmin = [](const Region& r) {
    auto pts = r.vertex_points();
    return *std::min_element(pts.begin(), pts.end(), [](const FieldVector& a, const FieldVector& b) {
      for (std::size_t c = 0; c < a.size(); ++c) {
        if (a[c] != b[c]) return a[c] < b[c];
      }
      return false;
    });
  };
  FieldVector shift = lexmin(*this) - lexmin(other);
  if (other.translate(shift).equals(*this)) return shift;
  return std::nullopt;
}

std::string Region::describe() const {
  std::ostringstream os;
  if (dim_ == 1) {
    for (const auto& i : intervals_) os << "[" << i.lo << ", " << i.hi << "] ";
  } else {
    os << pieces_.size() << " convex pieces, area " << measure().to_double();
  }
  return os.str();
}

std::vector<SignCell> arrangement_cells(const Region& base, const std::vector<Region>& cutters,
                                        std::size_t max_cutters) {
  if (cutters.size() > max_cutters) {
    throw Error(ErrorCode::kCutterOverflow, std::to_string(cutters.size()) + " cutters exceed the cap of " +
                                                std::to_string(max_cutters));
  }
  std::vector<SignCell> cells;
  if (!base.is_empty()) cells.push_back({base, {}});
  for (const auto& c : cutters) {
    std::vector<SignCell> next;
    for (auto& cell : cells) {
      Region in = cell.region.intersect(c);
      Region out = cell.region.subtract(c);
      if (!in.is_empty()) {
        auto signs = cell.inside;
        signs.push_back(true);
        next.push_back({std::move(in), std::move(signs)});
      }
      if (!out.is_empty()) {
        auto signs = std::move(cell.inside);
        signs.push_back(false);
        next.push_back({std::move(out), std::move(signs)});
      }
    }
    cells = std::move(next);
  }
  return cells;
}

}  // namespace cps
