#include "cps/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cps/error.hpp"

namespace cps::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::kParse, what); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  parse_error("expected an integer or a rational string, got " + j.dump());
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

// Orthonormalising factor R (upper triangular) for a coordinate system whose
// squared norm is given by `norm2`: |x|^2 = |R x|^2. Used only for drawing.
template <class Norm>
std::vector<std::vector<double>> drawing_frame(int dim, Norm norm2) {
  std::vector<std::vector<double>> g(dim, std::vector<double>(dim));
  auto unit = [&](int i) {
    FieldVector v(static_cast<std::size_t>(dim));
    v[i] = FieldScalar(1);
    return v;
  };
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      FieldScalar s = norm2(unit(i) + unit(j)) - norm2(unit(i)) - norm2(unit(j));
      g[i][j] = s.to_double() / 2;
    }
  }
  std::vector<std::vector<double>> r(dim, std::vector<double>(dim, 0.0));
  for (int i = 0; i < dim; ++i) {
    double d = g[i][i];
    for (int k = 0; k < i; ++k) d -= r[k][i] * r[k][i];
    r[i][i] = std::sqrt(std::max(d, 0.0));
    for (int j = i + 1; j < dim; ++j) {
      double s = g[i][j];
      for (int k = 0; k < i; ++k) s -= r[k][i] * r[k][j];
      r[i][j] = r[i][i] > 0 ? s / r[i][i] : 0.0;
    }
  }
  return r;
}

std::array<double, 2> apply_frame(const std::vector<std::vector<double>>& r, const std::vector<double>& x) {
  std::array<double, 2> out{0.0, 0.0};
  for (std::size_t i = 0; i < x.size() && i < 2; ++i) {
    for (std::size_t j = i; j < x.size(); ++j) out[i] += r[i][j] * x[j];
  }
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();
  void add(const std::array<double, 2>& p) {
    x0 = std::min(x0, p[0]);
    y0 = std::min(y0, p[1]);
    x1 = std::max(x1, p[0]);
    y1 = std::max(y1, p[1]);
  }
};

std::string svg_header(Bounds b) {
  if (!(b.x0 <= b.x1)) b = {-1, -1, 1, 1};
  double pad = 0.05 * std::max({b.x1 - b.x0, b.y1 - b.y0, 1e-9});
  std::ostringstream os;
  // Flip y so that the picture has the usual orientation.
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(b.x0 - pad) << ' ' << fmt(-b.y1 - pad) << ' '
     << fmt(b.x1 - b.x0 + 2 * pad) << ' ' << fmt(b.y1 - b.y0 + 2 * pad) << "\" width=\"800\" height=\"800\">\n";
  return os.str();
}

}  // namespace

// ------------------------------------------------------------------ scalars

Json to_json(const FieldScalar& x) {
  return Json{{"a", rational_to_string(x.a())},
              {"b", rational_to_string(x.b())},
              {"D", x.radicand()},
              {"text", x.to_string()},
              {"approx", x.to_double()}};
}

FieldScalar scalar_from_json(const Json& j, std::int64_t radicand) {
  if (j.is_number_integer()) return FieldScalar(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) return FieldScalar::parse(j.get<std::string>(), radicand);
  if (j.is_object()) {
    Rational a = rational_from_json(field(j, "a"));
    Rational b = j.contains("b") ? rational_from_json(j.at("b")) : Rational(0);
    std::int64_t d = j.contains("D") ? j.at("D").get<std::int64_t>() : radicand;
    if (sgn(b) == 0) return FieldScalar(a);
    if (d == 0) parse_error("irrational part without a radicand");
    return FieldScalar(a, b, d);
  }
  parse_error("cannot read a field element from " + j.dump());
}

Json to_json(const FieldVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

FieldVector vector_from_json(const Json& j, std::int64_t radicand) {
  if (!j.is_array()) parse_error("expected an array of field elements");
  FieldVector out;
  for (const auto& x : j) out.push_back(scalar_from_json(x, radicand));
  return out;
}

FieldVector parse_vector(const std::string& text, std::int64_t radicand) {
  FieldVector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(FieldScalar::parse(item, radicand));
  if (out.empty()) parse_error("empty vector \"" + text + "\"");
  return out;
}

IntVector int_vector_from_json(const Json& j) {
  if (!j.is_array()) parse_error("expected an integer array");
  IntVector out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) parse_error("expected an integer, got " + x.dump());
    out.push_back(x.get<std::int64_t>());
  }
  return out;
}

RationalVector rational_vector_from_json(const Json& j) {
  if (!j.is_array()) parse_error("expected an array of rationals");
  RationalVector out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

// ------------------------------------------------------------------- scheme

Json to_json(const Scheme& s) {
  Json m = s.matrix().to_rows();
  Json out{{"k", s.k()}, {"D", s.radicand()}, {"M", m}};
  if (!s.label().empty()) out["label"] = s.label();
  out["derived"] = {{"d", s.d()},
                    {"n", s.n()},
                    {"expanding", to_json(s.expanding_eigenvalues())},
                    {"contracting", to_json(s.contracting_eigenvalues())},
                    {"density_certified", s.density_certified()},
                    {"warnings", s.warnings()}};
  return out;
}

Scheme scheme_from_json(const Json& j) {
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& r : field(j, "M")) rows.push_back(int_vector_from_json(r));
  IntMatrix m(rows);
  if (j.contains("k") && j.at("k").get<std::size_t>() != m.rows()) {
    throw Error(ErrorCode::kValidation, "\"k\" does not match the size of \"M\"");
  }
  std::optional<std::int64_t> d;
  if (j.contains("D")) d = j.at("D").get<std::int64_t>();
  return Scheme::build(m, d, j.value("label", std::string{}));
}

// ------------------------------------------------------------------- region

Json to_json(const Region& r) {
  if (r.dim() == 1) {
    Json parts = Json::array();
    for (const auto& i : r.interval_list()) parts.push_back({to_json(i.lo), to_json(i.hi)});
    return Json{{"intervals", parts}};
  }
  Json polys = Json::array();
  for (const auto& p : r.pieces()) {
    Json poly = Json::array();
    for (const auto& v : p.vertices) poly.push_back(to_json(v));
    polys.push_back(poly);
  }
  return Json{{"polygons", polys}};
}

Region region_from_json(const Json& j, const Scheme& scheme) {
  const std::int64_t d = scheme.radicand();
  Region r;
  if (j.contains("intervals")) {
    std::vector<Interval> parts;
    for (const auto& p : j.at("intervals")) {
      if (!p.is_array() || p.size() != 2) parse_error("interval must be [lo, hi]");
      parts.push_back({scalar_from_json(p[0], d), scalar_from_json(p[1], d)});
    }
    r = Region::intervals(parts);
  } else if (j.contains("polygons")) {
    std::vector<std::vector<FieldVector>> pieces;
    for (const auto& p : j.at("polygons")) {
      std::vector<FieldVector> verts;
      for (const auto& v : p) verts.push_back(vector_from_json(v, d));
      pieces.push_back(std::move(verts));
    }
    r = Region::polygons(pieces);
  } else if (j.contains("hull_of_star")) {
    std::vector<FieldVector> pts;
    for (const auto& g : j.at("hull_of_star")) pts.push_back(scheme.star(int_vector_from_json(g)));
    if (scheme.n() == 1) {
      auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
      r = Region::interval((*lo)[0], (*hi)[0]);
    } else {
      r = Region::convex_hull(pts);
    }
    if (j.contains("translate_star")) r = r.translate(scheme.star(rational_vector_from_json(j.at("translate_star"))));
  } else {
    parse_error("region needs \"intervals\", \"polygons\" or \"hull_of_star\"");
  }
  if (r.dim() != scheme.n()) throw Error(ErrorCode::kDimensionMismatch, "region dimension differs from the internal space");
  if (j.contains("translate")) r = r.translate(vector_from_json(j.at("translate"), d));
  return r;
}

Json to_json(const Window& w) {
  Json comps = Json::array();
  for (const auto& c : w.components()) comps.push_back({{"colour", c.colour}, {"region", to_json(c.region)}});
  return Json{{"components", comps}};
}

Window window_from_json(const Json& j, const Scheme& scheme) {
  if (!j.contains("components")) return Window::single(region_from_json(j, scheme));
  std::vector<WindowComponent> comps;
  for (const auto& c : j.at("components")) {
    comps.push_back({c.value("colour", 0), region_from_json(field(c, "region"), scheme)});
  }
  return Window(std::move(comps));
}

// ---------------------------------------------------------------------- IFS

Json to_json(const IfsSpec& spec) {
  Json out{{"Z", spec.z}, {"depth", spec.depth}};
  if (spec.seed_core) out["seed_core"] = to_json(*spec.seed_core);
  return out;
}

IfsSpec ifs_from_json(const Json& j, const Scheme& scheme) {
  IfsSpec spec;
  for (const auto& z : field(j, "Z")) spec.z.push_back(int_vector_from_json(z));
  spec.depth = j.value("depth", 12u);
  if (j.contains("seed_core")) spec.seed_core = region_from_json(j.at("seed_core"), scheme);
  return spec;
}

// --------------------------------------------------------------------- rule

Json to_json(const Shift& s) {
  Json out{{"base", to_json(s.base)}};
  if (s.d1) out["d1"] = to_json(*s.d1);
  if (s.d2) out["d2"] = to_json(*s.d2);
  return out;
}

Json to_json(const ColouredVector& v) { return Json{{"vector", v.vector}, {"colour", v.colour}}; }

ColouredVector coloured_from_json(const Json& j) {
  if (j.is_array()) return {int_vector_from_json(j), 0};
  return {int_vector_from_json(field(j, "vector")), j.value("colour", 0)};
}

Json to_json(const SubstitutionRule& rule) {
  Json z0 = Json::array();
  Json order = Json::array();
  for (const auto& c : rule.candidates) {
    if (std::find(z0.begin(), z0.end(), Json(c.vector)) == z0.end()) z0.push_back(c.vector);
    order.push_back(to_json(c));
  }
  Json cells = Json::array();
  for (const auto& cell : rule.cells) {
    Json cluster = Json::array();
    for (const auto& c : cell.cluster) cluster.push_back(to_json(c));
    cells.push_back({{"parent_colour", cell.parent_colour}, {"region", to_json(cell.region)}, {"cluster", cluster}});
  }
  return Json{{"m", rule.power},
              {"offset", to_json(rule.offset)},
              {"fast_path", rule.fast_path},
              {"Z0", z0},
              {"claim_order", order},
              {"cells", cells}};
}

SubstitutionRule rule_from_json(const Json& j, const Scheme& scheme) {
  SubstitutionRule rule;
  rule.power = field(j, "m").get<unsigned>();
  rule.offset = j.contains("offset") ? vector_from_json(j.at("offset"), scheme.radicand())
                                     : FieldVector(static_cast<std::size_t>(scheme.n()));
  rule.fast_path = j.value("fast_path", false);
  for (const auto& c : field(j, "claim_order")) rule.candidates.push_back(coloured_from_json(c));
  for (const auto& c : field(j, "cells")) {
    RuleCell cell{c.value("parent_colour", 0), region_from_json(field(c, "region"), scheme), {}};
    for (const auto& v : field(c, "cluster")) cell.cluster.push_back(coloured_from_json(v));
    rule.cells.push_back(std::move(cell));
  }
  if (rule.power == 0) throw Error(ErrorCode::kValidation, "rule power must be positive");
  return rule;
}

// ------------------------------------------------------------------ reports

Json to_json(const SubVerdict& v) {
  Json out{{"substitutional", v.substitutional},
           {"fd_order", v.fd_order},
           {"denominator", v.denominator.get_str()},
           {"lattice_order", v.lattice_order},
           {"orientation_doubled", v.orientation_doubled},
           {"power", v.power}};
  if (!v.reason.empty()) out["reason"] = v.reason;
  if (v.fd_witness) out["fd_witness"] = to_json(*v.fd_witness);
  if (v.rationality_witness) {
    out["rationality_witness"] = {to_json(v.rationality_witness->first), to_json(v.rationality_witness->second)};
  }
  return out;
}

Json to_json(const VerifyReport& r) {
  Json out{{"ok", r.ok},
           {"compared_radius", to_json(r.compared_radius)},
           {"expected", r.expected},
           {"produced", r.produced},
           {"claim_violations", r.claim_violations},
           {"torus_relation", r.torus_relation}};
  if (r.first_missing) out["first_missing"] = {{"lattice", r.first_missing->lattice}, {"colour", r.first_missing->colour}};
  if (r.first_extra) out["first_extra"] = {{"lattice", r.first_extra->lattice}, {"colour", r.first_extra->colour}};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

Json to_json(const LidsResult& r) {
  return Json{{"power", r.power},
              {"torus_period", r.torus_period},
              {"denominator", r.denominator.get_str()},
              {"singular", r.singular},
              {"translation", r.translation}};
}

Json to_json(const SymmetryResult& r) {
  Json out{{"symmetric", r.symmetric}};
  if (r.shift) out["shift"] = to_json(*r.shift);
  if (!r.reason.empty()) out["reason"] = r.reason;
  return out;
}

Json to_json(const Gifs& g) {
  Json comps = Json::array();
  for (const auto& c : g.components) {
    Json maps = Json::array();
    for (const auto& m : c.maps) maps.push_back({{"source", m.source}, {"translation", to_json(m.translation)}});
    comps.push_back({{"colour", c.colour}, {"region", to_json(c.region)}, {"maps", maps}});
  }
  return Json{{"power", g.power}, {"components", comps}, {"verified", g.verified}};
}

Json to_json(const std::vector<AcceptanceCell>& cells) {
  Json out = Json::array();
  for (const auto& c : cells) {
    Json patch = Json::array();
    for (const auto& v : c.patch) patch.push_back(to_json(v));
    out.push_back({{"centre_colour", c.centre_colour},
                   {"region", to_json(c.region)},
                   {"measure", to_json(c.region.measure())},
                   {"patch", patch}});
  }
  return out;
}

Json to_json(const Scheme& scheme, const PointSet& ps) {
  Json pts = Json::array();
  for (const auto& p : ps.points) {
    pts.push_back({{"lattice", p.lattice},
                   {"colour", p.colour},
                   {"physical", to_json(scheme.project_phys(p.lattice))},
                   {"internal", to_json(scheme.star(p.lattice))}});
  }
  return Json{{"radius", to_json(ps.radius)},
              {"shift", to_json(ps.shift)},
              {"count", ps.points.size()},
              {"points", pts},
              {"boundary_hits", ps.boundary_hits}};
}

std::string to_csv(const Scheme& scheme, const PointSet& ps) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (int i = 0; i < scheme.k(); ++i) os << 'g' << i << ',';
  os << "colour";
  for (int i = 0; i < scheme.d(); ++i) os << ",phys" << i << ",phys" << i << "_approx";
  for (int i = 0; i < scheme.n(); ++i) os << ",int" << i << ",int" << i << "_approx";
  os << '\n';
  for (const auto& p : ps.points) {
    for (auto c : p.lattice) os << c << ',';
    os << p.colour;
    for (const auto& x : scheme.project_phys(p.lattice)) os << ',' << x.to_string() << ',' << x.to_double();
    for (const auto& x : scheme.star(p.lattice)) os << ',' << x.to_string() << ',' << x.to_double();
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------- SVG

std::string svg_points(const Scheme& scheme, const PointSet& ps) {
  auto frame = drawing_frame(scheme.d(), [&](const FieldVector& x) { return scheme.phys_norm2(x); });
  std::vector<std::pair<std::array<double, 2>, int>> pts;
  Bounds b;
  for (const auto& p : ps.points) {
    auto xy = apply_frame(frame, scheme.phys_approx(p.lattice));
    b.add(xy);
    pts.push_back({xy, p.colour});
  }
  double r = 0.004 * std::max({b.x1 - b.x0, b.y1 - b.y0, 1e-9});
  static const char* kColours[] = {"#1f4e79", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#515a5a"};
  std::ostringstream os;
  os << svg_header(b);
  for (const auto& [xy, colour] : pts) {
    os << "<circle cx=\"" << fmt(xy[0]) << "\" cy=\"" << fmt(-xy[1]) << "\" r=\"" << fmt(r) << "\" fill=\""
       << kColours[static_cast<std::size_t>(std::abs(colour)) % 6] << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<FloatPolygon> float_polygons(const Region& r) {
  std::vector<FloatPolygon> out;
  if (r.dim() == 1) {
    for (const auto& i : r.interval_list()) {
      double lo = i.lo.to_double();
      double hi = i.hi.to_double();
      double h = 0.02 * (hi - lo) + 1e-9;
      out.push_back({{lo, -h}, {hi, -h}, {hi, h}, {lo, h}});
    }
    return out;
  }
  for (const auto& p : r.pieces()) {
    FloatPolygon poly;
    for (const auto& v : p.vertices) poly.push_back({v[0].to_double(), v[1].to_double()});
    out.push_back(std::move(poly));
  }
  return out;
}

std::vector<FloatPolygon> internal_frame(const Scheme& scheme, std::vector<FloatPolygon> polys) {
  if (scheme.n() != 2) return polys;
  auto frame = drawing_frame(2, [&](const FieldVector& x) { return scheme.int_norm2(x); });
  for (auto& p : polys) {
    for (auto& v : p) v = apply_frame(frame, {v[0], v[1]});
  }
  return polys;
}

std::string svg_polygons(const std::vector<FloatPolygon>& polys, const std::vector<FloatPolygon>& outlines) {
  Bounds b;
  for (const auto* list : {&polys, &outlines}) {
    for (const auto& p : *list) {
      for (const auto& v : p) b.add(v);
    }
  }
  double w = 0.002 * std::max({b.x1 - b.x0, b.y1 - b.y0, 1e-9});
  std::ostringstream os;
  os << svg_header(b);
  auto path = [&](const FloatPolygon& p) {
    std::ostringstream ps;
    for (std::size_t i = 0; i < p.size(); ++i) ps << (i == 0 ? 'M' : 'L') << fmt(p[i][0]) << ',' << fmt(-p[i][1]);
    ps << 'Z';
    return ps.str();
  };
  for (const auto& p : polys) os << "<path d=\"" << path(p) << "\" fill=\"#1f4e79\" fill-opacity=\"0.35\" stroke=\"none\"/>\n";
  for (const auto& p : outlines) {
    os << "<path d=\"" << path(p) << "\" fill=\"none\" stroke=\"#b03a2e\" stroke-width=\"" << fmt(w) << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// -------------------------------------------------------------------- files

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    parse_error(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParse, "cannot write " + path);
  out << text;
}

}  // namespace cps::io
