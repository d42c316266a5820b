#pragma once

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cps/ifs.hpp"
#include "cps/pattern.hpp"
#include "cps/region.hpp"
#include "cps/scheme.hpp"
#include "cps/substitution.hpp"
#include "cps/window.hpp"

namespace cps::io {

using Json = nlohmann::json;

// Scalars are written as {"a": "p/q", "b": "r/s", "D": n, "text": ..., "approx": x}.
// Readers accept that object, a plain integer, or the text syntax
// "p/q+r/s*sqrtD" (D defaulting to the scheme's radicand).
Json to_json(const FieldScalar& x);
FieldScalar scalar_from_json(const Json& j, std::int64_t radicand = 0);
Json to_json(const FieldVector& v);
FieldVector vector_from_json(const Json& j, std::int64_t radicand = 0);
/// Comma separated scalars, e.g. "1/7,-1/2+1/2*sqrt5".
FieldVector parse_vector(const std::string& text, std::int64_t radicand = 0);
IntVector int_vector_from_json(const Json& j);
RationalVector rational_vector_from_json(const Json& j);

Json to_json(const Scheme& s);
/// {"k", "D", "M", "label"}; everything else is recomputed and D is checked.
Scheme scheme_from_json(const Json& j);

Json to_json(const Region& r);
/// {"intervals": [[lo, hi], ...]}, {"polygons": [[[x, y], ...], ...]}, or
/// {"hull_of_star": [[ints], ...], "translate_star": [q, ...]} which needs a
/// scheme. An optional "translate" vector is added last in every form.
Region region_from_json(const Json& j, const Scheme& scheme);

Json to_json(const Window& w);
/// {"components": [{"colour": i, "region": ...}]} or a bare region.
Window window_from_json(const Json& j, const Scheme& scheme);

struct IfsSpec {
  std::vector<IntVector> z;
  unsigned depth = 12;
  std::optional<Region> seed_core;
};
Json to_json(const IfsSpec& spec);
IfsSpec ifs_from_json(const Json& j, const Scheme& scheme);

Json to_json(const Shift& s);
Json to_json(const ColouredVector& v);
ColouredVector coloured_from_json(const Json& j);

Json to_json(const SubstitutionRule& rule);
SubstitutionRule rule_from_json(const Json& j, const Scheme& scheme);

Json to_json(const SubVerdict& v);
Json to_json(const VerifyReport& r);
Json to_json(const LidsResult& r);
Json to_json(const SymmetryResult& r);
Json to_json(const Gifs& g);
Json to_json(const std::vector<AcceptanceCell>& cells);
Json to_json(const Scheme& scheme, const PointSet& ps);

/// One row per point: lattice coordinates, colour, then physical and
/// internal coordinates as exact text followed by floats.
std::string to_csv(const Scheme& scheme, const PointSet& ps);

using FloatPolygon = std::vector<std::array<double, 2>>;

/// Scatter plot of the physical points (1D patterns are drawn on a line).
std::string svg_points(const Scheme& scheme, const PointSet& ps);
/// Filled polygons (1D intervals are drawn as thin bars).
std::string svg_polygons(const std::vector<FloatPolygon>& polys, const std::vector<FloatPolygon>& outlines = {});
std::vector<FloatPolygon> float_polygons(const Region& r);
/// Maps internal eigen-coordinates to an orthonormal drawing frame.
std::vector<FloatPolygon> internal_frame(const Scheme& scheme, std::vector<FloatPolygon> polys);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cps::io
