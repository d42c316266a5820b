#pragma once

#include <vector>

#include "cps/field.hpp"
#include "cps/linalg.hpp"
#include "cps/scheme.hpp"

namespace cps {

/// Every lattice vector g with |g_phys| <= radius (ambient norm) and star(g)
/// in the closed coordinate box [lo, hi], in lexicographic order. The
/// integer search box is derived from exact bounds; a floating prefilter
/// with a generous margin precedes the exact test.
std::vector<IntVector> enumerate_lattice(const Scheme& scheme, const FieldScalar& radius,
                                         const FieldVector& lo, const FieldVector& hi);

/// Ambient integer box [min_i, max_i] containing all such vectors.
std::pair<IntVector, IntVector> lattice_search_box(const Scheme& scheme, const FieldScalar& radius,
                                                   const FieldVector& lo, const FieldVector& hi);

}  // namespace cps
