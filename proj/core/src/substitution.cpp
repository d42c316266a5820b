#include "cps/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "cps/error.hpp"
#include "cps/lattice.hpp"

namespace cps {

Region canonical_window(const Scheme& scheme) {
  const int k = scheme.k();
  std::vector<FieldVector> pts;
  for (int mask = 0; mask < (1 << k); ++mask) {
    IntVector v(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) v[i] = (mask >> i) & 1;
    pts.push_back(scheme.star(v));
  }
  if (scheme.n() == 1) {
    auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [](const FieldVector& a, const FieldVector& b) {
      return a[0] < b[0];
    });
    return Region::interval((*lo)[0], (*hi)[0]);
  }
  if (scheme.n() == 2) return Region::convex_hull(pts);
  throw Error(ErrorCode::kUnsupported, "internal dimension above 2");
}

// ----------------------------------------------------------------- decide

SubVerdict decide_sub(const Scheme& scheme, const Window& window) {
  SubVerdict v;
  FdResult fd = fd_check(scheme, window);
  if (!fd.invariant) {
    v.fd_witness = fd.witness;
    v.reason = "A does not permute the supporting subspaces";
    return v;
  }
  v.fd_order = fd.order;
  RationalityResult rat = rationality_check(scheme, window);
  if (!rat.rational) {
    v.rationality_witness = rat.witness;
    v.reason = "vertex difference outside Q Gamma_<";
    return v;
  }
  v.denominator = rat.denominator;
  v.lattice_order = order_mod(scheme.matrix(), v.denominator);
  std::uint64_t base = fd.order * v.lattice_order;
  for (const auto& lambda : scheme.contracting_eigenvalues()) {
    if (lambda.sign() < 0 && base % 2 == 1) v.orientation_doubled = true;
  }
  std::uint64_t m = base * (v.orientation_doubled ? 2 : 1);
  if (m > 64) throw Error(ErrorCode::kBoundExceeded, "substitution power " + std::to_string(m) + " too large");
  v.power = static_cast<unsigned>(m);
  v.substitutional = true;
  return v;
}

// ------------------------------------------------------------ derive rule

namespace {

struct ClaimKey {
  FieldScalar norm2;
  IntVector lattice;
};

void sort_claim_order(const Scheme& scheme, std::vector<IntVector>& zs) {
  std::vector<std::pair<ClaimKey, IntVector>> keyed;
  for (auto& z : zs) keyed.push_back({{scheme.phys_norm2(scheme.project_phys(z)), z}, z});
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first.norm2 != b.first.norm2) return a.first.norm2 < b.first.norm2;
    return a.first.lattice < b.first.lattice;
  });
  zs.clear();
  for (auto& k : keyed) zs.push_back(std::move(k.second));
}

bool covers(const Region& target, const std::vector<Region>& parts) {
  Region rest = target;
  for (const auto& p : parts) {
    rest = rest.subtract(p);
    if (rest.is_empty()) return true;
  }
  return rest.is_empty();
}

std::vector<FieldVector> candidate_offsets(const Scheme& scheme, const Window& window, const FieldMatrix& am) {
  std::vector<FieldVector> out{FieldVector(static_cast<std::size_t>(scheme.n()))};
  FieldMatrix shear = FieldMatrix::identity(am.rows()) - am;
  for (const auto& v : window.vertices()) {
    FieldVector u = shear * v;
    if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(std::move(u));
  }
  return out;
}

std::optional<SubstitutionRule> try_fast(const Scheme& scheme, const Window& window, unsigned m,
                                         const FieldVector& u, const RuleOptions& opt) {
  const Region& w = window.support();
  Region b = w.linear_image(scheme.A_pow(m)).translate(u);
  auto [wlo, whi] = w.bounds();
  auto [blo, bhi] = b.bounds();
  FieldVector lo = wlo - blo;
  FieldVector hi = whi - bhi;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) return std::nullopt;
  }
  std::vector<IntMatrix> group = opt.symmetries ? *opt.symmetries : window_symmetries(scheme, window);
  std::erase_if(group, [&](const IntMatrix& g) {
    auto gi = scheme.restrict_int(g);
    return !gi || *gi * u != u;
  });
  if (group.empty()) group.push_back(IntMatrix::identity(static_cast<std::size_t>(scheme.k())));
  for (FieldScalar rho = opt.initial_radius; rho <= opt.max_radius; rho *= FieldScalar(2)) {
    std::vector<IntVector> zs;
    for (auto& z : enumerate_lattice(scheme, rho, lo, hi)) {
      if (b.translate(scheme.star(z)).subset_of(w)) zs.push_back(std::move(z));
    }
    sort_claim_order(scheme, zs);
    std::vector<Region> parts;
    for (const auto& z : zs) parts.push_back(b.translate(scheme.star(z)));
    if (!covers(w, parts)) continue;

    // Group translates into orbits of the symmetry group, in order of first
    // appearance; the cover is then built from whole orbits.
    std::vector<std::vector<std::size_t>> orbits;
    {
      std::map<IntVector, std::size_t> index;
      for (std::size_t i = 0; i < zs.size(); ++i) index[zs[i]] = i;
      std::vector<bool> used(zs.size(), false);
      for (std::size_t i = 0; i < zs.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> orbit;
        bool complete = true;
        for (const auto& g : group) {
          auto it = index.find(g * zs[i]);
          if (it == index.end()) {
            complete = false;
            break;
          }
          if (std::find(orbit.begin(), orbit.end(), it->second) == orbit.end()) orbit.push_back(it->second);
        }
        if (!complete) continue;
        std::sort(orbit.begin(), orbit.end());
        for (auto j : orbit) used[j] = true;
        orbits.push_back(std::move(orbit));
      }
    }
    auto parts_of = [&](const std::vector<std::size_t>& chosen, std::size_t skip) {
      std::vector<Region> out;
      for (auto o : chosen) {
        if (o == skip) continue;
        for (auto j : orbits[o]) out.push_back(parts[j]);
      }
      return out;
    };
    std::vector<std::size_t> all(orbits.size());
    std::iota(all.begin(), all.end(), 0);
    if (!covers(w, parts_of(all, orbits.size()))) continue;

    // Shortest covering prefix in claim order, then drop redundant orbits
    // from the far end.
    std::size_t lo_n = 1;
    std::size_t hi_n = orbits.size();
    while (lo_n < hi_n) {
      std::size_t mid = (lo_n + hi_n) / 2;
      if (covers(w, parts_of(std::vector<std::size_t>(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(mid)),
                             orbits.size()))) {
        hi_n = mid;
      } else {
        lo_n = mid + 1;
      }
    }
    std::vector<std::size_t> chosen(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(hi_n));
    for (std::size_t i = hi_n; i-- > 0;) {
      if (covers(w, parts_of(chosen, i))) std::erase(chosen, i);
    }
    std::vector<std::size_t> keep;
    for (auto o : chosen) keep.insert(keep.end(), orbits[o].begin(), orbits[o].end());
    std::sort(keep.begin(), keep.end());
    SubstitutionRule rule;
    rule.power = m;
    rule.offset = u;
    rule.fast_path = true;
    RuleCell cell{window.components().front().colour, w.linear_image(scheme.A_pow(m)), {}};
    for (auto j : keep) {
      rule.candidates.push_back({zs[j], cell.parent_colour});
      cell.cluster.push_back({zs[j], cell.parent_colour});
    }
    rule.cells.push_back(std::move(cell));
    return rule;
  }
  return std::nullopt;
}

std::optional<SubstitutionRule> try_general(const Scheme& scheme, const Window& window, unsigned m,
                                            const FieldVector& u, const RuleOptions& opt) {
  const FieldMatrix am = scheme.A_pow(m);
  const Region& w = window.support();
  Region b = w.linear_image(am).translate(u);
  auto [wlo, whi] = w.bounds();
  auto [blo, bhi] = b.bounds();
  for (FieldScalar rho = opt.initial_radius; rho <= opt.max_radius; rho *= FieldScalar(2)) {
    std::vector<IntVector> zs;
    for (auto& z : enumerate_lattice(scheme, rho, wlo - bhi, whi - blo)) {
      if (!b.translate(scheme.star(z)).interiors_disjoint(w)) zs.push_back(std::move(z));
    }
    sort_claim_order(scheme, zs);
    std::vector<Region> parts;
    for (const auto& z : zs) parts.push_back(b.translate(scheme.star(z)));
    if (!covers(w, parts)) continue;
    std::size_t need = parts.size();
    while (need > 1 &&
           covers(w, std::vector<Region>(parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(need - 1)))) {
      --need;
    }
    zs.resize(need);

    SubstitutionRule rule;
    rule.power = m;
    rule.offset = u;
    rule.fast_path = false;
    for (const auto& z : zs) {
      for (const auto& c : window.components()) rule.candidates.push_back({z, c.colour});
    }
    for (const auto& parent : window.components()) {
      Region base = parent.region.linear_image(am);
      std::vector<Region> cutters;
      std::vector<ColouredVector> labels;
      for (const auto& cand : rule.candidates) {
        Region cut = window.colour_region(cand.colour)->translate(-(u + scheme.star(cand.vector)));
        if (cut.interiors_disjoint(base)) continue;
        cutters.push_back(std::move(cut));
        labels.push_back(cand);
      }
      for (auto& cell : arrangement_cells(base, cutters, opt.max_cutters)) {
        RuleCell rc{parent.colour, std::move(cell.region), {}};
        for (std::size_t i = 0; i < labels.size(); ++i) {
          if (cell.inside[i]) rc.cluster.push_back(labels[i]);
        }
        rule.cells.push_back(std::move(rc));
      }
    }
    return rule;
  }
  return std::nullopt;
}

}  // namespace

SubstitutionRule derive_rule(const Scheme& scheme, const Window& window, unsigned m, const RuleOptions& options) {
  if (m == 0) throw Error(ErrorCode::kValidation, "power must be positive");
  auto offsets = candidate_offsets(scheme, window, scheme.A_pow(m));
  if (options.allow_fast && window.components().size() == 1) {
    for (const auto& u : offsets) {
      if (auto r = try_fast(scheme, window, m, u, options)) return *r;
    }
  }
  if (options.allow_general) {
    for (const auto& u : offsets) {
      if (auto r = try_general(scheme, window, m, u, options)) return *r;
    }
  }
  throw Error(ErrorCode::kBoundExceeded, "no covering by contracted translates within radius " +
                                             options.max_radius.to_string() + " at power " + std::to_string(m));
}

// ------------------------------------------------------------- apply rule

Shift successor_shift(const Scheme& scheme, const SubstitutionRule& rule, const Shift& shift) {
  FieldMatrix am = scheme.A_pow(rule.power);
  Shift s;
  s.base = am * shift.base + rule.offset;
  if (shift.d1) s.d1 = am * *shift.d1;
  if (shift.d2) s.d2 = am * *shift.d2;
  return s;
}

namespace {

// Smallest stretch factor of L^m in the ambient metric.
double min_stretch(const Scheme& scheme, unsigned m) {
  FieldMatrix lm = scheme.L_pow(m);
  const int d = scheme.d();
  if (d == 1) return std::abs(lm(0, 0).to_double());
  std::vector<FieldVector> e(2, FieldVector(2));
  e[0][0] = FieldScalar(1);
  e[1][1] = FieldScalar(1);
  auto gram = [&](const FieldVector& a, const FieldVector& b) {
    return ((scheme.phys_norm2(a + b) - scheme.phys_norm2(a) - scheme.phys_norm2(b)) / FieldScalar(2)).to_double();
  };
  double g[2][2];
  double h[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      g[i][j] = gram(e[i], e[j]);
      h[i][j] = gram(lm * e[i], lm * e[j]);
    }
  }
  double a = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  double b = -(h[0][0] * g[1][1] + h[1][1] * g[0][0] - 2 * h[0][1] * g[0][1]);
  double c = h[0][0] * h[1][1] - h[0][1] * h[1][0];
  double disc = std::max(0.0, b * b - 4 * a * c);
  double mu = (-b - std::sqrt(disc)) / (2 * a);
  return std::sqrt(std::max(mu, 0.0));
}

}  // namespace

ApplyResult apply_rule(const Scheme& scheme, const SubstitutionRule& rule, const PointSet& predecessor) {
  ApplyResult res;
  const Shift next = successor_shift(scheme, rule, predecessor.shift);
  const FieldMatrix am = scheme.A_pow(rule.power);
  const IntMatrix mm = scheme.M_pow(rule.power);
  const IntMatrix mm_inv = pow(scheme.matrix_inverse(), rule.power);

  double zmax = 0;
  for (const auto& c : rule.candidates) {
    zmax = std::max(zmax, scheme.phys_norm_approx(scheme.phys_approx(c.vector)));
  }
  double r_int = (min_stretch(scheme, rule.power) * predecessor.radius.to_double() - zmax) * (1 - 1e-9) - 1e-9;
  r_int = std::min(r_int, predecessor.radius.to_double());
  res.successor.shift = next;
  res.successor.radius = r_int > 0 ? FieldScalar(Rational(r_int)) : FieldScalar(0);

  std::map<IntVector, int> claim_index;
  for (std::size_t i = 0; i < rule.candidates.size(); ++i) claim_index[rule.candidates[i].vector] = static_cast<int>(i);

  std::map<IntVector, const RuleCell*> cache;
  auto cell_of = [&](const PatternPoint& p) -> const RuleCell* {
    auto it = cache.find(p.lattice);
    if (it != cache.end()) return it->second;
    const RuleCell* found = nullptr;
    if (rule.fast_path) {
      found = &rule.cells.front();
    } else {
      FieldVector xi = am * (scheme.star(p.lattice) + predecessor.shift.base);
      for (const auto& c : rule.cells) {
        if (c.parent_colour != p.colour) continue;
        if (next.d1) {
          if (c.region.contains_limit(xi, *next.d1, *next.d2)) {
            found = &c;
            break;
          }
        } else if (c.region.locate(xi) == Location::kInside) {
          found = &c;
          break;
        }
      }
    }
    cache[p.lattice] = found;
    return found;
  };
  auto emits = [&](const RuleCell* cell, const ColouredVector& cv) {
    return std::find(cell->cluster.begin(), cell->cluster.end(), cv) != cell->cluster.end();
  };

  std::map<IntVector, std::pair<int, int>> claims;  // child -> (colour, claim count)
  std::map<IntVector, int> emitted;
  for (const auto& p : predecessor.points) {
    const RuleCell* cell = cell_of(p);
    if (cell == nullptr) {
      res.flagged.push_back(p.lattice);
      continue;
    }
    IntVector base = mm * p.lattice;
    for (const auto& cv : cell->cluster) {
      IntVector child = base + cv.vector;
      ++res.emissions;
      emitted[child] = cv.colour;
      bool claimed = true;
      const int idx = claim_index[cv.vector];
      for (int j = 0; j < idx && claimed; ++j) {
        const auto& other = rule.candidates[j];
        if (other.colour != cv.colour) continue;
        IntVector rival = mm_inv * (child - other.vector);
        auto colour = predecessor.colour_of(rival);
        if (!colour) continue;
        const RuleCell* rc = cell_of({rival, *colour});
        if (rc != nullptr && emits(rc, other)) claimed = false;
      }
      if (claimed) {
        auto& slot = claims[child];
        if (slot.second > 0 && slot.first != cv.colour) ++res.claim_violations;
        slot.first = cv.colour;
        ++slot.second;
      }
    }
  }
  for (const auto& [child, colour] : emitted) {
    if (!phys_within(scheme, scheme.project_phys(child), res.successor.radius)) continue;
    auto it = claims.find(child);
    if (it == claims.end() || it->second.second != 1) ++res.claim_violations;
    res.successor.points.push_back({child, it != claims.end() ? it->second.first : colour});
  }
  return res;
}

// ------------------------------------------------------------ verification

VerifyReport verify_self_similarity(const Scheme& scheme, const Window& window, const SubstitutionRule& rule,
                                    const Shift& shift, const FieldScalar& radius) {
  VerifyReport rep;
  PointSet pred = generate(scheme, window, shift, radius);
  if (pred.singular()) {
    rep.note = "predecessor shift is singular within the ball";
    return rep;
  }
  ApplyResult applied = apply_rule(scheme, rule, pred);
  rep.claim_violations = applied.claim_violations;
  rep.compared_radius = applied.successor.radius < radius ? applied.successor.radius : radius;
  if (rep.compared_radius.sign() <= 0) {
    rep.note = "radius too small to certify any successor point";
    return rep;
  }
  Shift next = successor_shift(scheme, rule, shift);
  FieldVector expected_base = scheme.A_pow(rule.power) * shift.base + rule.offset;
  rep.torus_relation = next.base == expected_base;
  PointSet expected = generate(scheme, window, next, rep.compared_radius);
  if (expected.singular()) {
    rep.note = "successor shift is singular within the ball";
    return rep;
  }
  std::vector<PatternPoint> produced;
  for (const auto& p : applied.successor.points) {
    if (phys_within(scheme, scheme.project_phys(p.lattice), rep.compared_radius)) produced.push_back(p);
  }
  rep.expected = expected.points.size();
  rep.produced = produced.size();
  auto by_lattice = [](const PatternPoint& a, const PatternPoint& b) {
    return std::tie(a.lattice, a.colour) < std::tie(b.lattice, b.colour);
  };
  std::sort(produced.begin(), produced.end(), by_lattice);
  for (const auto& p : expected.points) {
    if (!std::binary_search(produced.begin(), produced.end(), p, by_lattice)) {
      rep.first_missing = p;
      break;
    }
  }
  for (const auto& p : produced) {
    if (!std::binary_search(expected.points.begin(), expected.points.end(), p, by_lattice)) {
      rep.first_extra = p;
      break;
    }
  }
  rep.ok = !rep.first_missing && !rep.first_extra && rep.claim_violations == 0 && applied.flagged.empty() &&
           rep.torus_relation;
  if (!applied.flagged.empty()) rep.note = "parents on cell boundaries";
  return rep;
}

PowerSearch find_minimal_rule(const Scheme& scheme, const Window& window, const SubVerdict& verdict,
                              const std::vector<Shift>& probes, const FieldScalar& radius,
                              const RuleOptions& options) {
  if (!verdict.substitutional) throw Error(ErrorCode::kValidation, "window is not substitutional");
  PowerSearch out;
  const unsigned step = static_cast<unsigned>(std::max<std::uint64_t>(verdict.fd_order, 1));
  for (unsigned m = step; m <= 2 * verdict.power; m += step) {
    out.tried.push_back(m);
    SubstitutionRule rule;
    try {
      rule = derive_rule(scheme, window, m, options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBoundExceeded) throw;
      continue;
    }
    bool ok = true;
    for (const auto& t : probes) {
      if (!verify_self_similarity(scheme, window, rule, t, radius).ok) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.rule = std::move(rule);
      return out;
    }
  }
  throw Error(ErrorCode::kBoundExceeded, "no verified rule up to power " + std::to_string(2 * verdict.power));
}

// -------------------------------------------------------------------- LIDS

namespace {

Shift with_default_direction(const Scheme& scheme, const Shift& s) {
  if (s.d1) return s;
  FieldVector d1(static_cast<std::size_t>(scheme.n()));
  d1[0] = FieldScalar(1);
  FieldVector d2(static_cast<std::size_t>(scheme.n()));
  d2[scheme.n() - 1] = FieldScalar(1);
  return s.with_direction(d1, d2);
}

std::optional<IntVector> lattice_of(const Scheme& scheme, const FieldVector& x) {
  auto q = scheme.rational_lift(x);
  if (!q) return std::nullopt;
  IntVector out;
  for (const auto& c : *q) {
    if (c.get_den() != 1 || !c.get_num().fits_slong_p()) return std::nullopt;
    out.push_back(c.get_num().get_si());
  }
  return out;
}

}  // namespace

LidsResult lids_power(const Scheme& scheme, const Window& window, const SubstitutionRule& rule, const Shift& s,
                      const FieldScalar& radius) {
  LidsResult res;
  auto n = lift_denominator(scheme, s.base);
  if (!n) throw Error(ErrorCode::kNotLids, "shift is not in Q Gamma_<");
  res.denominator = *n;
  const FieldMatrix am = scheme.A_pow(rule.power);
  FieldVector t = s.base;
  constexpr unsigned kCap = 100000;
  for (unsigned j = 1; j <= kCap; ++j) {
    t = am * t + rule.offset;
    if (auto e = lattice_of(scheme, t - s.base)) {
      res.torus_period = j;
      res.translation = *e;
      break;
    }
  }
  if (res.torus_period == 0) throw Error(ErrorCode::kNotLids, "torus orbit did not close");
  const unsigned ell = res.torus_period * rule.power;
  PointSet plain = generate(scheme, window, Shift::at(s.base), radius);
  res.singular = plain.singular();
  if (!res.singular) {
    res.power = ell;
    return res;
  }
  Shift limit = with_default_direction(scheme, s);
  PointSet ref = generate(scheme, window, limit, radius);
  const FieldMatrix step = scheme.A_pow(ell);
  FieldVector d1 = *limit.d1;
  FieldVector d2 = *limit.d2;
  for (unsigned mult = 1; mult <= 64; ++mult) {
    d1 = step * d1;
    d2 = step * d2;
    Shift moved{s.base, d1, d2};
    if (generate(scheme, window, moved, radius).points == ref.points) {
      res.power = mult * ell;
      return res;
    }
  }
  throw Error(ErrorCode::kNotLids, "limit pattern not recovered");
}

bool is_fixed_after(const Scheme& scheme, const Window& window, const SubstitutionRule& rule, const Shift& s,
                    unsigned times, const FieldScalar& radius) {
  Shift start = s;
  PointSet orig = generate(scheme, window, start, radius);
  if (orig.singular()) {
    start = with_default_direction(scheme, s);
    orig = generate(scheme, window, start, radius);
  }
  PointSet cur = orig;
  Shift shift = start;
  for (unsigned i = 0; i < times; ++i) {
    ApplyResult r = apply_rule(scheme, rule, cur);
    if (!r.flagged.empty() || r.claim_violations != 0) return false;
    cur = std::move(r.successor);
    shift = cur.shift;
  }
  auto e = lattice_of(scheme, shift.base - start.base);
  if (!e) return false;
  // The pattern at s + star(e) is the pattern at s moved by -e. Compare on
  // the ball of radius rho around e_phys, which both certified balls contain.
  FieldVector pe = scheme.project_phys(*e);
  FieldScalar reach;
  while (!phys_within(scheme, pe, reach)) reach += FieldScalar(1);
  FieldScalar rho = std::min(cur.radius, radius - reach);
  if (rho <= FieldScalar(0)) throw Error(ErrorCode::kOutOfRadius, "radius too small for the fixed-point comparison");
  std::vector<PatternPoint> moved;
  for (const auto& p : cur.points) {
    if (phys_within(scheme, scheme.project_phys(p.lattice), rho)) moved.push_back({p.lattice + *e, p.colour});
  }
  std::vector<PatternPoint> want;
  for (const auto& p : orig.points) {
    if (phys_within(scheme, scheme.project_phys(p.lattice) - pe, rho)) want.push_back(p);
  }
  std::sort(moved.begin(), moved.end(), [](const auto& a, const auto& b) { return a.lattice < b.lattice; });
  return moved == want;
}

// ---------------------------------------------------------------- symmetry

SymmetryResult symmetry_check(const Scheme& scheme, const Window& window, const IntMatrix& s) {
  SymmetryResult res;
  if (s.rows() != static_cast<std::size_t>(scheme.k()) || s.cols() != s.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "symmetry matrix has wrong size");
  }
  Integer det = s.determinant();
  if (det != 1 && det != -1) {
    res.reason = "not unimodular";
    return res;
  }
  if (!scheme.restrict_phys(s)) {
    res.reason = "does not preserve the physical space";
    return res;
  }
  auto sint = scheme.restrict_int(s);
  if (!sint) {
    res.reason = "does not preserve the internal space";
    return res;
  }
  std::optional<FieldVector> shift;
  for (const auto& c : window.components()) {
    auto t = c.region.congruent_by_translation(c.region.linear_image(*sint));
    if (!t || (shift && *shift != *t)) {
      res.reason = "image of the window is not a translate of it";
      return res;
    }
    shift = t;
  }
  res.symmetric = true;
  res.shift = shift;
  return res;
}

std::vector<IntMatrix> window_symmetries(const Scheme& scheme, const Window& window) {
  const auto k = static_cast<std::size_t>(scheme.k());
  const IntMatrix& m = scheme.matrix();
  std::vector<IntMatrix> out;
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (unsigned signs = 0; signs < (1u << k); ++signs) {
      IntMatrix s(k, k);
      for (std::size_t c = 0; c < k; ++c) s(perm[c], c) = (signs >> c & 1u) ? -1 : 1;
      if (s * m != m * s) continue;
      auto sint = scheme.restrict_int(s);
      if (!sint) continue;
      bool fixes = true;
      for (const auto& c : window.components()) {
        if (!c.region.linear_image(*sint).equals(c.region)) {
          fixes = false;
          break;
        }
      }
      if (fixes) out.push_back(std::move(s));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// -------------------------------------------------------------------- GIFS

Gifs emit_gifs(const Scheme& scheme, const SubstitutionRule& rule) {
  Gifs g;
  g.power = rule.power;
  const FieldMatrix am = scheme.A_pow(rule.power);
  const FieldMatrix am_inv = am.inverse();
  for (const auto& cell : rule.cells) {
    g.components.push_back({cell.parent_colour, cell.region.linear_image(am_inv), {}});
  }
  for (std::size_t src = 0; src < rule.cells.size(); ++src) {
    for (const auto& cv : rule.cells[src].cluster) {
      FieldVector shift = rule.offset + scheme.star(cv.vector);
      Region image = rule.cells[src].region.translate(shift);
      bool placed = false;
      for (auto& comp : g.components) {
        if (comp.colour == cv.colour && image.subset_of(comp.region)) {
          comp.maps.push_back({src, shift});
          placed = true;
          break;
        }
      }
      if (!placed) throw Error(ErrorCode::kUnsupported, "contracted image straddles GIFS components");
    }
  }
  g.verified = true;
  for (const auto& comp : g.components) {
    Region u(comp.region.dim());
    for (const auto& m : comp.maps) u = u.unite(g.components[m.source].region.linear_image(am).translate(m.translation));
    if (!u.equals(comp.region)) g.verified = false;
  }
  return g;
}

}  // namespace cps
