// End-to-end acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "cps/error.hpp"
#include "cps/ifs.hpp"
#include "cps/io.hpp"
#include "cps/lattice.hpp"
#include "cps/pattern.hpp"
#include "support.hpp"

using namespace cps;
using namespace cps::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string data(const std::string& name) { return std::string(CPS_DATA_DIR) + "/" + name; }

// Each check appends to `detail` and returns whether it holds.
struct Check {
  std::ostringstream detail;
  bool ok = true;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

bool fixes_slope(const SlopeMatrix& sm, const FieldScalar& alpha) {
  const auto& m = sm.matrix;
  FieldScalar x = FieldScalar(static_cast<long>(m(0, 0))) + FieldScalar(static_cast<long>(m(0, 1))) * alpha;
  FieldScalar y = FieldScalar(static_cast<long>(m(1, 0))) + FieldScalar(static_cast<long>(m(1, 1))) * alpha;
  return x == sm.eigenvalue && y == sm.eigenvalue * alpha && sm.eigenvalue.abs() > FieldScalar(1) &&
         abs(m.determinant()) == 1;
}

// Random shifts whose patterns avoid the window boundary inside the ball.
std::vector<Shift> regular_shifts(const Scheme& s, const Window& w, std::size_t count, const FieldScalar& r,
                                  std::uint64_t seed) {
  std::vector<Shift> out;
  for (const auto& t : random_shifts(w, 4 * count, seed)) {
    if (out.size() == count) break;
    if (!generate(s, w, t, r).singular()) out.push_back(t);
  }
  return out;
}

std::string word_from_origin(const Scheme& f, const PointSet& ps, std::size_t letters) {
  auto xs = physical_coordinates(f, ps);
  FieldScalar long_gap = f.project_phys(IntVector{1, 0})[0].abs();
  std::string word;
  for (std::size_t i = 0; i + 1 < xs.size() && word.size() < letters; ++i) {
    if (xs[i] < FieldScalar(0)) continue;
    word += (xs[i + 1] - xs[i]) == long_gap ? 'a' : 'b';
  }
  return word;
}

std::string fixed_point_word(std::size_t letters) {
  std::string w = "a";
  while (w.size() < letters) {
    std::string next;
    for (char c : w) next += c == 'a' ? "ababa" : "aba";
    w = next;
  }
  return w.substr(0, letters);
}

// Cells tile the window and every generated point's patch equals its cell label.
void check_partition(Check& c, const Scheme& s, const Window& w, const FieldScalar& r, const FieldScalar& big,
                     std::size_t max_cutters, std::uint64_t seed) {
  auto cells = acceptance_partition(s, w, r, max_cutters);
  FieldScalar total;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    total += cells[i].region.measure();
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      if (!cells[i].region.interiors_disjoint(cells[j].region)) c.require(false, "overlapping cells");
    }
  }
  c.require(total == w.support().measure(), "measure sum");
  std::size_t compared = 0;
  std::size_t mismatched = 0;
  for (const auto& shift : random_shifts(w, 3, seed)) {
    PointSet ps = generate(s, w, shift, big);
    for (const auto& p : ps.points) {
      if (!phys_within(s, s.project_phys(p.lattice), big - r)) continue;
      FieldVector x = s.star(p.lattice) + shift.base;
      Patch patch = patch_at(s, ps, p.lattice, r);
      if (patch.singular) continue;
      const AcceptanceCell* hit = nullptr;
      bool on_edge = false;
      for (const auto& cell : cells) {
        Location loc = cell.region.locate(x);
        on_edge = on_edge || loc == Location::kBoundary;
        if (cell.centre_colour == p.colour && loc == Location::kInside) hit = &cell;
      }
      if (on_edge) continue;
      ++compared;
      mismatched += hit == nullptr || hit->patch != patch.points;
    }
  }
  c.require(compared > 0 && mismatched == 0, "patch labels");
  c.detail << " r=" << r.to_string() << ":" << cells.size() << " cells/" << compared << " patches";
}

// Smallest multiple of 1/1000 whose square is at least `norm2`.
FieldScalar radius_covering(const FieldScalar& norm2) {
  auto p = static_cast<long>(std::floor(std::sqrt(norm2.to_double()) * 1000));
  FieldScalar r(Rational(p, 1000));
  while (r * r < norm2) r += FieldScalar(Rational(1, 1000));
  return r;
}

FieldVector ifs_fixed_point(const Scheme& s, const IntVector& z) {
  const auto k = static_cast<std::size_t>(s.k());
  std::vector<RationalVector> rows(k, RationalVector(k));
  RationalVector rhs(k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t col = 0; col < k; ++col) rows[r][col] = Rational((r == col ? 1 : 0) - s.matrix()(r, col));
    rhs[r] = Rational(static_cast<long>(z[r]));
  }
  return s.star(*solve_rational(rows, rhs));
}

// ------------------------------------------------------------------ criteria

void criterion1(Check& c) {
  auto start = Clock::now();
  FieldScalar silver = s2(1) - q(1);
  SlopeMatrix a = cf_to_matrix(cf_expand(silver));
  c.require(a.matrix == IntMatrix{{2, 1}, {1, 0}} && fixes_slope(a, silver), "sqrt2-1");
  FieldScalar inv_phi = s5(1, 2) - q(1, 2);
  SlopeMatrix b = cf_to_matrix(cf_expand(inv_phi));
  c.require(b.matrix == IntMatrix{{1, 1}, {1, 0}} && fixes_slope(b, inv_phi), "1/phi");
  c.require(Scheme::build(a.matrix).d() == 1 && Scheme::build(b.matrix).d() == 1, "2-to-1 schemes");
  std::uniform_int_distribution<int> quotient(1, 5);
  std::uniform_int_distribution<int> pre_len(0, 3);
  std::uniform_int_distribution<int> per_len(1, 4);
  std::uniform_int_distribution<int> integer_part(-3, 3);
  int good = 0;
  for (int i = 0; i < 50; ++i) {
    ContinuedFraction cf;
    cf.preperiod.push_back(integer_part(rng()));
    for (int j = pre_len(rng()); j > 0; --j) cf.preperiod.push_back(quotient(rng()));
    for (int j = per_len(rng()); j > 0; --j) cf.period.push_back(quotient(rng()));
    good += fixes_slope(cf_to_matrix(cf), cf_value(cf));
  }
  c.require(good == 50, "random expansions");
  double t = seconds_since(start);
  c.require(t < 5.0, "runtime");
  c.detail << " random=" << good << "/50 time=" << t << "s";
}

void criterion2(Check& c) {
  Scheme f = fibonacci();
  Window w = fibonacci_window(f);
  Shift t = random_shifts(w, 1, 2).front();
  auto gaps = gaps_1d(f, generate(f, w, t, q(200)));
  c.require(gaps.size() == 2, "two gaps");
  if (gaps.size() != 2) return;
  FieldScalar phi = q(1, 2) + s5(1, 2);
  c.require(gaps[1].length == phi * gaps[0].length, "length ratio phi");
  auto wide = gaps_1d(f, generate(f, w, t, q(500)));
  double ratio = static_cast<double>(wide[1].count) / static_cast<double>(wide[0].count);
  double rel = std::abs(ratio / phi.to_double() - 1.0);
  c.require(wide.size() == 2 && rel < 0.02, "count ratio");
  c.detail << " gaps=" << gaps[0].length.to_string() << "," << gaps[1].length.to_string() << " count_ratio=" << ratio;
}

void criterion3(Check& c) {
  auto start = Clock::now();
  Scheme f = fibonacci();
  Window w = fibonacci_window(f);
  SubVerdict v = decide_sub(f, w);
  c.require(v.substitutional, "decide");
  SubstitutionRule rule = derive_rule(f, w, v.power);
  std::size_t passed = 0;
  auto shifts = regular_shifts(f, w, 5, q(200), 7);
  c.require(shifts.size() == 5, "non-singular shifts");
  for (const auto& t : shifts) passed += verify_self_similarity(f, w, rule, t, q(200)).ok;
  c.require(passed == shifts.size(), "verification");
  double time = seconds_since(start);
  c.require(time < 10.0, "runtime");
  c.detail << " m=" << rule.power << " verified=" << passed << "/" << shifts.size() << " time=" << time << "s";
}

void criterion4(Check& c) {
  Scheme f = fibonacci();
  Window w = fibonacci_window(f);
  SubstitutionRule rule = derive_rule(f, w, 1);
  LidsResult zero = lids_power(f, w, rule, Shift::zero(1), q(30));
  c.require(zero.power == 2, "power at 0");
  Shift left = Shift::zero(1).with_direction({q(-1)});
  c.require(!is_fixed_after(f, w, rule, left, 1, q(60)) && is_fixed_after(f, w, rule, left, 2, q(60)),
            "fixed by second power only");
  Shift centre = Shift::at(fibonacci_centre(f));
  LidsResult mid = lids_power(f, w, rule, centre, q(30));
  c.require(mid.power == 3, "power at centre");
  c.require(is_fixed_after(f, w, rule, centre, 3, q(100)) && !is_fixed_after(f, w, rule, centre, 1, q(100)),
            "fixed by third power");
  std::string word = word_from_origin(f, generate(f, w, centre, q(100)), 100);
  c.require(word == fixed_point_word(100), "centre word");
  c.detail << " lids(0)=" << zero.power << " lids(centre)=" << mid.power << " word=" << word.substr(0, 16) << "...("
           << word.size() << ")";
}

void criterion5(Check& c) {
  auto start = Clock::now();
  Scheme ab = ammann_beenker();
  Window w = octagon(ab);
  SubstitutionRule rule = derive_rule(ab, w, 1);
  c.require(rule.fast_path, "fast path");
  std::vector<IntVector> z;
  if (!rule.cells.empty()) {
    for (const auto& cv : rule.cells.front().cluster) z.push_back(cv.vector);
  }
  c.require(z.size() == 25, "25 translates");
  Region contracted = w.support().linear_image(ab.A());
  Region joined = Region::empty(2);
  for (const auto& v : z) joined = joined.unite(contracted.translate(ab.star(v)));
  c.require(joined.equals(w.support()), "union equals window");
  VerifyReport rep = verify_self_similarity(ab, w, rule, regular_shifts(ab, w, 1, q(15), 5).front(), q(15));
  c.require(rep.ok, "verification");
  double time = seconds_since(start);
  c.require(time < 60.0, "runtime");
  c.detail << " |X|=" << z.size() << " points=" << rep.expected << " time=" << time << "s";
}

void criterion6(Check& c) {
  Scheme ns = non_sturm();
  Window w = Window::single(canonical_window(ns));
  auto gaps = gaps_1d(ns, generate(ns, w, random_shifts(w, 1, 1).front(), q(200)));
  std::vector<FieldScalar> lengths;
  for (const auto& g : gaps) lengths.push_back(g.length);
  std::vector<FieldScalar> expected;
  for (const auto& v : {IntVector{1, 0}, IntVector{1, 1}, IntVector{0, -1}}) expected.push_back(ns.project_phys(v)[0].abs());
  std::sort(expected.begin(), expected.end());
  c.require(lengths == expected, "three gap lengths");
  SubVerdict v = decide_sub(ns, w);
  c.require(v.substitutional, "decide");
  if (!v.substitutional) return;
  PowerSearch ps = find_minimal_rule(ns, w, v, random_shifts(w, 2, 6), q(100));
  std::size_t passed = 0;
  auto shifts = regular_shifts(ns, w, 3, q(100), 13);
  for (const auto& t : shifts) passed += verify_self_similarity(ns, w, ps.rule, t, q(100)).ok;
  c.require(!shifts.empty() && passed == shifts.size(), "verification");
  c.detail << " gaps=" << lengths.size() << " m=" << ps.rule.power << " verified=" << passed << "/" << shifts.size();
}

void criterion7(Check& c) {
  Scheme bd = blockdiag();
  Window diamond = Window::single(Region::polygon({{q(1), q(0)}, {q(0), q(1)}, {q(-1), q(0)}, {q(0), q(-1)}}));
  SubVerdict no = decide_sub(bd, diamond);
  c.require(!no.substitutional && no.fd_witness.has_value(), "diamond rejected with witness");
  Window sq = Window::single(square(q(0), q(1)));
  SubVerdict yes = decide_sub(bd, sq);
  c.require(yes.substitutional, "square accepted");
  if (!yes.substitutional) return;
  SubstitutionRule rule = derive_rule(bd, sq, yes.power);
  VerifyReport rep = verify_self_similarity(bd, sq, rule, regular_shifts(bd, sq, 1, q(10), 3).front(), q(10));
  c.require(rep.ok, "verification");
  c.detail << " diamond=NO square=YES m=" << rule.power << " points=" << rep.expected;
}

void criterion8(Check& c) {
  Scheme f = fibonacci();
  Window fw = fibonacci_window(f);
  // Radii in the ambient length that patches are measured with.
  FieldScalar long2 = f.phys_norm2(f.project_phys(IntVector{1, 0}));
  for (long gaps = 1; gaps <= 5; ++gaps) {
    check_partition(c, f, fw, radius_covering(FieldScalar(gaps * gaps) * long2), q(40), 64, 17);
  }

  // Shells: the distinct distances from a vertex to its neighbours.
  Scheme ab = ammann_beenker();
  Window ow = octagon(ab);
  PointSet ps = generate(ab, ow, Shift::zero(2), q(4));
  std::set<FieldScalar, decltype([](const FieldScalar& a, const FieldScalar& b) { return a < b; })> shells;
  for (const auto& a : ps.points) {
    if (!phys_within(ab, ab.project_phys(a.lattice), q(1))) continue;
    for (const auto& b : ps.points) {
      if (a.lattice != b.lattice) shells.insert(ab.phys_norm2(ab.project_phys(b.lattice - a.lattice)));
    }
  }
  // A rational radius strictly between consecutive shells sees exactly the inner ones.
  std::vector<FieldScalar> sq(shells.begin(), shells.end());
  c.require(sq.size() >= 3, "shells");
  for (std::size_t shell = 0; shell < 2 && shell + 1 < sq.size(); ++shell) {
    double mid = 0.5 * (std::sqrt(sq[shell].to_double()) + std::sqrt(sq[shell + 1].to_double()));
    FieldScalar r(Rational(static_cast<long>(std::lround(mid * 1000)), 1000));
    c.require(sq[shell] < r * r && r * r < sq[shell + 1], "radius between shells");
    check_partition(c, ab, ow, r, q(6), 256, 23);
  }
}

void criterion9(Check& c) {
  Scheme ab = ammann_beenker();
  io::IfsSpec spec = io::ifs_from_json(io::read_json_file(data("ammann_beenker_fractal_ifs.json")), ab);
  IfsWindow ifs(ab, spec.z, spec.seed_core);
  auto polys = ifs.render(spec.depth, 50000);
  c.require(!polys.empty(), "render");
  FieldVector hi{ifs.radius(), ifs.radius()};
  FieldVector lo{-ifs.radius(), -ifs.radius()};
  std::vector<IntVector> pts;
  for (long r = 4; pts.size() < 1000; r += 2) pts = enumerate_lattice(ab, FieldScalar(r), lo, hi);
  pts.resize(1000);
  std::size_t inside = 0, outside = 0, undetermined = 0, contradictions = 0;
  for (const auto& g : pts) {
    Membership m = ifs.member_lattice(g);
    bool approx = ifs.in_approximant(ab.star(g), spec.depth);
    if (m == Membership::kInside) {
      ++inside;
      contradictions += !approx;
    } else if (m == Membership::kOutside) {
      ++outside;
    } else {
      ++undetermined;
    }
  }
  // Fixed points of the maps are members, so the "inside" branch is exercised too.
  std::size_t fixed_inside = 0;
  for (const auto& z : spec.z) {
    FieldVector x = ifs_fixed_point(ab, z);
    Membership m = ifs.member(x);
    fixed_inside += m == Membership::kInside;
    contradictions += m == Membership::kInside && !ifs.in_approximant(x, spec.depth);
  }
  c.require(contradictions == 0, "contradictions");
  c.require(fixed_inside == spec.z.size(), "fixed points inside");
  c.detail << " lattice: inside=" << inside << " outside=" << outside << " undetermined=" << undetermined
           << " contradictions=" << contradictions << " fixed_points_inside=" << fixed_inside << "/" << spec.z.size()
           << " polygons=" << polys.size();
}

void criterion10(Check& c) {
  IntMatrix minus_id{{-1, 0}, {0, -1}};
  std::size_t symmetric = 0;
  std::size_t windows = 0;
  // 1D interval windows in the data corpus and the scheme each belongs to.
  const std::vector<std::pair<std::string, std::string>> corpus = {
      {"fibonacci.json", "fibonacci_window.json"},
      {"fibonacci.json", "fibonacci_window_centred.json"},
      {"non_sturm.json", "non_sturm_window.json"},
  };
  for (const auto& [scheme_file, window_file] : corpus) {
    Scheme s = io::scheme_from_json(io::read_json_file(data(scheme_file)));
    Window w = io::window_from_json(io::read_json_file(data(window_file)), s);
    ++windows;
    symmetric += symmetry_check(s, w, minus_id).symmetric;
  }
  c.require(symmetric == windows, "-Id on interval windows");
  Scheme f = fibonacci();
  Window two = io::window_from_json(io::read_json_file(data("two_intervals.json")), f);
  SymmetryResult r = symmetry_check(f, two, minus_id);
  c.require(!r.symmetric, "two intervals rejected");
  c.detail << " symmetric=" << symmetric << "/" << windows << " two_intervals=" << (r.symmetric ? "yes" : "no");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"continued fraction to matrix", criterion1},
      {"Fibonacci gaps", criterion2},
      {"Fibonacci self-similarity", criterion3},
      {"Fibonacci fixed-point powers", criterion4},
      {"Ammann-Beenker 25 translates", criterion5},
      {"non-Sturm three gaps", criterion6},
      {"block-diagonal decision", criterion7},
      {"acceptance-domain tiling", criterion8},
      {"IFS fractal window", criterion9},
      {"window symmetry", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    auto start = Clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s %2zu %s:%s (%.2fs)\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                c.detail.str().c_str(), seconds_since(start));
    std::fflush(stdout);
    failures += !c.ok;
  }
  return failures == 0 ? 0 : 1;
}
