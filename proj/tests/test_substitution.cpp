#include <gtest/gtest.h>

#include <map>

#include "cps/error.hpp"
#include "cps/substitution.hpp"
#include "support.hpp"

using namespace cps;
using namespace cps::testing;

namespace {

// Union of the contracted translates against the window, using region
// operations only.
void expect_exact_cover(const Scheme& s, const Window& w, const std::vector<IntVector>& z, unsigned m) {
  const Region& win = w.support();
  Region contracted = win.linear_image(s.A_pow(m));
  Region joined = Region::empty(w.dim());
  for (const auto& v : z) {
    Region piece = contracted.translate(s.star(v));
    EXPECT_TRUE(piece.subset_of(win));
    joined = joined.unite(piece);
  }
  EXPECT_TRUE(joined.equals(win));
}

std::vector<IntVector> vectors_of(const std::vector<ColouredVector>& cs) {
  std::vector<IntVector> out;
  for (const auto& c : cs) out.push_back(c.vector);
  return out;
}

// Gap letters to the right of the origin: a for the long gap, b for the short.
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

std::string palindromic_fixed_point(std::size_t letters) {
  std::string w = "a";
  while (w.size() < letters) {
    std::string next;
    for (char c : w) next += c == 'a' ? "ababa" : "aba";
    w = next;
  }
  return w.substr(0, letters);
}

}  // namespace

TEST(Decide, Verdicts) {
  Scheme f = fibonacci();
  SubVerdict fv = decide_sub(f, fibonacci_window(f));
  EXPECT_TRUE(fv.substitutional);
  EXPECT_EQ(fv.fd_order, 1u);
  EXPECT_EQ(fv.denominator, 1);

  Scheme ab = ammann_beenker();
  SubVerdict av = decide_sub(ab, octagon(ab));
  EXPECT_TRUE(av.substitutional);
  EXPECT_EQ(av.fd_order, 1u);
  EXPECT_EQ(av.denominator, 1);

  Scheme bd = blockdiag();
  Window diamond = Window::single(Region::polygon({{q(1), q(0)}, {q(0), q(1)}, {q(-1), q(0)}, {q(0), q(-1)}}));
  SubVerdict dv = decide_sub(bd, diamond);
  EXPECT_FALSE(dv.substitutional);
  EXPECT_TRUE(dv.fd_witness);
  EXPECT_FALSE(dv.reason.empty());
  EXPECT_TRUE(decide_sub(bd, Window::single(square(q(0), q(1)))).substitutional);
}

TEST(Decide, DenominatorRaisesThePower) {
  Scheme f = fibonacci();
  RationalVector third{Rational(1, 3), Rational(0)};
  SubVerdict v = decide_sub(f, Window::single(Region::interval(f.star(third)[0], q(0))));
  EXPECT_TRUE(v.substitutional);
  EXPECT_EQ(v.denominator, 3);
  // M has order 8 on (Z/3)^2.
  EXPECT_EQ(v.lattice_order, 8u);
  EXPECT_EQ(v.power % 8, 0u);
}

TEST(DeriveRule, FibonacciFastPath) {
  Scheme f = fibonacci();
  Window w = fibonacci_window(f);
  SubstitutionRule rule = derive_rule(f, w, 1);
  EXPECT_TRUE(rule.fast_path);
  auto z = vectors_of(rule.candidates);
  std::sort(z.begin(), z.end());
  EXPECT_EQ(z, (std::vector<IntVector>{{-1, 1}, {0, 1}}));
  expect_exact_cover(f, w, z, 1);
}

TEST(DeriveRule, AmmannBeenkerTwentyFiveTranslates) {
  Scheme ab = ammann_beenker();
  Window w = octagon(ab);
  EXPECT_EQ(window_symmetries(ab, w).size(), 16u);
  SubstitutionRule rule = derive_rule(ab, w, 1);
  ASSERT_TRUE(rule.fast_path);
  auto z = vectors_of(rule.cells.front().cluster);
  ASSERT_EQ(z.size(), 25u);
  expect_exact_cover(ab, w, z, 1);
  // Centre, one per vertex, two per edge: classes by internal length.
  std::map<FieldScalar, int, decltype([](const FieldScalar& a, const FieldScalar& b) { return a < b; })> classes;
  for (const auto& v : z) ++classes[ab.int_norm2(ab.star(v))];
  std::vector<int> sizes;
  for (const auto& [len, n] : classes) sizes.push_back(n);
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<int>{1, 8, 16}));
}

TEST(DeriveRule, GeneralPathWhenFastIsDisabled) {
  Scheme f = fibonacci();
  Window w = fibonacci_window(f);
  RuleOptions opts;
  opts.allow_fast = false;
  SubstitutionRule rule = derive_rule(f, w, 1, opts);
  EXPECT_FALSE(rule.fast_path);
  // Parent cells partition A(W).
  FieldScalar total;
  for (const auto& c : rule.cells) {
    EXPECT_FALSE(c.cluster.empty());
    total += c.region.measure();
  }
  EXPECT_EQ(total, w.support().linear_image(f.A()).measure());
  for (const auto& shift : random_shifts(w, 2, 31)) {
    EXPECT_TRUE(verify_self_similarity(f, w, rule, shift, q(100)).ok);
  }
  Gifs g = emit_gifs(f, rule);
  EXPECT_TRUE(g.verified);
  EXPECT_EQ(g.components.size(), rule.cells.size());
}

TEST(DeriveRule, BoundExceeded) {
  Scheme f = fibonacci();
  RuleOptions opts;
  opts.allow_general = false;
  opts.max_radius = q(1, 100);
  opts.initial_radius = q(1, 100);
  try {
    (void)derive_rule(f, fibonacci_window(f), 1, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBoundExceeded);
  }
}

TEST(Verify, FibonacciRandomShifts) {
  Scheme f = fibonacci();
  Window w = fibonacci_window(f);
  SubstitutionRule rule = derive_rule(f, w, 1);
  for (const auto& shift : random_shifts(w, 5, 3)) {
    VerifyReport rep = verify_self_similarity(f, w, rule, shift, q(100));
    EXPECT_TRUE(rep.ok) << rep.note;
    EXPECT_TRUE(rep.torus_relation);
    EXPECT_EQ(rep.claim_violations, 0u);
    EXPECT_EQ(rep.expected, rep.produced);
    EXPECT_GT(rep.expected, 50u);
  }
}

TEST(Verify, CorruptedRuleIsCaught) {
  Scheme f = fibonacci();
  Window w = fibonacci_window(f);
  SubstitutionRule rule = derive_rule(f, w, 1);
  for (auto& c : rule.cells) c.cluster.pop_back();
  VerifyReport rep = verify_self_similarity(f, w, rule, random_shifts(w, 1, 8).front(), q(60));
  EXPECT_FALSE(rep.ok);
  EXPECT_TRUE(rep.first_missing);
}

TEST(Verify, AmmannBeenker) {
  Scheme ab = ammann_beenker();
  Window w = octagon(ab);
  SubstitutionRule rule = derive_rule(ab, w, 1);
  VerifyReport rep = verify_self_similarity(ab, w, rule, random_shifts(w, 1, 4).front(), q(10));
  EXPECT_TRUE(rep.ok) << rep.note;
}

TEST(ApplyRule, EmptyPredecessor) {
  Scheme f = fibonacci();
  SubstitutionRule rule = derive_rule(f, fibonacci_window(f), 1);
  PointSet empty{Shift::at({q(1, 3)}), q(10), {}, {}};
  ApplyResult res = apply_rule(f, rule, empty);
  EXPECT_TRUE(res.successor.points.empty());
  EXPECT_EQ(res.emissions, 0u);
}

TEST(ApplyRule, EveryChildHasOneParent) {
  Scheme f = fibonacci();
  Window w = fibonacci_window(f);
  SubstitutionRule rule = derive_rule(f, w, 1);
  Shift t = random_shifts(w, 1, 12).front();
  ApplyResult res = apply_rule(f, rule, generate(f, w, t, q(100)));
  EXPECT_EQ(res.claim_violations, 0u);
  EXPECT_TRUE(res.flagged.empty());
  // The successor is the pattern at the successor shift, inside its certified ball.
  PointSet direct = generate(f, w, successor_shift(f, rule, t), res.successor.radius);
  EXPECT_EQ(res.successor.points, direct.points);
  EXPECT_GE(res.successor.radius, q(50));
}

TEST(SuccessorShift, TorusRelation) {
  Scheme ab = ammann_beenker();
  Window w = octagon(ab);
  SubstitutionRule rule = derive_rule(ab, w, 1);
  Shift t = random_shifts(w, 1, 2).front();
  EXPECT_EQ(successor_shift(ab, rule, t).base, ab.A() * t.base + rule.offset);
}

TEST(MinimalPower, NonSturm) {
  Scheme ns = non_sturm();
  Window w = Window::single(canonical_window(ns));
  SubVerdict v = decide_sub(ns, w);
  ASSERT_TRUE(v.substitutional);
  PowerSearch ps = find_minimal_rule(ns, w, v, random_shifts(w, 2, 6), q(100));
  EXPECT_EQ(ps.rule.power, 1u);
  PointSet pattern = generate(ns, w, random_shifts(w, 1, 1).front(), q(100));
  auto gaps = gaps_1d(ns, pattern);
  ASSERT_EQ(gaps.size(), 3u);
  std::vector<FieldScalar> lengths;
  for (const auto& g : gaps) lengths.push_back(g.length);
  std::vector<FieldScalar> expected;
  for (const auto& v : {IntVector{1, 0}, IntVector{1, 1}, IntVector{0, -1}}) expected.push_back(ns.project_phys(v)[0].abs());
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(lengths, expected);
}

TEST(Lids, FibonacciVertexShiftNeedsSecondPower) {
  Scheme f = fibonacci();
  Window w = fibonacci_window(f);
  SubstitutionRule rule = derive_rule(f, w, 1);
  LidsResult res = lids_power(f, w, rule, Shift::zero(1), q(30));
  EXPECT_EQ(res.power, 2u);
  EXPECT_TRUE(res.singular);
  Shift left = Shift::zero(1).with_direction({q(-1)});
  EXPECT_FALSE(is_fixed_after(f, w, rule, left, 1, q(40)));
  EXPECT_TRUE(is_fixed_after(f, w, rule, left, 2, q(40)));
}

TEST(Lids, FibonacciCentreNeedsThirdPower) {
  Scheme f = fibonacci();
  Window w = fibonacci_window(f);
  SubstitutionRule rule = derive_rule(f, w, 1);
  Shift c = Shift::at(fibonacci_centre(f));
  LidsResult res = lids_power(f, w, rule, c, q(30));
  EXPECT_EQ(res.power, 3u);
  EXPECT_EQ(res.denominator, 2);
  EXPECT_FALSE(res.singular);
  EXPECT_FALSE(is_fixed_after(f, w, rule, c, 1, q(100)));
  EXPECT_FALSE(is_fixed_after(f, w, rule, c, 2, q(100)));
  EXPECT_TRUE(is_fixed_after(f, w, rule, c, 3, q(100)));
  // The pattern reads as the palindromic fixed point to the right of the origin.
  PointSet ps = generate(f, w, c, q(100));
  EXPECT_EQ(word_from_origin(f, ps, 100), palindromic_fixed_point(100));
}

TEST(Lids, TrivialTorsion) {
  Scheme ab = ammann_beenker();
  Window w = octagon(ab);
  SubstitutionRule rule = derive_rule(ab, w, 1);
  LidsResult res = lids_power(ab, w, rule, Shift::zero(2), q(6));
  EXPECT_EQ(res.denominator, 1);
  EXPECT_EQ(res.power, 1u);
}

TEST(Symmetry, IntervalWindows) {
  Scheme f = fibonacci();
  IntMatrix minus_id{{-1, 0}, {0, -1}};
  SymmetryResult r = symmetry_check(f, fibonacci_window(f), minus_id);
  EXPECT_TRUE(r.symmetric);
  ASSERT_TRUE(r.shift);
  // -W + shift = W for W = [0, L] means shift = L.
  EXPECT_EQ((*r.shift)[0], f.star(IntVector{-1, 1})[0]);
  SymmetryResult id = symmetry_check(f, fibonacci_window(f), IntMatrix::identity(2));
  EXPECT_TRUE(id.symmetric);
  EXPECT_TRUE(is_zero(*id.shift));
  EXPECT_FALSE(symmetry_check(f, fibonacci_window(f), f.matrix()).symmetric);
  Window two = Window::single(Region::intervals({{q(0), q(1)}, {q(2), q(5, 2)}}));
  EXPECT_FALSE(symmetry_check(f, two, minus_id).symmetric);
}

TEST(Symmetry, InvalidMatrixIsRejected) {
  Scheme f = fibonacci();
  // Does not commute with M.
  EXPECT_FALSE(symmetry_check(f, fibonacci_window(f), IntMatrix{{0, 1}, {1, 0}}).symmetric);
  SymmetryResult scaled = symmetry_check(f, fibonacci_window(f), IntMatrix{{2, 0}, {0, 1}});
  EXPECT_FALSE(scaled.symmetric);
  EXPECT_FALSE(scaled.reason.empty());
  EXPECT_THROW((void)symmetry_check(f, fibonacci_window(f), IntMatrix::identity(3)), Error);
}

TEST(Gifs, FastPathRules) {
  Scheme f = fibonacci();
  Gifs fg = emit_gifs(f, derive_rule(f, fibonacci_window(f), 1));
  EXPECT_TRUE(fg.verified);
  ASSERT_EQ(fg.components.size(), 1u);
  EXPECT_EQ(fg.components[0].maps.size(), 2u);
  Scheme ab = ammann_beenker();
  Gifs ag = emit_gifs(ab, derive_rule(ab, octagon(ab), 1));
  EXPECT_TRUE(ag.verified);
  ASSERT_EQ(ag.components.size(), 1u);
  EXPECT_EQ(ag.components[0].maps.size(), 25u);
}
