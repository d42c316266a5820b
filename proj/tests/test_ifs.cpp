#include <gtest/gtest.h>

#include "cps/error.hpp"
#include "cps/ifs.hpp"
#include "cps/lattice.hpp"
#include "support.hpp"

using namespace cps;
using namespace cps::testing;

namespace {

// Fixed point of x -> A x + star(z): star((I - M)^-1 z), a point of every
// attractor that uses z.
FieldVector fixed_point(const Scheme& s, const IntVector& z) {
  const auto k = static_cast<std::size_t>(s.k());
  std::vector<RationalVector> rows(k, RationalVector(k));
  RationalVector rhs(k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) rows[r][c] = Rational((r == c ? 1 : 0) - s.matrix()(r, c));
    rhs[r] = Rational(static_cast<long>(z[r]));
  }
  auto q = solve_rational(rows, rhs);
  return s.star(*q);
}

Membership expected_from(Location loc) { return loc == Location::kOutside ? Membership::kOutside : Membership::kInside; }

// Fibonacci window [0, L] is the attractor of A W and A W + L.
IfsWindow fibonacci_interval_ifs(const Scheme& f) { return IfsWindow(f, {IntVector{0, 1}, IntVector{-1, 1}}); }

}  // namespace

TEST(Ifs, IntervalAttractorAgreesWithInterval) {
  Scheme f = fibonacci();
  IfsWindow ifs = fibonacci_interval_ifs(f);
  Region w = fibonacci_window(f).support();
  EXPECT_LT(ifs.contraction(), q(1));
  std::size_t inside = 0;
  for (const auto& g : enumerate_lattice(f, q(30), {q(-2)}, {q(3)})) {
    Location loc = w.locate(f.star(g));
    EXPECT_EQ(ifs.member_lattice(g), expected_from(loc)) << g[0] << "," << g[1];
    inside += loc != Location::kOutside;
  }
  EXPECT_GT(inside, 30u);
  // Rational points that are not lattice points.
  for (int i = 0; i < 200; ++i) {
    RationalVector qv{random_rational(3, 7), random_rational(3, 7)};
    FieldVector x = f.star(qv);
    EXPECT_EQ(ifs.member(x), expected_from(w.locate(x)));
  }
}

TEST(Ifs, SeedCoreMustBeCovered) {
  Scheme f = fibonacci();
  Region w = fibonacci_window(f).support();
  EXPECT_NO_THROW(IfsWindow(f, {IntVector{0, 1}, IntVector{-1, 1}}, w));
  try {
    IfsWindow bad(f, {IntVector{0, 1}}, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidIfs);
  }
}

TEST(Ifs, FixedPointsOfMapsAreMembers) {
  Scheme ab = ammann_beenker();
  std::vector<IntVector> z;
  for (int i = 0; i < 4; ++i) {
    z.push_back(unit(4, i));
    z.push_back(unit(4, i, -1));
  }
  IfsWindow ifs(ab, z);
  for (const auto& zi : z) EXPECT_EQ(ifs.member(fixed_point(ab, zi)), Membership::kInside);
  // Members lie in every approximant.
  FieldVector p = fixed_point(ab, unit(4, 0));
  for (unsigned depth : {0u, 4u, 12u}) EXPECT_TRUE(ifs.in_approximant(p, depth));
}

TEST(Ifs, AmmannBeenkerFractalNeverContradictsApproximant) {
  Scheme ab = ammann_beenker();
  std::vector<IntVector> z;
  for (int i = 0; i < 4; ++i) {
    z.push_back(unit(4, i));
    z.push_back(unit(4, i, -1));
  }
  IfsWindow ifs(ab, z);
  FieldVector hi{ifs.radius(), ifs.radius()};
  FieldVector lo{-ifs.radius(), -ifs.radius()};
  std::size_t checked = 0;
  for (const auto& g : enumerate_lattice(ab, q(8), lo, hi)) {
    Membership m = ifs.member_lattice(g);
    ASSERT_NE(m, Membership::kUndetermined);
    // The approximants contain the attractor, so "inside" forces every depth.
    if (m == Membership::kInside) EXPECT_TRUE(ifs.in_approximant(ab.star(g), 12));
    // A point that leaves an approximant cannot be inside.
    if (!ifs.in_approximant(ab.star(g), 12)) EXPECT_EQ(m, Membership::kOutside);
    ++checked;
  }
  EXPECT_GT(checked, 100u);
  EXPECT_FALSE(ifs.render(3).empty());
}

TEST(Ifs, OctagonIsTheAttractorOfItsRule) {
  Scheme ab = ammann_beenker();
  Window w = octagon(ab);
  SubstitutionRule rule = derive_rule(ab, w, 1);
  ASSERT_TRUE(rule.fast_path);
  ASSERT_TRUE(is_zero(rule.offset));
  std::vector<IntVector> z;
  for (const auto& c : rule.cells.front().cluster) z.push_back(c.vector);
  ASSERT_EQ(z.size(), 25u);
  IfsWindow ifs(ab, z);
  const Region& oct = w.support();
  auto [lo, hi] = oct.bounds();
  std::size_t inside = 0;
  std::size_t outside = 0;
  for (const auto& g : enumerate_lattice(ab, q(6), lo - FieldVector{q(1, 2), q(1, 2)}, hi + FieldVector{q(1, 2), q(1, 2)})) {
    Location loc = oct.locate(ab.star(g));
    EXPECT_EQ(ifs.member_lattice(g), expected_from(loc));
    (loc == Location::kOutside ? outside : inside) += 1;
  }
  EXPECT_GT(inside, 50u);
  EXPECT_GT(outside, 20u);
}

TEST(Ifs, StateCapYieldsUndetermined) {
  Scheme f = fibonacci();
  IfsWindow ifs = fibonacci_interval_ifs(f);
  Region w = fibonacci_window(f).support();
  IfsLimits tight{4096, 1};
  std::size_t undetermined = 0;
  for (const auto& g : enumerate_lattice(f, q(20), {q(0)}, {w.bounds().second[0]})) {
    Membership m = ifs.member_lattice(g, tight);
    // A cap may leave the answer open but never flips it.
    if (m != Membership::kUndetermined) EXPECT_EQ(m, expected_from(w.locate(f.star(g))));
    undetermined += m == Membership::kUndetermined;
  }
  EXPECT_GT(undetermined, 0u);
}

TEST(Ifs, ApproximantsShrinkTowardsTheInterval) {
  Scheme f = fibonacci();
  IfsWindow ifs = fibonacci_interval_ifs(f);
  FieldScalar len = f.star(IntVector{-1, 1})[0];
  FieldVector outside{len + q(1, 100)};
  EXPECT_TRUE(ifs.in_approximant(outside, 0));
  EXPECT_FALSE(ifs.in_approximant(outside, 20));
  FieldVector mid{len / q(2)};
  for (unsigned d : {0u, 5u, 20u}) EXPECT_TRUE(ifs.in_approximant(mid, d));
}
