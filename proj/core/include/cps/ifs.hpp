#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "cps/field.hpp"
#include "cps/linalg.hpp"
#include "cps/region.hpp"
#include "cps/scheme.hpp"

namespace cps {

enum class Membership { kInside, kOutside, kUndetermined };

const char* membership_name(Membership m);

struct IfsLimits {
  std::size_t max_depth = 4096;
  std::size_t max_states = 200000;
};

/// Window given as the attractor of W = union over z of A(W) + star(z).
///
/// Membership of x in Q Gamma_< is decided exactly: lifting x to q in Q^k,
/// x lies in W iff the graph of preimages q -> M^-1 (q - z) that stay in the
/// containment box (sup norm <= r0) has a reachable cycle. That graph is
/// finite because the physical part contracts and denominators are fixed.
class IfsWindow {
 public:
  /// Throws kInvalidIfs if A is not a sup-norm contraction in the eigenbasis,
  /// or if a `seed_core` K is given and A(K) + star(Z) does not cover K.
  IfsWindow(Scheme scheme, std::vector<IntVector> z, std::optional<Region> seed_core = std::nullopt);

  const Scheme& scheme() const { return scheme_; }
  const std::vector<IntVector>& translations() const { return z_; }
  /// Every point of W has sup norm at most this bound.
  const FieldScalar& radius() const { return r0_; }
  const FieldScalar& contraction() const { return norm_a_; }

  Membership member(const FieldVector& x, const IfsLimits& limits = {}) const;
  Membership member_lattice(const IntVector& g, const IfsLimits& limits = {}) const;

  /// Whether x lies in X^depth(B) for the containment box B; this set
  /// shrinks to W as depth grows and always contains it.
  bool in_approximant(const FieldVector& x, unsigned depth) const;

  /// Floating images of B under all address words of the given depth (the
  /// depth is lowered until at most `cap` pieces are produced).
  std::vector<std::vector<std::array<double, 2>>> render(unsigned depth, std::size_t cap = 100000) const;

 private:
  Membership member_rational(const RationalVector& q, const IfsLimits& limits) const;
  bool in_box(const FieldVector& x) const;

  Scheme scheme_;
  std::vector<IntVector> z_;
  std::optional<Region> core_;
  FieldScalar norm_a_;
  FieldScalar r0_;
  FieldMatrix m_inv_;
};

}  // namespace cps
