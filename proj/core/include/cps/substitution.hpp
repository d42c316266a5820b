#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cps/field.hpp"
#include "cps/linalg.hpp"
#include "cps/pattern.hpp"
#include "cps/region.hpp"
#include "cps/scheme.hpp"
#include "cps/window.hpp"

namespace cps {

struct SubVerdict {
  bool substitutional = false;
  std::uint64_t fd_order = 0;
  Integer denominator = 1;
  std::uint64_t lattice_order = 1;  ///< order of M on (Z/N)^k
  bool orientation_doubled = false;
  unsigned power = 0;               ///< algebraic power m
  std::optional<FieldVector> fd_witness;
  std::optional<std::pair<FieldVector, FieldVector>> rationality_witness;
  std::string reason;
};

SubVerdict decide_sub(const Scheme& scheme, const Window& window);

/// Parent cell of A^m(W_colour); every parent whose inflated star falls in
/// `region` emits the children listed in `cluster`.
struct RuleCell {
  int parent_colour = 0;
  Region region;
  std::vector<ColouredVector> cluster;
};

/// Successor of a point g with colour c is M^m g + z for each z emitted by
/// its cell. Successor shifts obey t' = A^m t + offset.
struct SubstitutionRule {
  unsigned power = 1;
  FieldVector offset;
  bool fast_path = false;
  std::vector<ColouredVector> candidates;  ///< in claim order
  std::vector<RuleCell> cells;
};

struct RuleOptions {
  FieldScalar initial_radius = FieldScalar(1);
  FieldScalar max_radius = FieldScalar(64);
  bool allow_fast = true;
  bool allow_general = true;
  std::size_t max_cutters = 64;
  /// Lattice symmetries of the window; a fast-path cover is then chosen as a
  /// union of orbits. Empty means "discover signed permutations".
  std::optional<std::vector<IntMatrix>> symmetries;
};

/// Throws kBoundExceeded if no rule is found within the candidate radius cap.
SubstitutionRule derive_rule(const Scheme& scheme, const Window& window, unsigned m,
                             const RuleOptions& options = {});

/// Shift of the successor pattern.
Shift successor_shift(const Scheme& scheme, const SubstitutionRule& rule, const Shift& shift);

struct ApplyResult {
  PointSet successor;                  ///< restricted to the certified radius
  std::vector<IntVector> flagged;      ///< parents whose cell could not be decided
  std::size_t emissions = 0;
  std::size_t claim_violations = 0;    ///< certified children not claimed exactly once
};

ApplyResult apply_rule(const Scheme& scheme, const SubstitutionRule& rule, const PointSet& predecessor);

struct VerifyReport {
  bool ok = false;
  FieldScalar compared_radius;
  std::size_t expected = 0;
  std::size_t produced = 0;
  std::size_t claim_violations = 0;
  bool torus_relation = false;
  std::optional<PatternPoint> first_missing;
  std::optional<PatternPoint> first_extra;
  std::string note;
};

VerifyReport verify_self_similarity(const Scheme& scheme, const Window& window, const SubstitutionRule& rule,
                                    const Shift& shift, const FieldScalar& radius);

struct PowerSearch {
  SubstitutionRule rule;
  std::vector<unsigned> tried;
};

/// Tries multiples of the FD order up to the algebraic power and returns the
/// least power whose derived rule verifies at the given random shifts.
PowerSearch find_minimal_rule(const Scheme& scheme, const Window& window, const SubVerdict& verdict,
                              const std::vector<Shift>& probes, const FieldScalar& radius,
                              const RuleOptions& options = {});

struct LidsResult {
  unsigned power = 0;          ///< l: sigma^l fixes the pattern up to translation
  unsigned torus_period = 0;   ///< least j with t_j = s mod Gamma_<
  Integer denominator = 1;
  bool singular = false;
  IntVector translation;       ///< t_l - s = star(translation)
};

/// Fixed-point power of the rule at shift s. For singular s the limit
/// pattern along the shift's direction is tracked; the fibre permutation is
/// detected by comparing generated limit patterns at `radius`.
LidsResult lids_power(const Scheme& scheme, const Window& window, const SubstitutionRule& rule, const Shift& s,
                      const FieldScalar& radius);

/// Applies the rule `times` times to the pattern at `s` (generated with
/// `radius`) and checks that the result equals the original pattern shifted
/// by the lattice translation accumulated along the way.
bool is_fixed_after(const Scheme& scheme, const Window& window, const SubstitutionRule& rule, const Shift& s,
                    unsigned times, const FieldScalar& radius);

struct SymmetryResult {
  bool symmetric = false;
  std::optional<FieldVector> shift;  ///< W = S(W) + shift
  std::string reason;
};

SymmetryResult symmetry_check(const Scheme& scheme, const Window& window, const IntMatrix& s);

/// Signed permutation matrices commuting with M that map the window onto
/// itself without translation (always contains the identity).
std::vector<IntMatrix> window_symmetries(const Scheme& scheme, const Window& window);

struct GifsMap {
  std::size_t source = 0;  ///< component whose contracted image is used
  FieldVector translation;
};

struct GifsComponent {
  int colour = 0;
  Region region;
  std::vector<GifsMap> maps;
};

/// Graph-directed IFS W'_i = union of A^m(W'_j) + translation.
struct Gifs {
  unsigned power = 1;
  std::vector<GifsComponent> components;
  bool verified = false;
};

Gifs emit_gifs(const Scheme& scheme, const SubstitutionRule& rule);

/// Projection of the unit cube: the canonical window of the scheme.
Region canonical_window(const Scheme& scheme);

}  // namespace cps
