#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cps/field.hpp"
#include "cps/linalg.hpp"
#include "cps/region.hpp"
#include "cps/scheme.hpp"

namespace cps {

struct WindowComponent {
  int colour = 0;
  Region region;
};

/// Supporting line {x : normal . x = offset} (a point when n = 1).
struct SupportPlane {
  FieldVector normal;
  FieldScalar offset;
  friend bool operator==(const SupportPlane&, const SupportPlane&) = default;
};

/// Polytopal, possibly coloured window with its face data.
class Window {
 public:
  Window() = default;
  explicit Window(std::vector<WindowComponent> components);
  static Window single(Region region) { return Window({WindowComponent{0, std::move(region)}}); }

  int dim() const { return components_.empty() ? 0 : components_.front().region.dim(); }
  const std::vector<WindowComponent>& components() const { return components_; }
  const Region* colour_region(int colour) const;
  std::vector<int> colours() const;
  /// Union of all components.
  const Region& support() const { return support_; }

  /// Boundary hyperplanes of all components, canonicalised and deduplicated.
  const std::vector<SupportPlane>& hyperplanes() const { return hyperplanes_; }
  /// Directions of the supporting subspaces in 2D (empty in 1D, where the
  /// only supporting subspace is {0}).
  const std::vector<FieldVector>& subspaces() const { return subspaces_; }
  /// Points where two distinct boundary hyperplanes meet; endpoints in 1D.
  const std::vector<FieldVector>& vertices() const { return vertices_; }

  Window translate(const FieldVector& v) const;
  Window linear_image(const FieldMatrix& t) const;

 private:
  void derive_faces();

  std::vector<WindowComponent> components_;
  Region support_;
  std::vector<SupportPlane> hyperplanes_;
  std::vector<FieldVector> subspaces_;
  std::vector<FieldVector> vertices_;
};

/// Line direction scaled so the first nonzero coordinate is 1.
FieldVector canonical_direction(const FieldVector& v);

/// Lattice displacement together with the colour it must (or must not) carry.
struct ColouredVector {
  IntVector vector;
  int colour = 0;
  friend bool operator==(const ColouredVector&, const ColouredVector&) = default;
};

struct Indicator {
  int centre_colour = 0;
  std::vector<ColouredVector> in;
  std::vector<ColouredVector> out;
};

/// W_P: the part of W_{centre} whose points see every `in` displacement and
/// none of the `out` ones.
Region acceptance_domain(const Scheme& scheme, const Window& window, const Indicator& ind);

struct AcceptanceCell {
  int centre_colour = 0;
  Region region;
  /// Patch realised by interior points: displacements (sorted) with colours.
  std::vector<ColouredVector> patch;
};

/// Partition of each W_i into cells labelled by the radius-r patch.
std::vector<AcceptanceCell> acceptance_partition(const Scheme& scheme, const Window& window,
                                                 const FieldScalar& r, std::size_t max_cutters = 64);

/// Lattice vectors g != 0 with |g_phys| <= r and star(g) in the box of W - W.
std::vector<IntVector> cylinder_vectors(const Scheme& scheme, const Window& window, const FieldScalar& r);

struct FdResult {
  bool invariant = false;
  std::uint64_t order = 0;               ///< order of the permutation of subspaces
  std::optional<FieldVector> witness;    ///< direction V with A(V) not supporting
};

FdResult fd_check(const Scheme& scheme, const Window& window);

struct RationalityResult {
  bool rational = false;
  Integer denominator = 1;
  std::optional<std::pair<FieldVector, FieldVector>> witness;
};

RationalityResult rationality_check(const Scheme& scheme, const Window& window);

/// Least common denominator of the rational lift of an internal vector, or
/// nullopt when the vector is not in Q Gamma_<.
std::optional<Integer> lift_denominator(const Scheme& scheme, const FieldVector& x);

}  // namespace cps
