#include "cps/window.hpp"

#include <algorithm>
#include <numeric>

#include "cps/error.hpp"
#include "cps/lattice.hpp"

namespace cps {

FieldVector canonical_direction(const FieldVector& v) {
  for (const auto& c : v) {
    if (!c.is_zero()) return (FieldScalar(1) / c) * v;
  }
  throw Error(ErrorCode::kValidation, "zero direction");
}

Window::Window(std::vector<WindowComponent> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::kValidation, "window has no components");
  const int dim = components_.front().region.dim();
  support_ = Region(dim);
  for (const auto& c : components_) {
    if (c.region.dim() != dim) throw Error(ErrorCode::kDimensionMismatch, "window components differ in dimension");
    if (c.region.is_empty()) throw Error(ErrorCode::kValidation, "window component is empty");
    if (!support_.interiors_disjoint(c.region)) {
      throw Error(ErrorCode::kValidation, "window components overlap");
    }
    support_ = support_.unite(c.region);
  }
  derive_faces();
}

const Region* Window::colour_region(int colour) const {
  for (const auto& c : components_) {
    if (c.colour == colour) return &c.region;
  }
  return nullptr;
}

std::vector<int> Window::colours() const {
  std::vector<int> out;
  for (const auto& c : components_) out.push_back(c.colour);
  return out;
}

void Window::derive_faces() {
  if (dim() == 1) {
    for (const auto& c : components_) {
      for (const auto& i : c.region.interval_list()) {
        for (const auto& e : {i.lo, i.hi}) {
          SupportPlane h{FieldVector{FieldScalar(1)}, e};
          if (std::find(hyperplanes_.begin(), hyperplanes_.end(), h) == hyperplanes_.end()) {
            hyperplanes_.push_back(h);
            vertices_.push_back({e});
          }
        }
      }
    }
    return;
  }
  struct Incidence {
    FieldVector point;
    std::vector<FieldVector> directions;
  };
  std::vector<Incidence> incidences;
  auto note = [&](const FieldVector& p, const FieldVector& dir) {
    auto it = std::find_if(incidences.begin(), incidences.end(), [&](const Incidence& x) { return x.point == p; });
    if (it == incidences.end()) {
      incidences.push_back({p, {}});
      it = incidences.end() - 1;
    }
    if (std::find(it->directions.begin(), it->directions.end(), dir) == it->directions.end()) {
      it->directions.push_back(dir);
    }
  };
  for (const auto& c : components_) {
    for (const auto& s : c.region.boundary_segments()) {
      FieldVector e = s.b - s.a;
      FieldVector dir = canonical_direction(e);
      FieldVector normal = canonical_direction(FieldVector{e[1], -e[0]});
      SupportPlane h{normal, dot(normal, s.a)};
      if (std::find(hyperplanes_.begin(), hyperplanes_.end(), h) == hyperplanes_.end()) hyperplanes_.push_back(h);
      if (std::find(subspaces_.begin(), subspaces_.end(), dir) == subspaces_.end()) subspaces_.push_back(dir);
      note(s.a, dir);
      note(s.b, dir);
    }
  }
  for (const auto& inc : incidences) {
    if (inc.directions.size() >= 2) vertices_.push_back(inc.point);
  }
}

Window Window::translate(const FieldVector& v) const {
  std::vector<WindowComponent> out;
  for (const auto& c : components_) out.push_back({c.colour, c.region.translate(v)});
  return Window(std::move(out));
}

Window Window::linear_image(const FieldMatrix& t) const {
  std::vector<WindowComponent> out;
  for (const auto& c : components_) out.push_back({c.colour, c.region.linear_image(t)});
  return Window(std::move(out));
}

Region acceptance_domain(const Scheme& scheme, const Window& window, const Indicator& ind) {
  const Region* base = window.colour_region(ind.centre_colour);
  if (base == nullptr) return Region(window.dim());
  Region r = *base;
  for (const auto& g : ind.in) {
    const Region* w = window.colour_region(g.colour);
    if (w == nullptr) return Region(window.dim());
    r = r.intersect(w->translate(-scheme.star(g.vector)));
    if (r.is_empty()) return r;
  }
  for (const auto& g : ind.out) {
    const Region* w = window.colour_region(g.colour);
    if (w == nullptr) continue;
    r = r.subtract(w->translate(-scheme.star(g.vector)));
    if (r.is_empty()) return r;
  }
  return r;
}

std::vector<IntVector> cylinder_vectors(const Scheme& scheme, const Window& window, const FieldScalar& r) {
  auto [lo, hi] = window.support().bounds();
  auto all = enumerate_lattice(scheme, r, lo - hi, hi - lo);
  std::erase_if(all, [](const IntVector& g) { return std::all_of(g.begin(), g.end(), [](auto x) { return x == 0; }); });
  return all;
}

std::vector<AcceptanceCell> acceptance_partition(const Scheme& scheme, const Window& window,
                                                 const FieldScalar& r, std::size_t max_cutters) {
  auto vectors = cylinder_vectors(scheme, window, r);
  std::vector<AcceptanceCell> out;
  for (const auto& centre : window.components()) {
    std::vector<Region> cutters;
    std::vector<ColouredVector> labels;
    for (const auto& g : vectors) {
      FieldVector s = scheme.star(g);
      for (const auto& c : window.components()) {
        Region cut = c.region.translate(-s);
        if (cut.interiors_disjoint(centre.region)) continue;
        cutters.push_back(std::move(cut));
        labels.push_back({g, c.colour});
      }
    }
    for (auto& cell : arrangement_cells(centre.region, cutters, max_cutters)) {
      AcceptanceCell ac{centre.colour, std::move(cell.region), {}};
      ac.patch.push_back({IntVector(static_cast<std::size_t>(scheme.k()), 0), centre.colour});
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (cell.inside[i]) ac.patch.push_back(labels[i]);
      }
      std::sort(ac.patch.begin(), ac.patch.end(), [](const ColouredVector& a, const ColouredVector& b) {
        return std::tie(a.vector, a.colour) < std::tie(b.vector, b.colour);
      });
      out.push_back(std::move(ac));
    }
  }
  return out;
}

FdResult fd_check(const Scheme& scheme, const Window& window) {
  FdResult res;
  const auto& subs = window.subspaces();
  if (window.dim() == 1 || subs.empty()) {
    res.invariant = true;
    res.order = 1;
    return res;
  }
  std::vector<std::size_t> perm(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    FieldVector image = canonical_direction(scheme.A() * subs[i]);
    auto it = std::find(subs.begin(), subs.end(), image);
    if (it == subs.end()) {
      res.witness = subs[i];
      return res;
    }
    perm[i] = static_cast<std::size_t>(it - subs.begin());
  }
  std::uint64_t order = 1;
  std::vector<bool> seen(subs.size(), false);
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    order = std::lcm(order, len);
  }
  res.invariant = true;
  res.order = order;
  return res;
}

std::optional<Integer> lift_denominator(const Scheme& scheme, const FieldVector& x) {
  auto q = scheme.rational_lift(x);
  if (!q) return std::nullopt;
  Integer n = 1;
  for (const auto& c : *q) mpz_lcm(n.get_mpz_t(), n.get_mpz_t(), c.get_den_mpz_t());
  return n;
}

RationalityResult rationality_check(const Scheme& scheme, const Window& window) {
  RationalityResult res;
  const auto& v = window.vertices();
  res.rational = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    auto n = lift_denominator(scheme, v[i] - v[0]);
    if (!n) {
      res.rational = false;
      res.witness = std::pair{v[0], v[i]};
      return res;
    }
    mpz_lcm(res.denominator.get_mpz_t(), res.denominator.get_mpz_t(), n->get_mpz_t());
  }
  return res;
}

}  // namespace cps
