#include "cps/lattice.hpp"

#include <cmath>

#include "cps/error.hpp"

namespace cps {

std::pair<IntVector, IntVector> lattice_search_box(const Scheme& scheme, const FieldScalar& radius,
                                                   const FieldVector& lo, const FieldVector& hi) {
  const int k = scheme.k();
  const int n = scheme.n();
  if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "internal box has wrong dimension");
  }
  IntVector bmin(static_cast<std::size_t>(k));
  IntVector bmax(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    // g_i = P_i + X_i with |P_i| <= |P| <= radius and X_i linear in star(g).
    FieldScalar xmin = -radius;
    FieldScalar xmax = radius;
    for (int j = 0; j < n; ++j) {
      const FieldScalar& b = scheme.int_basis()[j][i];
      FieldScalar u = b * lo[j];
      FieldScalar v = b * hi[j];
      if (u > v) std::swap(u, v);
      xmin += u;
      xmax += v;
    }
    Integer fl = xmin.floor();
    Integer cl = -((-xmax).floor());
    if (!fl.fits_slong_p() || !cl.fits_slong_p() || cl - fl > 100000000) {
      throw Error(ErrorCode::kBoundExceeded, "lattice search box too large");
    }
    bmin[i] = fl.get_si();
    bmax[i] = cl.get_si();
  }
  return {bmin, bmax};
}

std::vector<IntVector> enumerate_lattice(const Scheme& scheme, const FieldScalar& radius,
                                         const FieldVector& lo, const FieldVector& hi) {
  auto [bmin, bmax] = lattice_search_box(scheme, radius, lo, hi);
  const int k = scheme.k();
  const int n = scheme.n();
  const int d = scheme.d();
  const auto& pi = scheme.proj_int();
  const auto& pp = scheme.proj_phys();
  std::vector<std::vector<double>> fi(n, std::vector<double>(k));
  std::vector<std::vector<double>> fp(d, std::vector<double>(k));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < k; ++c) fi[r][c] = pi(r, c).to_double();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < k; ++c) fp[r][c] = pp(r, c).to_double();
  std::vector<double> flo(n);
  std::vector<double> fhi(n);
  for (int j = 0; j < n; ++j) {
    double span = std::abs(hi[j].to_double() - lo[j].to_double());
    double margin = 1e-7 * (1.0 + span);
    flo[j] = lo[j].to_double() - margin;
    fhi[j] = hi[j].to_double() + margin;
  }
  const double frad = radius.to_double() * (1 + 1e-9) + 1e-7;
  const FieldScalar rad2 = radius * radius;

  std::vector<IntVector> out;
  IntVector g = bmin;
  std::vector<double> x(n);
  std::vector<double> p(d);
  for (;;) {
    bool keep = true;
    for (int r = 0; r < n && keep; ++r) {
      double s = 0;
      for (int c = 0; c < k; ++c) s += fi[r][c] * static_cast<double>(g[c]);
      keep = s >= flo[r] && s <= fhi[r];
    }
    if (keep) {
      for (int r = 0; r < d; ++r) {
        double s = 0;
        for (int c = 0; c < k; ++c) s += fp[r][c] * static_cast<double>(g[c]);
        p[r] = s;
      }
      keep = scheme.phys_norm_approx(p) <= frad;
    }
    if (keep) {
      FieldVector star = scheme.star(g);
      bool inside = true;
      for (int j = 0; j < n && inside; ++j) inside = star[j] >= lo[j] && star[j] <= hi[j];
      if (inside && scheme.phys_norm2(scheme.project_phys(g)) <= rad2) out.push_back(g);
    }
    int i = k - 1;
    while (i >= 0 && g[i] == bmax[i]) {
      g[i] = bmin[i];
      --i;
    }
    if (i < 0) break;
    ++g[i];
  }
  return out;
}

}  // namespace cps
