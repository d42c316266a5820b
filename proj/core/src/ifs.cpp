#include "cps/ifs.hpp"

#include <cmath>
#include <map>
#include <set>

#include "cps/error.hpp"

namespace cps {

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::kInside: return "inside";
    case Membership::kOutside: return "outside";
    case Membership::kUndetermined: return "undetermined";
  }
  return "?";
}

namespace {

struct RationalVectorLess {
  bool operator()(const RationalVector& a, const RationalVector& b) const {
    for (std::size_t i = 0; i < a.size(); ++i) {
      int c = cmp(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return false;
  }
};

FieldScalar sup_norm(const FieldVector& x) {
  FieldScalar m;
  for (const auto& c : x) {
    FieldScalar a = c.abs();
    if (a > m) m = a;
  }
  return m;
}

RationalVector step(const IntMatrix& m_inv, const RationalVector& q, const IntVector& z) {
  RationalVector out(q.size());
  for (std::size_t r = 0; r < q.size(); ++r) {
    Rational s = 0;
    for (std::size_t c = 0; c < q.size(); ++c) {
      if (m_inv(r, c) != 0) s += Rational(static_cast<long>(m_inv(r, c))) * (q[c] - static_cast<long>(z[c]));
    }
    out[r] = s;
  }
  return out;
}

}  // namespace

IfsWindow::IfsWindow(Scheme scheme, std::vector<IntVector> z, std::optional<Region> seed_core)
    : scheme_(std::move(scheme)), z_(std::move(z)), core_(std::move(seed_core)) {
  if (z_.empty()) throw Error(ErrorCode::kInvalidIfs, "empty translation set");
  for (const auto& v : z_) {
    if (static_cast<int>(v.size()) != scheme_.k()) throw Error(ErrorCode::kDimensionMismatch, "translation has wrong size");
  }
  const auto& a = scheme_.A();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    FieldScalar row;
    for (std::size_t c = 0; c < a.cols(); ++c) row += a(r, c).abs();
    if (row > norm_a_) norm_a_ = row;
  }
  if (norm_a_ >= FieldScalar(1)) throw Error(ErrorCode::kInvalidIfs, "A is not a sup-norm contraction");
  FieldScalar zmax;
  for (const auto& v : z_) {
    FieldScalar s = sup_norm(scheme_.star(v));
    if (s > zmax) zmax = s;
  }
  r0_ = zmax / (FieldScalar(1) - norm_a_);
  if (core_) {
    if (core_->dim() != scheme_.n()) throw Error(ErrorCode::kDimensionMismatch, "seed core has wrong dimension");
    Region cover(core_->dim());
    Region image = core_->linear_image(a);
    for (const auto& v : z_) cover = cover.unite(image.translate(scheme_.star(v)));
    if (!core_->subset_of(cover)) throw Error(ErrorCode::kInvalidIfs, "contracted copies do not cover the seed core");
  }
}

bool IfsWindow::in_box(const FieldVector& x) const { return sup_norm(x) <= r0_; }

Membership IfsWindow::member(const FieldVector& x, const IfsLimits& limits) const {
  if (!in_box(x)) return Membership::kOutside;
  auto q = scheme_.rational_lift(x);
  if (!q) throw Error(ErrorCode::kUnsupported, "point is not in the rational span of the internal lattice");
  return member_rational(*q, limits);
}

Membership IfsWindow::member_lattice(const IntVector& g, const IfsLimits& limits) const {
  if (!in_box(scheme_.star(g))) return Membership::kOutside;
  RationalVector q;
  for (auto v : g) q.emplace_back(static_cast<long>(v));
  return member_rational(q, limits);
}

Membership IfsWindow::member_rational(const RationalVector& q0, const IfsLimits& limits) const {
  enum Status : unsigned char { kOnStack, kDead, kUndetermined };
  std::map<RationalVector, std::size_t, RationalVectorLess> ids;
  std::vector<RationalVector> states;
  std::vector<Status> status;
  auto intern = [&](RationalVector q) -> std::pair<std::size_t, bool> {
    auto [it, fresh] = ids.emplace(std::move(q), states.size());
    if (fresh) {
      states.push_back(it->first);
      status.push_back(kOnStack);
    }
    return {it->second, fresh};
  };
  auto core_hit = [&](const RationalVector& q) {
    return core_ && core_->locate(scheme_.star(q)) != Location::kOutside;
  };
  if (core_hit(q0)) return Membership::kInside;

  struct Frame {
    std::size_t id;
    std::size_t next;
    bool undetermined;
  };
  const IntMatrix& m_inv = scheme_.matrix_inverse();
  std::vector<Frame> stack{{intern(q0).first, 0, false}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next == z_.size()) {
      bool undetermined = f.undetermined;
      status[f.id] = undetermined ? kUndetermined : kDead;
      stack.pop_back();
      if (!stack.empty() && undetermined) stack.back().undetermined = true;
      if (stack.empty()) return undetermined ? Membership::kUndetermined : Membership::kOutside;
      continue;
    }
    RationalVector child = step(m_inv, states[f.id], z_[f.next++]);
    if (!in_box(scheme_.star(child))) continue;
    if (core_hit(child)) return Membership::kInside;
    auto found = ids.find(child);
    if (found != ids.end()) {
      Status s = status[found->second];
      // Any state still on the stack closes a cycle through the root path.
      if (s == kOnStack) return Membership::kInside;
      if (s == kUndetermined) f.undetermined = true;
      continue;
    }
    if (stack.size() >= limits.max_depth || states.size() >= limits.max_states) {
      f.undetermined = true;
      continue;
    }
    std::size_t id = intern(std::move(child)).first;
    stack.push_back({id, 0, false});
  }
  return Membership::kOutside;
}

bool IfsWindow::in_approximant(const FieldVector& x, unsigned depth) const {
  if (!in_box(x)) return false;
  auto q = scheme_.rational_lift(x);
  if (!q) throw Error(ErrorCode::kUnsupported, "point is not in the rational span of the internal lattice");
  const IntMatrix& m_inv = scheme_.matrix_inverse();
  std::set<std::pair<RationalVector, unsigned>, decltype([](const auto& a, const auto& b) {
             if (a.second != b.second) return a.second < b.second;
             return RationalVectorLess{}(a.first, b.first);
           })>
      failed;
  auto rec = [&](auto&& self, const RationalVector& s, unsigned left) -> bool {
    if (left == 0) return true;
    if (failed.contains({s, left})) return false;
    for (const auto& z : z_) {
      RationalVector child = step(m_inv, s, z);
      if (!in_box(scheme_.star(child))) continue;
      if (self(self, child, left - 1)) return true;
    }
    failed.insert({s, left});
    return false;
  };
  return rec(rec, *q, depth);
}

std::vector<std::vector<std::array<double, 2>>> IfsWindow::render(unsigned depth, std::size_t cap) const {
  while (depth > 0 && std::pow(static_cast<double>(z_.size()), depth) > static_cast<double>(cap)) --depth;
  const int n = scheme_.n();
  const double r = r0_.to_double();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = scheme_.A()(i, j).to_double();
  std::vector<std::vector<double>> zs;
  for (const auto& z : z_) zs.push_back(scheme_.star_approx(z));
  using Poly = std::vector<std::array<double, 2>>;
  std::vector<Poly> cur;
  if (n == 1) {
    cur.push_back({{-r, 0.0}, {r, 0.0}});
  } else {
    cur.push_back({{-r, -r}, {r, -r}, {r, r}, {-r, r}});
  }
  for (unsigned level = 0; level < depth; ++level) {
    std::vector<Poly> next;
    next.reserve(cur.size() * zs.size());
    for (const auto& p : cur) {
      for (const auto& z : zs) {
        Poly q;
        for (const auto& v : p) {
          if (n == 1) {
            q.push_back({a[0][0] * v[0] + z[0], 0.0});
          } else {
            q.push_back({a[0][0] * v[0] + a[0][1] * v[1] + z[0], a[1][0] * v[0] + a[1][1] * v[1] + z[1]});
          }
        }
        next.push_back(std::move(q));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace cps
