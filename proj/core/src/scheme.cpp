#include "cps/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cps/error.hpp"

namespace cps {

// ------------------------------------------------------- continued fractions

ContinuedFraction cf_expand(const FieldScalar& alpha) {
  if (alpha.is_rational()) {
    throw Error(ErrorCode::kNotQuadraticIrrational, alpha.to_string() + " is rational");
  }
  constexpr std::size_t kMaxTerms = 100000;
  std::map<std::string, std::size_t> seen;
  std::vector<Integer> terms;
  FieldScalar x = alpha;
  for (std::size_t step = 0; step < kMaxTerms; ++step) {
    auto [it, fresh] = seen.emplace(x.to_string(), step);
    if (!fresh) {
      const auto j = static_cast<std::ptrdiff_t>(it->second);
      ContinuedFraction cf;
      cf.preperiod.assign(terms.begin(), terms.begin() + j);
      cf.period.assign(terms.begin() + j, terms.end());
      return cf;
    }
    Integer f = x.floor();
    terms.push_back(f);
    x = FieldScalar(1) / (x - FieldScalar(Rational(f)));
  }
  throw Error(ErrorCode::kBoundExceeded, "continued fraction period not found");
}

namespace {

void validate_cf(const ContinuedFraction& cf) {
  if (cf.period.empty()) throw Error(ErrorCode::kValidation, "continued fraction period is empty");
  for (std::size_t i = 0; i < cf.preperiod.size(); ++i) {
    if (i > 0 && cf.preperiod[i] <= 0) {
      throw Error(ErrorCode::kValidation, "partial quotients after the first must be positive");
    }
  }
  for (const auto& a : cf.period) {
    if (a <= 0 && !(cf.preperiod.empty() && &a == &cf.period.front() && cf.period.size() > 1)) {
      throw Error(ErrorCode::kValidation, "periodic partial quotients must be positive");
    }
  }
  if (cf.preperiod.empty() && cf.period.front() <= 0) {
    throw Error(ErrorCode::kValidation, "periodic partial quotients must be positive");
  }
}

FieldScalar sqrt_of(const Integer& n) {
  Integer f = squarefree_part(n);
  Integer q = n / f;
  Integer root;
  mpz_sqrt(root.get_mpz_t(), q.get_mpz_t());
  if (f == 1) return FieldScalar(Rational(root));
  return FieldScalar(0, Rational(root), f.get_si());
}

}  // namespace

FieldScalar cf_value(const ContinuedFraction& cf) {
  validate_cf(cf);
  // Periodic tail beta = [a0; ..., an, beta] solves q beta^2 + (q' - p) beta - p' = 0.
  Integer p = 1, pp = 0, q = 0, qp = 1;
  for (const auto& a : cf.period) {
    Integer np = a * p + pp;
    Integer nq = a * q + qp;
    pp = p;
    qp = q;
    p = np;
    q = nq;
  }
  // Now [[p, pp], [q, qp]] is the product of [[a,1],[1,0]] over the period.
  Integer disc = (qp - p) * (qp - p) + 4 * q * pp;
  FieldScalar root = sqrt_of(disc);
  FieldScalar beta = (FieldScalar(Rational(p - qp)) + root) / FieldScalar(Rational(2 * q));
  FieldScalar x = beta;
  for (auto it = cf.preperiod.rbegin(); it != cf.preperiod.rend(); ++it) {
    x = FieldScalar(Rational(*it)) + FieldScalar(1) / x;
  }
  return x;
}

std::vector<Integer> cf_terms(const ContinuedFraction& cf, std::size_t count) {
  std::vector<Integer> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (i < cf.preperiod.size()) {
      out.push_back(cf.preperiod[i]);
    } else {
      out.push_back(cf.period[(i - cf.preperiod.size()) % cf.period.size()]);
    }
  }
  return out;
}

SlopeMatrix cf_to_matrix(const ContinuedFraction& cf) {
  validate_cf(cf);
  FieldScalar alpha = cf_value(cf);

  // Split off the integer part: T (1, alpha) = (1, alpha - c0).
  Integer c0;
  std::vector<Integer> pre;
  std::vector<Integer> per = cf.period;
  if (!cf.preperiod.empty()) {
    c0 = cf.preperiod.front();
    pre.assign(cf.preperiod.begin() + 1, cf.preperiod.end());
  } else {
    c0 = per.front();
    std::rotate(per.begin(), per.begin() + 1, per.end());
  }
  if (!c0.fits_slong_p()) throw Error(ErrorCode::kBoundExceeded, "integer part too large");
  const std::int64_t shift = c0.get_si();
  IntMatrix t{{1, 0}, {-shift, 1}};
  IntMatrix t_inv{{1, 0}, {shift, 1}};

  auto block = [](const Integer& a) {
    if (!a.fits_slong_p()) throw Error(ErrorCode::kBoundExceeded, "partial quotient too large");
    return IntMatrix{{a.get_si(), 1}, {1, 0}};
  };
  IntMatrix p = IntMatrix::identity(2);
  for (const auto& c : pre) p = p * block(c);
  IntMatrix core = IntMatrix::identity(2);
  for (const auto& a : per) core = core * block(a);

  IntMatrix m = t_inv * (p * core * p.inverse()) * t;
  FieldScalar lambda = FieldScalar(static_cast<long>(m(0, 0))) + FieldScalar(static_cast<long>(m(0, 1))) * alpha;
  if (lambda.abs() < FieldScalar(1)) {
    m = m.inverse();
    lambda = FieldScalar(1) / lambda;
  }
  return SlopeMatrix{m, t, alpha, lambda};
}

// --------------------------------------------------------------- factoring

namespace {

using Poly = std::vector<Integer>;  // c_0..c_k

Integer eval(const Poly& p, long x) {
  Integer v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
  return v;
}

// Divides monic p by x^2 - t x + n; returns quotient if exact.
std::optional<Poly> divide_quadratic(const Poly& p, long t, long n) {
  if (p.size() < 3) return std::nullopt;
  Poly rem = p;
  const std::size_t deg = p.size() - 1;
  Poly quot(deg - 1, Integer(0));
  for (std::size_t i = deg; i >= 2; --i) {
    Integer lead = rem[i];
    quot[i - 2] = lead;
    rem[i] -= lead;
    rem[i - 1] += lead * t;
    rem[i - 2] -= lead * n;
  }
  if (sgn(rem[0]) != 0 || sgn(rem[1]) != 0) return std::nullopt;
  return quot;
}

}  // namespace

std::vector<QuadraticFactor> factor_unimodular_poly(const std::vector<Integer>& coeffs) {
  Poly p = coeffs;
  if (eval(p, 1) == 0 || eval(p, -1) == 0) {
    throw Error(ErrorCode::kNotHyperbolic, "eigenvalue +-1");
  }
  Integer bound = 1;
  for (const auto& c : p) bound = std::max(bound, Integer(abs(c) + 1));
  bound *= 2;
  if (!bound.fits_slong_p()) throw Error(ErrorCode::kUnsupportedSpectrum, "coefficients too large");
  const long b = bound.get_si();
  std::vector<QuadraticFactor> factors;
  for (long t = -b; t <= b && p.size() > 1; ++t) {
    for (long n : {-1L, 1L}) {
      while (auto q = divide_quadratic(p, t, n)) {
        p = *q;
        if (!factors.empty() && factors.back().trace == t && factors.back().norm == n) {
          ++factors.back().multiplicity;
        } else {
          factors.push_back({t, n, 1});
        }
      }
    }
  }
  if (p.size() != 1) {
    throw Error(ErrorCode::kUnsupportedSpectrum, "characteristic polynomial has non-quadratic factors");
  }
  return factors;
}

// ------------------------------------------------------------------ Scheme

struct Scheme::Data {
  int k = 0;
  int d = 0;
  int n = 0;
  std::int64_t radicand = 0;
  std::string label;
  IntMatrix m;
  IntMatrix m_inv;
  std::vector<FieldVector> phys_basis;
  std::vector<FieldVector> int_basis;
  FieldMatrix proj_phys;
  FieldMatrix proj_int;
  FieldMatrix basis_inv;
  FieldMatrix l;
  FieldMatrix a;
  FieldMatrix gram_phys;
  FieldMatrix gram_int;
  std::vector<FieldScalar> contracting;
  std::vector<FieldScalar> expanding;
  bool block_diagonal = false;
  bool density_certified = false;
  std::vector<std::string> warnings;
  std::vector<std::vector<double>> proj_phys_d;
  std::vector<std::vector<double>> proj_int_d;
  std::vector<std::vector<double>> gram_phys_d;
};

namespace {

FieldMatrix gram(const std::vector<FieldVector>& basis) {
  FieldMatrix g(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) g(i, j) = dot(basis[i], basis[j]);
  }
  return g;
}

std::vector<std::vector<double>> approx(const FieldMatrix& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c).to_double();
  }
  return out;
}

// Rank over Q of the rational coordinates (a and b parts) of a field matrix.
std::size_t rational_rank(const FieldMatrix& m) {
  FieldMatrix split(2 * m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      split(2 * r, c) = FieldScalar(m(r, c).a());
      split(2 * r + 1, c) = FieldScalar(m(r, c).b());
    }
  }
  return split.rank();
}

bool literal_block_diagonal(const IntMatrix& m) {
  if (m.rows() != 4) return false;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      if ((r < 2) != (c < 2) && m(r, c) != 0) return false;
    }
  }
  return true;
}

}  // namespace

Scheme Scheme::build(const IntMatrix& m, std::optional<std::int64_t> radicand, std::string label) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kDimensionMismatch, "M must be square");
  if (m.rows() < 2 || m.rows() > 4) throw Error(ErrorCode::kUnsupported, "total dimension must be 2..4");
  Integer det = m.determinant();
  if (det != 1 && det != -1) {
    throw Error(ErrorCode::kNotUnimodular, "det(M) = " + det.get_str());
  }
  auto factors = factor_unimodular_poly(m.char_poly());

  auto data = std::make_shared<Data>();
  data->k = static_cast<int>(m.rows());
  data->m = m;
  data->m_inv = m.inverse();
  data->label = std::move(label);

  std::optional<std::int64_t> field = radicand;
  const FieldMatrix mf = m.to_field();
  std::vector<std::pair<FieldScalar, int>> expanding;
  std::vector<std::pair<FieldScalar, int>> contracting;
  for (const auto& f : factors) {
    Integer disc = Integer(f.trace) * f.trace - 4 * Integer(f.norm);
    if (disc <= 0) throw Error(ErrorCode::kNotHyperbolic, "eigenvalues on the unit circle");
    Integer sf = squarefree_part(disc);
    if (sf == 1) throw Error(ErrorCode::kNotHyperbolic, "rational eigenvalue");
    if (!field) field = sf.get_si();
    if (sf != *field) {
      throw Error(ErrorCode::kUnsupportedSpectrum,
                  "eigenvalues lie in Q(sqrt" + sf.get_str() + "), not Q(sqrt" + std::to_string(*field) + ")");
    }
    Integer s;
    Integer q = disc / sf;
    mpz_sqrt(s.get_mpz_t(), q.get_mpz_t());
    FieldScalar half_t(Rational(f.trace, 2));
    FieldScalar half_root(0, Rational(s, 2), sf.get_si());
    FieldScalar plus = half_t + half_root;
    FieldScalar minus = half_t - half_root;
    if (plus.abs() > FieldScalar(1)) {
      expanding.emplace_back(plus, f.multiplicity);
      contracting.emplace_back(minus, f.multiplicity);
    } else {
      expanding.emplace_back(minus, f.multiplicity);
      contracting.emplace_back(plus, f.multiplicity);
    }
  }
  data->radicand = *field;

  auto eigenspace = [&](const FieldScalar& lambda, int mult) {
    FieldMatrix shifted = mf - lambda * FieldMatrix::identity(mf.rows());
    FieldMatrix power = pow(shifted, static_cast<unsigned>(mult));
    auto basis = power.nullspace();
    if (static_cast<int>(basis.size()) != mult) {
      throw Error(ErrorCode::kInternal, "generalised eigenspace has unexpected dimension");
    }
    return basis;
  };
  for (const auto& [lambda, mult] : expanding) {
    for (auto& v : eigenspace(lambda, mult)) data->phys_basis.push_back(std::move(v));
    for (int i = 0; i < mult; ++i) data->expanding.push_back(lambda);
  }
  for (const auto& [lambda, mult] : contracting) {
    for (auto& v : eigenspace(lambda, mult)) data->int_basis.push_back(std::move(v));
    for (int i = 0; i < mult; ++i) data->contracting.push_back(lambda);
  }
  data->d = static_cast<int>(data->phys_basis.size());
  data->n = static_cast<int>(data->int_basis.size());

  std::vector<FieldVector> columns = data->phys_basis;
  columns.insert(columns.end(), data->int_basis.begin(), data->int_basis.end());
  FieldMatrix basis = FieldMatrix::from_columns(columns);
  data->basis_inv = basis.inverse();
  const auto kk = static_cast<std::size_t>(data->k);
  data->proj_phys = FieldMatrix(static_cast<std::size_t>(data->d), kk);
  data->proj_int = FieldMatrix(static_cast<std::size_t>(data->n), kk);
  for (std::size_t c = 0; c < kk; ++c) {
    for (int r = 0; r < data->d; ++r) data->proj_phys(r, c) = data->basis_inv(r, c);
    for (int r = 0; r < data->n; ++r) data->proj_int(r, c) = data->basis_inv(data->d + r, c);
  }
  data->l = data->proj_phys * mf * FieldMatrix::from_columns(data->phys_basis);
  data->a = data->proj_int * mf * FieldMatrix::from_columns(data->int_basis);
  data->gram_phys = gram(data->phys_basis);
  data->gram_int = gram(data->int_basis);

  if (rational_rank(data->proj_int) < kk) {
    throw Error(ErrorCode::kDegenerateScheme, "star map is not injective on the lattice");
  }
  if (rational_rank(data->proj_phys) < kk) {
    throw Error(ErrorCode::kDegenerateScheme, "physical projection is not injective on the lattice");
  }
  data->block_diagonal = literal_block_diagonal(m);
  // k = 2: injectivity of a rank-2 group on a line already forces density.
  // Blocks: each 2x2 hyperbolic block is injective by the test above.
  // Otherwise the quadratic factors found are irreducible by construction.
  data->density_certified = true;
  if (data->k == 4 && !data->block_diagonal && factors.size() > 1) {
    data->warnings.emplace_back("density of the internal lattice image accepted from irreducible factors");
  }

  data->proj_phys_d = approx(data->proj_phys);
  data->proj_int_d = approx(data->proj_int);
  data->gram_phys_d = approx(data->gram_phys);
  return Scheme(std::move(data));
}

Scheme Scheme::companion(const std::vector<std::int64_t>& coeffs) {
  const std::size_t k = coeffs.size();
  if (k < 2) throw Error(ErrorCode::kUnsupported, "polynomial degree must be at least 2");
  if (coeffs.front() != 1 && coeffs.front() != -1) {
    throw Error(ErrorCode::kNotUnimodular, "constant coefficient must be +-1");
  }
  IntMatrix m(k, k);
  for (std::size_t j = 0; j < k; ++j) m(0, j) = -coeffs[k - 1 - j];
  for (std::size_t i = 1; i < k; ++i) m(i, i - 1) = 1;
  Scheme s = build(m);
  if (s.n() != 1) {
    throw Error(ErrorCode::kUnsupportedSpectrum, "companion matrix does not have a single contracting direction");
  }
  return s;
}

int Scheme::k() const { return data_->k; }
int Scheme::d() const { return data_->d; }
int Scheme::n() const { return data_->n; }
std::int64_t Scheme::radicand() const { return data_->radicand; }
const std::string& Scheme::label() const { return data_->label; }
const IntMatrix& Scheme::matrix() const { return data_->m; }
const IntMatrix& Scheme::matrix_inverse() const { return data_->m_inv; }
const std::vector<FieldVector>& Scheme::phys_basis() const { return data_->phys_basis; }
const std::vector<FieldVector>& Scheme::int_basis() const { return data_->int_basis; }
const FieldMatrix& Scheme::proj_phys() const { return data_->proj_phys; }
const FieldMatrix& Scheme::proj_int() const { return data_->proj_int; }
const FieldMatrix& Scheme::L() const { return data_->l; }
const FieldMatrix& Scheme::A() const { return data_->a; }
const std::vector<FieldScalar>& Scheme::contracting_eigenvalues() const { return data_->contracting; }
const std::vector<FieldScalar>& Scheme::expanding_eigenvalues() const { return data_->expanding; }
bool Scheme::block_diagonal() const { return data_->block_diagonal; }
bool Scheme::density_certified() const { return data_->density_certified; }
const std::vector<std::string>& Scheme::warnings() const { return data_->warnings; }

FieldVector Scheme::star(const IntVector& g) const { return data_->proj_int * to_field(g); }
FieldVector Scheme::project_phys(const IntVector& g) const { return data_->proj_phys * to_field(g); }
FieldVector Scheme::star(const RationalVector& q) const { return data_->proj_int * to_field(q); }
FieldVector Scheme::project_phys(const RationalVector& q) const { return data_->proj_phys * to_field(q); }

FieldScalar Scheme::phys_norm2(const FieldVector& p) const { return dot(p, data_->gram_phys * p); }
FieldScalar Scheme::int_norm2(const FieldVector& x) const { return dot(x, data_->gram_int * x); }

namespace {

std::vector<double> apply(const std::vector<std::vector<double>>& m, const IntVector& g) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < g.size(); ++c) out[r] += m[r][c] * static_cast<double>(g[c]);
  }
  return out;
}

}  // namespace

std::vector<double> Scheme::star_approx(const IntVector& g) const { return apply(data_->proj_int_d, g); }
std::vector<double> Scheme::phys_approx(const IntVector& g) const { return apply(data_->proj_phys_d, g); }

double Scheme::phys_norm_approx(const std::vector<double>& p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) s += p[i] * data_->gram_phys_d[i][j] * p[j];
  }
  return std::sqrt(std::max(s, 0.0));
}

std::optional<RationalVector> Scheme::rational_lift(const FieldVector& x) const {
  if (static_cast<int>(x.size()) != data_->n) {
    throw Error(ErrorCode::kDimensionMismatch, "internal vector has wrong dimension");
  }
  for (const auto& c : x) {
    if (c.radicand() != 0 && c.radicand() != data_->radicand) {
      throw Error(ErrorCode::kFieldMismatch, "internal vector lies outside the scheme's field");
    }
  }
  std::vector<RationalVector> rows;
  RationalVector rhs;
  for (int r = 0; r < data_->n; ++r) {
    RationalVector ra;
    RationalVector rb;
    for (int c = 0; c < data_->k; ++c) {
      ra.push_back(data_->proj_int(r, c).a());
      rb.push_back(data_->proj_int(r, c).b());
    }
    rows.push_back(std::move(ra));
    rows.push_back(std::move(rb));
    rhs.push_back(x[r].a());
    rhs.push_back(x[r].b());
  }
  return solve_rational(std::move(rows), std::move(rhs));
}

FieldMatrix Scheme::A_pow(unsigned m) const { return pow(data_->a, m); }
FieldMatrix Scheme::L_pow(unsigned m) const { return pow(data_->l, m); }
IntMatrix Scheme::M_pow(unsigned m) const { return pow(data_->m, m); }

namespace {

std::optional<FieldMatrix> restrict_to(const FieldMatrix& basis_inv, const IntMatrix& s,
                                       const std::vector<FieldVector>& basis, int offset, int dim,
                                       int total) {
  FieldMatrix sf = s.to_field();
  FieldMatrix out(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    FieldVector image = basis_inv * (sf * basis[j]);
    for (int r = 0; r < total; ++r) {
      bool inside = r >= offset && r < offset + dim;
      if (inside) {
        out(r - offset, j) = image[r];
      } else if (!image[r].is_zero()) {
        return std::nullopt;
      }
    }
  }
  return out;
}

}  // namespace

std::optional<FieldMatrix> Scheme::restrict_phys(const IntMatrix& s) const {
  return restrict_to(data_->basis_inv, s, data_->phys_basis, 0, data_->d, data_->k);
}

std::optional<FieldMatrix> Scheme::restrict_int(const IntMatrix& s) const {
  return restrict_to(data_->basis_inv, s, data_->int_basis, data_->d, data_->n, data_->k);
}

}  // namespace cps
