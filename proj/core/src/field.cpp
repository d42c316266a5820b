#include "cps/field.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

#include "cps/error.hpp"

namespace cps {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFieldMismatch: return "field-mismatch";
    case ErrorCode::kSingularMatrix: return "singular-matrix";
    case ErrorCode::kNotQuadraticIrrational: return "not-quadratic-irrational";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kNotUnimodular: return "not-unimodular";
    case ErrorCode::kNotHyperbolic: return "not-hyperbolic";
    case ErrorCode::kUnsupportedSpectrum: return "unsupported-spectrum";
    case ErrorCode::kDegenerateScheme: return "degenerate-scheme";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kOutOfRadius: return "out-of-radius";
    case ErrorCode::kInvalidIfs: return "invalid-ifs";
    case ErrorCode::kBoundExceeded: return "bound-exceeded";
    case ErrorCode::kCutterOverflow: return "cutter-overflow";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kNotLids: return "not-lids";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    Integer den = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    Integer num;
    if (num.set_str(digits, 10) != 0) throw Error(ErrorCode::kParse, "bad decimal '" + s + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0 || sgn(q.get_den()) == 0) {
    throw Error(ErrorCode::kParse, "bad rational '" + s + "'");
  }
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer squarefree_part(const Integer& n) {
  if (sgn(n) == 0) return 0;
  // Trial division to kLimit. A leftover cofactor below kLimit^3 with no
  // small prime factor is either a square or squarefree.
  constexpr unsigned long kLimit = 1000000;
  Integer m = abs(n);
  Integer f = 1;
  for (unsigned long p = 2; p <= kLimit && Integer(p) * p <= m; ++p) {
    int e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
      m /= p;
      ++e;
    }
    if (e % 2 == 1) f *= p;
    if (e > 0 && mpz_perfect_square_p(m.get_mpz_t()) != 0) {
      m = 1;
      break;
    }
  }
  if (m > 1 && mpz_perfect_square_p(m.get_mpz_t()) == 0) {
    if (m >= Integer(kLimit) * kLimit * kLimit) {
      throw Error(ErrorCode::kBoundExceeded, "squarefree part of a large integer");
    }
    f *= m;
  }
  return sgn(n) < 0 ? Integer(-f) : f;
}

FieldScalar::FieldScalar(Rational a, Rational b, std::int64_t radicand)
    : a_(std::move(a)), b_(std::move(b)), d_(radicand) {
  a_.canonicalize();
  b_.canonicalize();
  if (d_ < 0 || d_ == 1) throw Error(ErrorCode::kValidation, "radicand must be 0 or >= 2");
  if (d_ == 0 && sgn(b_) != 0) throw Error(ErrorCode::kValidation, "irrational part without radicand");
  if (d_ > 1 && squarefree_part(Integer(static_cast<long>(d_))) != d_) {
    throw Error(ErrorCode::kValidation, "radicand " + std::to_string(d_) + " is not squarefree");
  }
}

FieldScalar FieldScalar::sqrt(std::int64_t radicand) { return FieldScalar(0, 1, radicand); }

std::int64_t FieldScalar::join(const FieldScalar& o) const {
  if (d_ == o.d_ || o.d_ == 0) return d_;
  if (d_ == 0) return o.d_;
  throw Error(ErrorCode::kFieldMismatch,
              "sqrt" + std::to_string(d_) + " vs sqrt" + std::to_string(o.d_));
}

int FieldScalar::sign() const {
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: the larger of a^2 and b^2 D wins.
  Rational lhs = a_ * a_;
  Rational rhs = b_ * b_ * static_cast<long>(d_);
  return lhs > rhs ? sa : sb;
}

FieldScalar FieldScalar::conj() const {
  FieldScalar r = *this;
  r.b_ = -r.b_;
  return r;
}

Rational FieldScalar::norm() const { return a_ * a_ - b_ * b_ * static_cast<long>(d_); }

Integer FieldScalar::floor() const {
  if (is_rational()) return cps::floor(a_);
  auto [lo, hi] = enclose(64);
  Integer f = cps::floor(lo);
  while (*this < FieldScalar(Rational(f))) --f;
  while (!(*this < FieldScalar(Rational(f + 1)))) ++f;
  return f;
}

double FieldScalar::to_double() const {
  if (is_rational()) return a_.get_d();
  return a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(d_));
}

std::pair<Rational, Rational> FieldScalar::enclose(unsigned bits) const {
  if (is_rational()) return {a_, a_};
  Integer scaled = Integer(static_cast<long>(d_)) << (2 * bits);
  Integer root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Rational s_lo(root, Integer(1) << bits);
  Rational s_hi(root + 1, Integer(1) << bits);
  s_lo.canonicalize();
  s_hi.canonicalize();
  Rational x = a_ + b_ * s_lo;
  Rational y = a_ + b_ * s_hi;
  return x <= y ? std::pair{x, y} : std::pair{y, x};
}

FieldScalar FieldScalar::operator-() const {
  FieldScalar r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

FieldScalar& FieldScalar::operator+=(const FieldScalar& o) {
  d_ = join(o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

FieldScalar& FieldScalar::operator-=(const FieldScalar& o) {
  d_ = join(o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

FieldScalar& FieldScalar::operator*=(const FieldScalar& o) {
  std::int64_t d = join(o);
  if (o.is_rational()) {
    a_ *= o.a_;
    b_ *= o.a_;
  } else if (is_rational()) {
    b_ = a_ * o.b_;
    a_ *= o.a_;
  } else {
    Rational na = a_ * o.a_ + b_ * o.b_ * static_cast<long>(d);
    Rational nb = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(na);
    b_ = std::move(nb);
  }
  d_ = d;
  return *this;
}

FieldScalar& FieldScalar::operator/=(const FieldScalar& o) {
  std::int64_t d = join(o);
  if (o.is_zero()) throw Error(ErrorCode::kSingularMatrix, "division by zero");
  if (o.is_rational()) {
    a_ /= o.a_;
    b_ /= o.a_;
    d_ = d;
    return *this;
  }
  Rational n = o.norm();
  FieldScalar c = o.conj();
  *this *= c;
  a_ /= n;
  b_ /= n;
  return *this;
}

bool operator==(const FieldScalar& x, const FieldScalar& y) {
  x.join(y);
  return x.a_ == y.a_ && x.b_ == y.b_;
}

std::strong_ordering operator<=>(const FieldScalar& x, const FieldScalar& y) {
  int s = (x - y).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::strong_ordering field_cmp(const FieldScalar& x, const FieldScalar& y) { return x <=> y; }

std::string FieldScalar::to_string() const {
  std::ostringstream os;
  if (is_rational()) {
    os << a_.get_str();
    return os.str();
  }
  if (sgn(a_) != 0) os << a_.get_str() << (sgn(b_) > 0 ? "+" : "");
  if (b_ == 1) {
    os << "sqrt" << d_;
  } else if (b_ == -1) {
    os << "-sqrt" << d_;
  } else {
    os << b_.get_str() << "*sqrt" << d_;
  }
  return os.str();
}

namespace {

// Recursive-descent evaluator for + - * / ( ) over rationals and sqrtN.
class ScalarParser {
 public:
  ScalarParser(std::string_view text, std::int64_t radicand) : text_(text), radicand_(radicand) {}

  FieldScalar parse() {
    FieldScalar v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::kParse, "cannot parse scalar '" + std::string(text_) + "': " + why);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  FieldScalar expr() {
    FieldScalar v = term();
    for (;;) {
      if (eat('+')) {
        v += term();
      } else if (eat('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  FieldScalar term() {
    FieldScalar v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        v /= unary();
      } else {
        return v;
      }
    }
  }

  FieldScalar unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }

  FieldScalar atom() {
    skip_ws();
    if (eat('(')) {
      FieldScalar v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (text_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      std::int64_t d = 0;
      bool paren = eat('(');
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) {
        if (radicand_ == 0) fail("sqrt without radicand");
        d = radicand_;
      } else {
        d = std::stoll(std::string(text_.substr(start, pos_ - start)));
      }
      if (paren && !eat(')')) fail("missing ')'");
      Integer sf = squarefree_part(Integer(static_cast<long>(d)));
      Integer root;
      Integer quotient = Integer(static_cast<long>(d)) / sf;
      mpz_sqrt(root.get_mpz_t(), quotient.get_mpz_t());
      if (sf == 1) return FieldScalar(Rational(root));
      return FieldScalar(0, Rational(root), sf.get_si());
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (start == pos_) fail("expected number");
    return FieldScalar(parse_rational(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  std::int64_t radicand_;
  std::size_t pos_ = 0;
};

}  // namespace

FieldScalar FieldScalar::parse(std::string_view text, std::int64_t default_radicand) {
  return ScalarParser(text, default_radicand).parse();
}

std::ostream& operator<<(std::ostream& os, const FieldScalar& x) { return os << x.to_string(); }

}  // namespace cps
