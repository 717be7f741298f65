#include "veech/scalar.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace veech {

Scalar::Scalar(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  checkSquareFree(d_);
  if (d_ == 1) {
    a_ += b_;
    b_ = 0;
  }
  if (b_ == 0) d_ = 1;
  a_.canonicalize();
  b_.canonicalize();
}

void Scalar::checkSquareFree(long d) {
  if (d < 1) throw ParseError("field.d must be >= 1");
  for (long p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) throw ParseError("field.d must be square-free: " + std::to_string(d));
  }
}

long Scalar::joinField(const Scalar& x, const Scalar& y) {
  if (x.d_ == y.d_) return x.d_;
  if (x.d_ == 1) return y.d_;
  if (y.d_ == 1) return x.d_;
  throw FieldMismatch("mixed quadratic fields: sqrt(" + std::to_string(x.d_) + ") vs sqrt(" +
                      std::to_string(y.d_) + ")");
}

Scalar Scalar::operator+(const Scalar& o) const {
  return Scalar(a_ + o.a_, b_ + o.b_, joinField(*this, o));
}

Scalar Scalar::operator-(const Scalar& o) const {
  return Scalar(a_ - o.a_, b_ - o.b_, joinField(*this, o));
}

Scalar Scalar::operator*(const Scalar& o) const {
  long d = joinField(*this, o);
  return Scalar(a_ * o.a_ + b_ * o.b_ * d, a_ * o.b_ + b_ * o.a_, d);
}

Rational Scalar::fieldNorm() const { return a_ * a_ - b_ * b_ * d_; }

Scalar Scalar::inverse() const {
  if (isZero()) throw std::domain_error("division by zero Scalar");
  Rational n = fieldNorm();
  return Scalar(a_ / n, -b_ / n, d_);
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

int Scalar::sign() const {
  int sa = sgn(a_), sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 with b^2 d.
  int c = cmp(a_ * a_, b_ * b_ * d_);
  return c == 0 ? 0 : (c > 0 ? sa : sb);
}

bool Scalar::operator==(const Scalar& o) const {
  if (b_ == 0 && o.b_ == 0) return a_ == o.a_;
  return a_ == o.a_ && b_ == o.b_ && joinField(*this, o) != 0;
}

std::optional<Rational> ratSqrt(const Rational& v) {
  if (sgn(v) < 0) return std::nullopt;
  mpz_class num = v.get_num(), den = v.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return Rational(rn, rd);
}

std::optional<Scalar> Scalar::sqrtInField(long ambientD) const {
  int s = sign();
  if (s < 0) return std::nullopt;
  if (s == 0) return Scalar(0);
  if (b_ == 0) {
    if (auto r = ratSqrt(a_)) return Scalar(*r);
    long d = d_ == 1 ? ambientD : d_;
    if (d == 1) return std::nullopt;
    // Maybe sqrt(a) = y*sqrt(d) with y rational.
    if (auto y = ratSqrt(a_ / d)) return Scalar(0, *y, d);
    return std::nullopt;
  }
  // (x + y*sqrt(d))^2 = a + b*sqrt(d): x^2 + y^2 d = a, 2xy = b.
  // x^2 solves t^2 - a t + (b^2 d)/4 = 0.
  auto disc = ratSqrt(a_ * a_ - b_ * b_ * d_);
  if (!disc) return std::nullopt;
  for (int pick = 0; pick < 2; ++pick) {
    Rational t = (a_ + (pick == 0 ? *disc : -*disc)) / 2;
    if (sgn(t) < 0) continue;
    if (auto x = ratSqrt(t)) {
      if (*x == 0) continue;
      Rational y = b_ / (2 * *x);
      Scalar cand(*x, y, d_);
      if (cand * cand == *this) return cand.sign() > 0 ? cand : -cand;
    }
  }
  return std::nullopt;
}

double Scalar::approx() const { return a_.get_d() + b_.get_d() * std::sqrt(double(d_)); }

namespace {

std::string ratStr(const Rational& r) {
  std::string s = r.get_num().get_str();
  if (r.get_den() != 1) s += "/" + r.get_den().get_str();
  return s;
}

// Parses "[+-]p[/q][*w]" or "[+-]w" starting at i; advances i.
struct Term {
  Rational coeff;
  bool hasW = false;
};

Term parseTerm(const std::string& t, size_t& i) {
  Term out;
  int sign = 1;
  if (i < t.size() && (t[i] == '+' || t[i] == '-')) {
    if (t[i] == '-') sign = -1;
    ++i;
  }
  if (i < t.size() && (t[i] == 'w' || t[i] == 'W')) {
    ++i;
    out.coeff = sign;
    out.hasW = true;
    return out;
  }
  size_t start = i;
  while (i < t.size() && (std::isdigit((unsigned char)t[i]) || t[i] == '/')) ++i;
  if (i == start) throw ParseError("bad scalar literal: '" + t + "'");
  std::string body = t.substr(start, i - start);
  Rational r;
  try {
    r = Rational(body);
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational '" + body + "' in '" + t + "'");
  }
  if (r.get_den() == 0) throw ParseError("zero denominator in '" + t + "'");
  r.canonicalize();
  out.coeff = sign * r;
  if (i < t.size() && t[i] == '*') {
    ++i;
    if (i >= t.size() || (t[i] != 'w' && t[i] != 'W')) throw ParseError("expected w after * in '" + t + "'");
    ++i;
    out.hasW = true;
  }
  return out;
}

}  // namespace

std::string Scalar::str() const {
  if (b_ == 0) return ratStr(a_);
  std::string wpart = (b_ == 1 ? std::string("w") : b_ == -1 ? std::string("-w") : ratStr(b_) + "*w");
  if (a_ == 0) return wpart;
  if (sgn(b_) > 0) return ratStr(a_) + "+" + wpart;
  return ratStr(a_) + wpart;  // negative sign already leads wpart
}

Scalar Scalar::parse(const std::string& text, long d) {
  std::string t;
  for (char c : text)
    if (!std::isspace((unsigned char)c)) t += c;
  if (t.empty()) throw ParseError("empty scalar literal");
  size_t i = 0;
  Rational a = 0, b = 0;
  int terms = 0;
  while (i < t.size()) {
    if (terms == 2) throw ParseError("too many terms in scalar '" + text + "'");
    Term term = parseTerm(t, i);
    (term.hasW ? b : a) += term.coeff;
    ++terms;
    if (i < t.size() && t[i] != '+' && t[i] != '-')
      throw ParseError("trailing junk in scalar '" + text + "'");
  }
  if (b != 0 && d == 1) {
    // w with d = 1 means sqrt(1) = 1.
    a += b;
    b = 0;
  }
  return Scalar(a, b, b == 0 ? 1 : d);
}

}  // namespace veech
