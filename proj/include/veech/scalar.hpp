#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace veech {

using Rational = mpq_class;

struct FieldMismatch : std::runtime_error {
  explicit FieldMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Element a + b*sqrt(d) of Q(sqrt(d)), d square-free >= 1. d == 1 means plain
// rational (b is folded into a on normalization). Values from different
// quadratic fields never mix: ops throw FieldMismatch unless one operand is
// rational.
class Scalar {
 public:
  Scalar() : a_(0), b_(0), d_(1) {}
  Scalar(long v) : a_(v), b_(0), d_(1) {}  // NOLINT: implicit by design
  Scalar(const Rational& v) : a_(v), b_(0), d_(1) {}
  Scalar(Rational a, Rational b, long d);

  static Scalar sqrtD(long d) { return Scalar(0, 1, d); }

  const Rational& ratPart() const { return a_; }
  const Rational& quadPart() const { return b_; }
  long fieldD() const { return d_; }
  bool isRational() const { return b_ == 0; }

  Scalar operator-() const { return Scalar(-a_, -b_, d_); }
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  Scalar inverse() const;
  Scalar conjugate() const { return Scalar(a_, -b_, d_); }
  // a^2 - b^2 d, the field norm (rational).
  Rational fieldNorm() const;

  bool isZero() const { return a_ == 0 && b_ == 0; }
  // Sign of the real embedding with sqrt(d) > 0.
  int sign() const;

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  bool operator<(const Scalar& o) const { return (*this - o).sign() < 0; }
  bool operator>(const Scalar& o) const { return o < *this; }
  bool operator<=(const Scalar& o) const { return !(o < *this); }
  bool operator>=(const Scalar& o) const { return !(*this < o); }

  // Exact square root inside the field, if one exists. `ambientD` supplies
  // the surrounding field when the value itself is rational.
  std::optional<Scalar> sqrtInField(long ambientD = 1) const;

  double approx() const;

  // Canonical text form: "p/q", "r/s*w", or "p/q+r/s*w" ("-" folded in).
  std::string str() const;
  // Parses the syntax above; "w" denotes sqrt(d). d == 1 folds w into 1.
  static Scalar parse(const std::string& text, long d);

  static void checkSquareFree(long d);

 private:
  Rational a_, b_;
  long d_;

  static long joinField(const Scalar& x, const Scalar& y);
};

std::optional<Rational> ratSqrt(const Rational& v);

}  // namespace veech
