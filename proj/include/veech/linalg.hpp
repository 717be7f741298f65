#pragma once

#include <string>

#include "veech/scalar.hpp"

namespace veech {

struct Vec2 {
  Scalar x, y;

  Vec2() = default;
  Vec2(Scalar px, Scalar py) : x(std::move(px)), y(std::move(py)) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(const Scalar& s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Vec2& o) const { return !(*this == o); }
  bool isZero() const { return x.isZero() && y.isZero(); }

  Scalar norm2() const { return x * x + y * y; }
};

inline Scalar cross(const Vec2& u, const Vec2& v) { return u.x * v.y - u.y * v.x; }
inline Scalar dot(const Vec2& u, const Vec2& v) { return u.x * v.x + u.y * v.y; }

// Total order for map keys (value order on x, then y).
struct Vec2Less {
  bool operator()(const Vec2& a, const Vec2& b) const {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

// 2x2 matrix [[a,b],[c,d]] over the field. A and -A denote the same PSL
// element; every operation provided here is invariant under A -> -A.
struct Mat2 {
  Scalar a, b, c, d;

  Mat2() : a(1), b(0), c(0), d(1) {}
  Mat2(Scalar pa, Scalar pb, Scalar pc, Scalar pd)
      : a(std::move(pa)), b(std::move(pb)), c(std::move(pc)), d(std::move(pd)) {}

  static Mat2 identity() { return Mat2(); }

  Scalar det() const { return a * d - b * c; }
  bool invertible() const { return !det().isZero(); }
  Mat2 inverse() const;
  Mat2 operator*(const Mat2& o) const;  // ordinary matrix product
  Mat2 operator-() const { return Mat2(-a, -b, -c, -d); }
  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }

  // Equality in PSL(2): A == B or A == -B.
  bool pslEquals(const Mat2& o) const;

  // "a,b;c,d" with Scalar entries.
  static Mat2 parse(const std::string& text, long fieldD);
  std::string str() const;
};

// The paper's planar action: zeta = xi + i*eta  ->  (a xi + c eta) + i(b xi + d eta).
// Note this is v -> A^T v, not the usual column action; T fixes the vertical
// direction and shears the horizontal one.
Vec2 applyTA(const Mat2& A, const Vec2& p);

// Nonzero planar vector up to nonzero scale (sign included). Canonical
// representative: first nonzero coordinate equals 1.
class Direction {
 public:
  Direction(const Vec2& v);  // NOLINT: implicit from vector is convenient
  Direction(Scalar u, Scalar v) : Direction(Vec2(std::move(u), std::move(v))) {}

  const Vec2& rep() const { return rep_; }
  bool operator==(const Direction& o) const { return rep_ == o.rep_; }
  bool operator!=(const Direction& o) const { return !(*this == o); }

  std::string str() const;

 private:
  Vec2 rep_;
};

Direction directionImage(const Mat2& A, const Direction& th);

// rho^2 for Lemma "paral": squared ratio |T_A(u2)|/|T_A(u1)| with unit-free
// normalization; stays in the field and is PSL well-defined.
Scalar rhoSq(const Mat2& A, const Direction& th1, const Direction& th2);

// cross(u1,u2)^2 / (|u1|^2 |u2|^2), representative-invariant.
Scalar sinSq(const Direction& th1, const Direction& th2);

}  // namespace veech
