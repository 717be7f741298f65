#include "veech/linalg.hpp"

#include <vector>

namespace veech {

Mat2 Mat2::inverse() const {
  Scalar dt = det();
  if (dt.isZero()) throw std::domain_error("singular matrix");
  return Mat2(d / dt, -b / dt, -c / dt, a / dt);
}

Mat2 Mat2::operator*(const Mat2& o) const {
  return Mat2(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d);
}

bool Mat2::pslEquals(const Mat2& o) const { return *this == o || *this == -o; }

Mat2 Mat2::parse(const std::string& text, long fieldD) {
  auto semi = text.find(';');
  if (semi == std::string::npos) throw ParseError("matrix needs ';' between rows: '" + text + "'");
  std::string r1 = text.substr(0, semi), r2 = text.substr(semi + 1);
  auto splitRow = [&](const std::string& row) {
    auto comma = row.find(',');
    if (comma == std::string::npos) throw ParseError("matrix row needs ',': '" + row + "'");
    return std::pair<std::string, std::string>(row.substr(0, comma), row.substr(comma + 1));
  };
  auto [sa, sb] = splitRow(r1);
  auto [sc, sd] = splitRow(r2);
  Mat2 m(Scalar::parse(sa, fieldD), Scalar::parse(sb, fieldD), Scalar::parse(sc, fieldD),
         Scalar::parse(sd, fieldD));
  if (!m.invertible()) throw ParseError("matrix is singular: '" + text + "'");
  return m;
}

std::string Mat2::str() const {
  return a.str() + "," + b.str() + ";" + c.str() + "," + d.str();
}

Vec2 applyTA(const Mat2& A, const Vec2& p) {
  return Vec2(A.a * p.x + A.c * p.y, A.b * p.x + A.d * p.y);
}

Direction::Direction(const Vec2& v) {
  if (v.isZero()) throw std::domain_error("zero vector is not a direction");
  if (!v.x.isZero()) {
    rep_ = Vec2(Scalar(1), v.y / v.x);
  } else {
    rep_ = Vec2(Scalar(0), Scalar(1));
  }
}

std::string Direction::str() const { return "(" + rep_.x.str() + "," + rep_.y.str() + ")"; }

Direction directionImage(const Mat2& A, const Direction& th) {
  if (!A.invertible()) throw std::domain_error("singular matrix acting on direction");
  return Direction(applyTA(A, th.rep()));
}

Scalar rhoSq(const Mat2& A, const Direction& th1, const Direction& th2) {
  if (th1 == th2) throw std::domain_error("rhoSq needs distinct directions");
  if (!A.invertible()) throw std::domain_error("singular matrix in rhoSq");
  const Vec2& u1 = th1.rep();
  const Vec2& u2 = th2.rep();
  Scalar num = applyTA(A, u2).norm2() * u1.norm2();
  Scalar den = u2.norm2() * applyTA(A, u1).norm2();
  return num / den;
}

Scalar sinSq(const Direction& th1, const Direction& th2) {
  const Vec2& u1 = th1.rep();
  const Vec2& u2 = th2.rep();
  Scalar c = cross(u1, u2);
  return (c * c) / (u1.norm2() * u2.norm2());
}

}  // namespace veech
