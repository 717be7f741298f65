#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"
#include "veech/linalg.hpp"
#include "veech/scalar.hpp"

using namespace veech;
using veech::testing::m2i;

TEST_CASE("scalar arithmetic in Q") {
  Scalar a = Scalar::parse("3/4", 1);
  Scalar b = Scalar::parse("-1/6", 1);
  CHECK((a + b).str() == "7/12");
  CHECK((a * b).str() == "-1/8");
  CHECK((a / b).str() == "-9/2");
  CHECK(a > b);
  CHECK((a - a).isZero());
}

TEST_CASE("scalar arithmetic in Q(sqrt 2)") {
  Scalar w = Scalar::sqrtD(2);
  Scalar v = Scalar(1) + w;        // 1 + sqrt2
  CHECK((w * w).str() == "2");
  CHECK((v * v).str() == "3+2*w");
  CHECK((Scalar(1) / v).str() == "-1+w");  // 1/(1+sqrt2) = sqrt2 - 1
  CHECK(v.sign() == 1);
  CHECK((Scalar(1) - w).sign() == -1);
  CHECK((Scalar(3) - Scalar(2) * w).sign() > 0);   // 3 > 2*1.414...
  CHECK((Scalar(7) - Scalar(5) * w).sign() < 0);   // 7 < 5*1.414...
}

TEST_CASE("scalar parse and canonical printing round-trip") {
  for (const char* text : {"0", "5", "-7/3", "w", "-w", "1/2*w", "3+1/2*w", "1/3-2/5*w"}) {
    Scalar s = Scalar::parse(text, 5);
    CHECK(Scalar::parse(s.str(), 5) == s);
  }
  CHECK(Scalar::parse("2 + 1/2 * w", 3).str() == "2+1/2*w");
  CHECK(Scalar::parse("w", 1).str() == "1");  // d = 1 folds w
  CHECK_THROWS_AS(Scalar::parse("1+w+w", 2), ParseError);
  CHECK_THROWS_AS(Scalar::parse("zebra", 2), ParseError);
  CHECK_THROWS_AS(Scalar::checkSquareFree(8), ParseError);
}

TEST_CASE("mixed fields are rejected") {
  Scalar a = Scalar::sqrtD(2), b = Scalar::sqrtD(3);
  CHECK_THROWS_AS(a + b, FieldMismatch);
  CHECK((a + Scalar(1)).fieldD() == 2);  // rationals join any field
}

TEST_CASE("exact square roots in the field") {
  CHECK(Scalar(Rational(9, 4)).sqrtInField()->str() == "3/2");
  CHECK(!Scalar(2).sqrtInField().has_value());
  Scalar w = Scalar::sqrtD(2);
  CHECK(Scalar(2).sqrtInField(2)->str() == "w");
  // (1+sqrt2)^2 = 3+2sqrt2
  CHECK((Scalar(3) + Scalar(2) * w).sqrtInField()->str() == "1+w");
  CHECK(!(Scalar(1) + w).sqrtInField().has_value());
}

TEST_CASE("applyTA follows the paper's planar action") {
  Vec2 p(Scalar(3), Scalar(5));
  CHECK(applyTA(Mat2::identity(), p) == p);
  Mat2 t = m2i(1, 1, 0, 1);
  CHECK(applyTA(t, Vec2(Scalar(1), Scalar(0))) == Vec2(Scalar(1), Scalar(1)));
  // T fixes the vertical direction under this convention.
  CHECK(applyTA(t, Vec2(Scalar(0), Scalar(1))) == Vec2(Scalar(0), Scalar(1)));
}

TEST_CASE("directionImage and canonical representatives") {
  Direction h(Scalar(1), Scalar(0)), v(Scalar(0), Scalar(1));
  CHECK(directionImage(Mat2::identity(), h) == h);
  CHECK(directionImage(m2i(1, 1, 0, 1), h) == Direction(Scalar(1), Scalar(1)));
  CHECK(directionImage(m2i(0, -1, 1, 0), h) == v);  // rotation, projectively
  CHECK(Direction(Scalar(-2), Scalar(4)) == Direction(Scalar(1), Scalar(-2)));
}

TEST_CASE("rhoSq matches the worked values") {
  Direction h(Scalar(1), Scalar(0)), v(Scalar(0), Scalar(1));
  CHECK(rhoSq(Mat2::identity(), h, v) == Scalar(1));
  CHECK(rhoSq(m2i(1, 1, 0, 1), h, v) == Scalar(Rational(1, 2)));
  CHECK(rhoSq(m2i(0, -1, 1, 0), h, v) == Scalar(1));
}

TEST_CASE("rhoSq invariants") {
  veech::testing::Rng rng(20240811);
  Direction h(Scalar(1), Scalar(0)), v(Scalar(0), Scalar(1));
  for (int iter = 0; iter < 200; ++iter) {
    auto rnd = [&] {
      while (true) {
        Mat2 m(Scalar(veech::testing::randInt(rng, -3, 3)),
               Scalar(veech::testing::randInt(rng, -3, 3)),
               Scalar(veech::testing::randInt(rng, -3, 3)),
               Scalar(veech::testing::randInt(rng, -3, 3)));
        if (m.invertible()) return m;
      }
    };
    Mat2 a = rnd(), b = rnd();
    Direction th1(Scalar(veech::testing::randInt(rng, -2, 2)), Scalar(1));
    Direction th2 = h;
    if (th1 == th2) th2 = v;
    // Composition law forced by T_{AB} = T_B o T_A.
    CHECK(rhoSq(a * b, th1, th2) ==
          rhoSq(b, directionImage(a, th1), directionImage(a, th2)) * rhoSq(a, th1, th2));
    // PSL well-definedness.
    CHECK(rhoSq(-a, th1, th2) == rhoSq(a, th1, th2));
    // Direction round-trip.
    CHECK(directionImage(a, directionImage(a.inverse(), th1)) == th1);
    // sin^2 is representative-invariant.
    Scalar s = sinSq(th1, th2);
    Direction th1b(th1.rep().x * Scalar(-3), th1.rep().y * Scalar(-3));
    CHECK(sinSq(th1b, th2) == s);
  }
}

TEST_CASE("matrix parsing") {
  Mat2 m = Mat2::parse("1,1+w;0,1", 2);
  CHECK(m.b == Scalar(1) + Scalar::sqrtD(2));
  CHECK_THROWS_AS(Mat2::parse("1,0;0,0", 1), ParseError);
  CHECK_THROWS_AS(Mat2::parse("1,0,0,1", 1), ParseError);
  CHECK(m2i(2, 3, 1, 2).inverse() == m2i(2, -3, -1, 2));
  CHECK(m2i(0, -1, 1, 0).pslEquals(m2i(0, 1, -1, 0)));
}
