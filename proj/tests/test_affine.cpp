#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

using namespace veech;
namespace vt = veech::testing;

namespace {

const Mat2 kT = vt::m2i(1, 1, 0, 1);        // paper T_A convention: fixes vertical
const Mat2 kTpaper = vt::m2i(1, 0, 1, 1);   // the examples' T: fixes horizontal
const Mat2 kS = vt::m2i(0, -1, 1, 0);

}  // namespace

TEST_CASE("act is pure bookkeeping") {
  PDecomposition p = vt::pd(vt::exm1());
  PDecomposition q = act(Mat2::identity(), p);
  CHECK(q.theta1 == p.theta1);
  CHECK(q.theta2 == p.theta2);
  CHECK(q.kSq == p.kSq);

  PDecomposition r = act(kT, p);
  CHECK(r.theta1 == Direction(Scalar(1), Scalar(1)));
  CHECK(r.theta2 == vertical());
  CHECK(r.kSq == Scalar(Rational(1, 2)));
  CHECK(r.origami.x == p.origami.x);  // origami untouched

  PDecomposition s = act(kS, vt::pd(vt::pillow()));
  CHECK(s.theta1 == vertical());
  CHECK(s.theta2 == horizontal());
  CHECK(s.kSq == Scalar(1));

  CHECK_THROWS(act(Mat2(Scalar(1), Scalar(1), Scalar(1), Scalar(1)), p));
}

TEST_CASE("prefilter") {
  PlanarComplex c = realize(vt::pd(vt::exm1()));
  CHECK(prefilter(c, Mat2::identity()).status == PrefilterStatus::Pass);
  // T_paper passes the prefilter (the full test must reject it instead).
  CHECK(prefilter(c, kTpaper).status == PrefilterStatus::Pass);
  // The vertical-fixing T fails already at the spectrum stage.
  auto pfT = prefilter(c, kT);
  CHECK(pfT.status == PrefilterStatus::Fail);

  // Irrational shear on the unit torus: certified not JS.
  PlanarComplex t = realize(vt::pd(vt::torus()));
  Mat2 shear(Scalar(1), Scalar::sqrtD(2), Scalar(0), Scalar(1));
  auto pf = prefilter(t, shear);
  CHECK(pf.status == PrefilterStatus::Fail);
  CHECK(pf.witness.find("Jenkins-Strebel") != std::string::npos);
}

TEST_CASE("membership on the six-cell surface") {
  PDecomposition p = vt::pd(vt::exm1());
  PlanarComplex c = realize(p);

  auto vId = membership(c, p, Mat2::identity(), false);
  CHECK(vId.status == MembershipStatus::Member);

  auto vT = membership(c, p, kTpaper, false);
  CHECK(vT.status == MembershipStatus::NotMember);
  CHECK(vT.reason == RejectReason::NoIsomorphism);

  auto vTlit = membership(c, p, kT, false);
  CHECK(vTlit.status == MembershipStatus::NotMember);

  auto vT2 = membership(c, p, kTpaper * kTpaper, false);
  CHECK(vT2.status == MembershipStatus::Member);
  REQUIRE(vT2.certificate.has_value());
  // Member certificates re-verify (done inside membership; assert transcript).
  CHECK(vT2.rhoSquared == Scalar(5));
}

TEST_CASE("membership on the marked pillowcase") {
  MarkTuple marks = vt::pillowMarks();
  PDecomposition p = vt::pd(vt::pillow(), marks);
  PlanarComplex c = realize(p);

  // Unmarked: T, S, and the literal T are all members (the unmarked group is
  // the full PSL(2,Z)).
  CHECK(membership(c, p, kTpaper, false).status == MembershipStatus::Member);
  CHECK(membership(c, p, kS, false).status == MembershipStatus::Member);
  CHECK(membership(c, p, kT, false).status == MembershipStatus::Member);

  // Marked: T and S fail, T^2 passes.
  CHECK(membership(c, p, kTpaper, true).status == MembershipStatus::NotMember);
  CHECK(membership(c, p, kS, true).status == MembershipStatus::NotMember);
  CHECK(membership(c, p, kTpaper * kTpaper, true).status == MembershipStatus::Member);
  CHECK(membership(c, p, kT, true).status == MembershipStatus::NotMember);
}

TEST_CASE("refine_rational") {
  // Identity refinement: unit squares stay unit squares.
  PDecomposition p = vt::pd(vt::exm1());
  PDecomposition r = refineRational(p);
  CHECK(r.origami.n == 6);
  CHECK(r.kSq == Scalar(1));
  CHECK(findIsomorphism(r.origami, p.origami).has_value());
  // Marks now cover the original vertex classes.
  CHECK(r.marks.size() == 6);

  // Two stacked cells with moduli [1,2] refine into 3 unit cells.
  PDecomposition st = vt::pd(vt::makeOrigami(2, {{1}, {2}}, {{1, 2}}, {Scalar(1), Scalar(2)}));
  PDecomposition rs = refineRational(st);
  CHECK(rs.origami.n == 3);
  CHECK(validate(rs.origami).ok);
  CHECK(surfaceType(rs.origami).genus == surfaceType(st.origami).genus);

  // Octagon: incommensurable.
  CHECK_THROWS_WITH_AS(refineRational(vt::pd(vt::octagon())),
                       doctest::Contains("incommensurable"), std::runtime_error);
}

TEST_CASE("psl word decomposition") {
  vt::Rng rng(1);
  CHECK(wordMatrix(pslWord(Mat2::identity())).pslEquals(Mat2::identity()));
  for (int iter = 0; iter < 200; ++iter) {
    // Random SL(2,Z) via random T/S words.
    int len = vt::randInt(rng, 0, 12);
    std::vector<int> toks;
    for (int i = 0; i < len; ++i) {
      int t = vt::randInt(rng, 0, 2);
      toks.push_back(t == 0 ? 1 : t == 1 ? -1 : 2);
    }
    Mat2 m = wordMatrix(toks);
    CHECK(wordMatrix(pslWord(m)).pslEquals(m));
  }
  CHECK_THROWS(pslWord(Mat2(Scalar(1), Scalar::sqrtD(2), Scalar(0), Scalar(1))));
}

TEST_CASE("enumerate_group on the trivial torus") {
  CosetGraph g = enumerateGroup(vt::pd(vt::torus()), false, 100);
  CHECK(g.complete);
  CHECK(g.index() == 1);
  CHECK(wordWalkMembership(g, matT()) == MembershipStatus::Member);
  CHECK(wordWalkMembership(g, matS()) == MembershipStatus::Member);
}

TEST_CASE("enumerate_group on the six-cell surface") {
  CosetGraph g = enumerateGroup(vt::pd(vt::exm1()), false, 200);
  CHECK(g.complete);
  CHECK(g.index() >= 2);
  // T_paper is a non-loop edge at the base; T_paper^2 is a loop.
  CHECK(wordWalkMembership(g, kTpaper) == MembershipStatus::NotMember);
  CHECK(wordWalkMembership(g, kTpaper * kTpaper) == MembershipStatus::Member);
  // Stabilizer generators are members (geometric cross-check).
  PDecomposition p = vt::pd(vt::exm1());
  PlanarComplex c = realize(p);
  int checked = 0;
  for (const auto& m : g.stabilizerMatrices) {
    if (++checked > 4) break;  // keep runtime modest; the acceptance covers all
    CHECK(membership(c, p, m, false).status == MembershipStatus::Member);
  }
}

TEST_CASE("enumerate_group requires a square-tiled input") {
  CHECK_THROWS(enumerateGroup(vt::pd(vt::octagon()), false, 10));
  PDecomposition stacked =
      vt::pd(vt::makeOrigami(2, {{1}, {2}}, {{1, 2}}, {Scalar(1), Scalar(2)}));
  CHECK_THROWS(enumerateGroup(stacked, false, 10));
  CHECK_NOTHROW(enumerateGroup(refineRational(stacked), false, 100));
}
