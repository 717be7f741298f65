#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

using namespace veech;
namespace vt = veech::testing;

TEST_CASE("signed permutation from half-cycles materializes mirrors") {
  SignedPerm x = SignedPerm::fromCycles(6, {{1, 2, 3, 4}, {5}, {6}});
  CHECK(x.map(SignedIndex{1, +1}) == SignedIndex{2, +1});
  // Mirror cycle of (1 2 3 4) is (4- 3- 2- 1-).
  CHECK(x.map(SignedIndex{2, -1}) == SignedIndex{1, -1});
  CHECK(x.map(SignedIndex{1, -1}) == SignedIndex{4, -1});
  CHECK(x.isEquivariant());

  SignedPerm y = SignedPerm::fromCycles(6, {{1, 5, -6, -4}, {2, -3}});
  CHECK(y.map(SignedIndex{1, +1}) == SignedIndex{5, +1});
  CHECK(y.map(SignedIndex{5, +1}) == SignedIndex{6, -1});
  CHECK(y.map(SignedIndex{4, +1}) == SignedIndex{6, +1});  // mirror (4 6 5- 1-)
  CHECK(y.isEquivariant());
}

TEST_CASE("validation of the paper examples") {
  CHECK(validate(vt::exm1()).ok);
  CHECK(validate(vt::pillow()).ok);
  CHECK(validate(vt::torus()).ok);
  CHECK(validate(vt::l23()).ok);
  CHECK(validate(vt::octagon()).ok);
}

TEST_CASE("non-branching failure carries a witness") {
  // y contains the 2-cycle (1 1-): y(1) = -1.
  ExtendedOrigami o = vt::makeOrigami(2, {{1, 2}}, {{1, -1}, {2}});
  auto rep = validate(o);
  CHECK(!rep.ok);
  bool found = false;
  for (const auto& f : rep.failures) found |= f.axiom == "non-branching";
  CHECK(found);
}

TEST_CASE("monodromy uses left-to-right path semantics") {
  ExtendedOrigami o1 = vt::exm1();
  CHECK(monodromyEval(o1, Word(), SignedIndex{3, +1}) == SignedIndex{3, +1});
  CHECK(monodromyEval(o1, Word::parse("x"), SignedIndex{1, +1}) == SignedIndex{2, +1});
  ExtendedOrigami o2 = vt::pillow();
  CHECK(monodromyEval(o2, Word::parse("y"), SignedIndex{1, +1}) == SignedIndex{2, -1});
  // m_{w1 w2} = m_{w2} o m_{w1}: xy from cell 1 goes right then up.
  CHECK(monodromyEval(o1, Word::parse("xy"), SignedIndex{1, +1}) ==
        monodromyEval(o1, Word::parse("y"),
                      monodromyEval(o1, Word::parse("x"), SignedIndex{1, +1})));
}

TEST_CASE("k cocycle generator rules and worked example") {
  ExtendedOrigami o = vt::makeOrigami(2, {{1, 2}}, {{1}, {2}}, {Scalar(1), Scalar(2)});
  CHECK(kCocycle(o, SignedIndex{1, +1}, Word()) == Scalar(1));
  CHECK(kCocycle(o, SignedIndex{1, +1}, Word::parse("x")) == Scalar(Rational(1, 2)));
  CHECK(kCocycle(o, SignedIndex{1, +1}, Word::parse("y")) == Scalar(1));
  ExtendedOrigami ones = vt::exm1();
  vt::Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    CHECK(kCocycle(ones, vt::randomPoint(rng, ones.n), vt::randomWord(rng, 8)) == Scalar(1));
  }
}

TEST_CASE("solve_heights on consistent and inconsistent data") {
  // All-ones moduli: S == 1 everywhere.
  auto hr = solveHeights(vt::exm1());
  auto* sol = std::get_if<HeightSolution>(&hr);
  REQUIRE(sol != nullptr);
  for (const auto& s : sol->areaPotential) CHECK(s == Scalar(1));

  // Two cells in one x-cycle and one y-cycle with unequal moduli cannot close.
  ExtendedOrigami bad = vt::makeOrigami(2, {{1, 2}}, {{1, 2}}, {Scalar(1), Scalar(2)});
  auto hr2 = solveHeights(bad);
  auto* inc = std::get_if<Inconsistent>(&hr2);
  REQUIRE(inc != nullptr);
  CHECK(kCocycle(bad, SignedIndex{1, +1}, inc->witnessCycle) != Scalar(1));
  CHECK(monodromyEval(bad, inc->witnessCycle, SignedIndex{1, +1}) == SignedIndex{1, +1});
  CHECK(!validate(bad).ok);

  // Stacked variant solves: x = (1)(2), y = (12), moduli 1 and 2.
  ExtendedOrigami stacked = vt::makeOrigami(2, {{1}, {2}}, {{1, 2}}, {Scalar(1), Scalar(2)});
  CHECK(validate(stacked).ok);
  ExtendedOrigami pillowO = vt::pillow();
  CHECK(std::holds_alternative<HeightSolution>(solveHeights(pillowO)));
}

TEST_CASE("heights give per-cylinder side lengths") {
  ExtendedOrigami stacked = vt::makeOrigami(2, {{1}, {2}}, {{1, 2}}, {Scalar(1), Scalar(2)});
  auto hr = solveHeights(stacked);
  auto* sol = std::get_if<HeightSolution>(&hr);
  REQUIRE(sol != nullptr);
  // One y-cylinder (common width), two x-cylinders with height ratio 1:2.
  CHECK(sol->width(0) == sol->width(1));
  CHECK(sol->height(1) == Scalar(2) * sol->height(0));
}

TEST_CASE("normalize_signs on the paper's flipped variants") {
  ExtendedOrigami o1 = vt::exm1();
  CHECK(isSignNormal(o1));
  CHECK(normalizeSigns(o1).x == o1.x);

  // Cylinder {6} flipped: y = (1 5 6 4-)(2 3-); isomorphic to O1 under 6 <-> 6-.
  ExtendedOrigami flip6 = vt::makeOrigami(6, {{1, 2, 3, 4}, {5}, {6}}, {{1, 5, 6, -4}, {2, -3}});
  CHECK(validate(flip6).ok);
  CHECK(isSignNormal(flip6));
  auto iso6 = findIsomorphism(flip6, o1);
  REQUIRE(iso6.has_value());

  // All signs flipped: isomorphic under global negation.
  ExtendedOrigami allFlip = o1;
  SignedPerm tau(o1.n);
  for (int c = 0; c < o1.n; ++c) {
    tau.set(2 * c, 2 * c + 1);
    tau.set(2 * c + 1, 2 * c);
  }
  allFlip.x = tau.compose(o1.x).compose(tau);
  allFlip.y = tau.compose(o1.y).compose(tau);
  CHECK(validate(allFlip).ok);
  ExtendedOrigami renorm = normalizeSigns(allFlip);
  CHECK(isSignNormal(renorm));
  auto iso = findIsomorphism(allFlip, o1);
  REQUIRE(iso.has_value());
  // The certificate is the global sheet swap.
  CHECK(iso->sigma[SignedIndex{1, +1}.idx()] == SignedIndex{1, -1}.idx());
}

TEST_CASE("normalize_signs is idempotent and output isomorphic to input") {
  vt::Rng rng(123);
  for (int iter = 0; iter < 40; ++iter) {
    ExtendedOrigami o = vt::randomOrigami(rng, 5);
    SignedPerm tau(o.n);
    for (int c = 0; c < o.n; ++c) {
      if (vt::randInt(rng, 0, 1)) {
        tau.set(2 * c, 2 * c + 1);
        tau.set(2 * c + 1, 2 * c);
      }
    }
    ExtendedOrigami flipped = o;
    flipped.x = tau.compose(o.x).compose(tau);
    flipped.y = tau.compose(o.y).compose(tau);
    ExtendedOrigami nrm = normalizeSigns(flipped);
    CHECK(isSignNormal(nrm));
    CHECK(normalizeSigns(nrm).x == nrm.x);
    CHECK(normalizeSigns(nrm).y == nrm.y);
    CHECK(findIsomorphism(nrm, o).has_value());
  }
}

TEST_CASE("stabilizer orbit data") {
  // Trivial torus: the cell is fixed by both generators.
  SchreierData tor = stabilizer(vt::torus(), SignedIndex{1, +1});
  CHECK(tor.index == 1);
  CHECK(tor.generators.size() == 2);  // x and y both stabilize

  SchreierData pil = stabilizer(vt::pillow(), SignedIndex{1, +1});
  CHECK(pil.index == 4);
  CHECK(pil.generators.size() == 5);  // rank = 1 + index for F2
  CHECK(pil.firstComponentOrbitSize == 2);

  SchreierData e1 = stabilizer(vt::exm1(), SignedIndex{1, +1});
  CHECK(e1.firstComponentOrbitSize == 6);
  for (const auto& g : e1.generators) {
    CHECK(monodromyEval(vt::exm1(), g, SignedIndex{1, +1}) == SignedIndex{1, +1});
  }
}

TEST_CASE("is_abelian") {
  CHECK(isAbelian(vt::torus()));
  CHECK(!isAbelian(vt::pillow()));
  CHECK(isAbelian(vt::l23()));
  CHECK(!isAbelian(vt::exm1()));
  CHECK(isAbelian(vt::octagon()));
}

TEST_CASE("word utilities") {
  Word w = Word::parse("x y x^-1 y^-1");
  CHECK(w.str() == "xyXY");
  CHECK(w.inverse().str() == "yxYX");
  CHECK(w.gammaMinusI().str() == "XYxy");
  CHECK(Word::parse("xX").empty());
  CHECK(w.concat(w.inverse()).empty());
}
