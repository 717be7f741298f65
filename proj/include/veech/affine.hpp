#pragma once

#include <optional>
#include <string>
#include <vector>

#include "veech/geometry.hpp"

namespace veech {

// Pure bookkeeping: ((A th1, A th2), rho^2 k^2, O); origami and marks unchanged.
PDecomposition act(const Mat2& a, const PDecomposition& p);

enum class PrefilterStatus { Pass, Fail, Unknown };

struct PrefilterResult {
  PrefilterStatus status = PrefilterStatus::Pass;
  std::string witness;
};

// Lemma-"cyl" necessary conditions: cylinder counts and projective moduli
// spectra in directions A th_i must match those of th_i.
PrefilterResult prefilter(const PlanarComplex& c, const Mat2& a, long budget = 0);
PrefilterResult prefilter(const PDecomposition& p, const Mat2& a, long budget = 0);

enum class MembershipStatus { Member, NotMember, Unknown };
enum class RejectReason { None, PrefilterFail, NotJS, NoIsomorphism, ScaleMismatch };

struct MembershipVerdict {
  MembershipStatus status = MembershipStatus::Unknown;
  RejectReason reason = RejectReason::None;
  std::string detail;
  Scalar rhoSquared{1};
  std::optional<Isomorphism> certificate;
  std::optional<PDecomposition> redecomposition;  // P(R,(A th1, A th2)) when computed
};

MembershipVerdict membership(const PDecomposition& p, const Mat2& a, bool marked,
                             long budget = 0);
MembershipVerdict membership(const PlanarComplex& c, const PDecomposition& p, const Mat2& a,
                             bool marked, long budget = 0);

// Subdivides all cells into congruent squares (possible iff the realized side
// lengths are commensurable); original vertex classes ride along as marks.
// Throws std::runtime_error("incommensurable...") with a witness pair otherwise.
PDecomposition refineRational(const PDecomposition& p);

// Tokens for words over the PSL(2,Z) generators: 1 = T, -1 = T^-1, 2 = S.
Mat2 matT();
Mat2 matS();
std::vector<int> pslWord(const Mat2& a);  // product of tokens equals +-a
Mat2 wordMatrix(const std::vector<int>& tokens);
std::string wordStr(const std::vector<int>& tokens);

struct CosetGraph {
  struct Vertex {
    std::string key;
    PDecomposition pdec;
    int stepT = -1, stepTinv = -1, stepS = -1;
    std::vector<int> repWord;
  };
  std::vector<Vertex> vertices;
  bool complete = true;
  bool marked = false;
  std::vector<std::vector<int>> stabilizerWords;
  std::vector<Mat2> stabilizerMatrices;
  int index() const { return (int)vertices.size(); }
};

// Breadth-first orbit of the canonical form under the renormalized generator
// steps; stabilizer generators via Schreier's lemma. Requires a square-tiled
// input: Theta0, all moduli equal, k^2 = 1 (use refineRational first).
CosetGraph enumerateGroup(const PDecomposition& p, bool marked, int maxVertices,
                          long budget = 0);

// Word walk on the coset graph; Unknown when the graph is incomplete.
MembershipStatus wordWalkMembership(const CosetGraph& g, const Mat2& a);

}  // namespace veech
