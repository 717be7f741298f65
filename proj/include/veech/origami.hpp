#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "veech/scalar.hpp"

namespace veech {

// Signed cell index (lambda, eps) on Lambda x {+1,-1}, packed as
// idx = 2*(cell-1) + (eps < 0). neg flips the low bit.
struct SignedIndex {
  int cell;  // 1..n
  int sign;  // +1 or -1

  int idx() const { return 2 * (cell - 1) + (sign < 0 ? 1 : 0); }
  static SignedIndex fromIdx(int i) { return {i / 2 + 1, (i & 1) ? -1 : +1}; }
  SignedIndex neg() const { return {cell, -sign}; }
  bool operator==(const SignedIndex& o) const { return cell == o.cell && sign == o.sign; }

  // Integer form: +cell / -cell, as in cycle notation.
  int asInt() const { return sign * cell; }
  static SignedIndex fromInt(int v) { return {std::abs(v), v < 0 ? -1 : +1}; }
  std::string str() const;
};

inline int negIdx(int i) { return i ^ 1; }

// Bijection of Lambda^ stored on all 2n points.
class SignedPerm {
 public:
  SignedPerm() = default;
  explicit SignedPerm(int n);  // identity on 2n points

  static SignedPerm fromCycles(int n, const std::vector<std::vector<int>>& cycles);

  int n() const { return (int)img_.size() / 2; }
  int map(int i) const { return img_[i]; }
  SignedIndex map(SignedIndex s) const { return SignedIndex::fromIdx(img_[s.idx()]); }
  void set(int i, int to) { img_[i] = to; }

  bool isBijective() const;
  // neg . s . neg == s^-1, i.e. s(neg(s(i))) == neg(i) for all i.
  bool isEquivariant() const;

  SignedPerm inverse() const;
  SignedPerm compose(const SignedPerm& then) const;  // apply *this first, then `then`

  // Cycle decomposition over all 2n points, each cycle rotated to start at its
  // minimal idx, cycles sorted by that minimum.
  std::vector<std::vector<int>> cycles() const;
  // Half notation: keep one cycle per mirror pair (the one whose minimal
  // element is a positive-sheet point when possible).
  std::vector<std::vector<int>> halfCycles() const;
  std::string cycleStr() const;

  bool operator==(const SignedPerm& o) const { return img_ == o.img_; }

 private:
  std::vector<int> img_;
};

// Reduced word in the free generators. Letters: +1 = x, -1 = x^-1, +2 = y, -2 = y^-1.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<int> letters);
  static Word parse(const std::string& text);  // e.g. "xyX Y" or "x y x^-1 y^-1"

  const std::vector<int>& letters() const { return ls_; }
  bool empty() const { return ls_.empty(); }
  Word inverse() const;
  Word gammaMinusI() const;  // x -> x^-1, y -> y^-1 letterwise
  Word concat(const Word& o) const;
  std::string str() const;

 private:
  std::vector<int> ls_;
};

struct ExtendedOrigami {
  int n = 0;
  std::vector<Scalar> moduli;  // size n, positive, projective
  SignedPerm x, y;

  long fieldD() const;
};

struct AxiomFailure {
  std::string axiom;    // "equivariance", "non-branching", "connectivity", ...
  std::string message;  // includes a witness
};

struct ValidationReport {
  bool ok = true;
  std::vector<AxiomFailure> failures;
  std::string summary() const;
};

ValidationReport validate(const ExtendedOrigami& o);
void requireValid(const ExtendedOrigami& o);  // throws std::runtime_error on failure

// Left-to-right path semantics: m_{w1 w2} = m_{w2} o m_{w1}.
SignedIndex monodromyEval(const ExtendedOrigami& o, const Word& w, SignedIndex s);
SignedPerm monodromyPerm(const ExtendedOrigami& o, const Word& w);

// K_O cocycle: K(.,1)=1, K(s,x)=M_s/M_{x(s)}, K(s,y)=M_{y(s)}/M_s, chain rule
// K(s, w1 w2) = K(s,w1) * K(m_{w1}(s), w2).
Scalar kCocycle(const ExtendedOrigami& o, SignedIndex s, const Word& w);

struct HeightSolution {
  std::vector<Scalar> areaPotential;  // S per point of Lambda^, S(1,+) = 1
  std::vector<int> xCylOf, yCylOf;    // per cell (0-based), cylinder ids
  std::vector<Scalar> h1, h2;         // per x-cylinder / y-cylinder, one scale each
  // Per-cell side lengths up to the family scales: width = h2[yCylOf],
  // height = h1[xCylOf].
  Scalar width(int cell0) const { return h2[yCylOf[cell0]]; }
  Scalar height(int cell0) const { return h1[xCylOf[cell0]]; }
};

struct Inconsistent {
  Word witnessCycle;  // based word with K(base, w) != 1
  Scalar kValue;
};

using HeightResult = std::variant<HeightSolution, Inconsistent>;

HeightResult solveHeights(const ExtendedOrigami& o);

// Flips per-cell sign choices so that x preserves the sign component.
// Throws std::runtime_error if an x-cylinder has odd flip parity (corrupted
// data; cannot arise from a surface).
ExtendedOrigami normalizeSigns(const ExtendedOrigami& o);
bool isSignNormal(const ExtendedOrigami& o);

// x-orbit / y-orbit partition of Lambda (cylinders of the two axes).
std::vector<int> xCylinders(const ExtendedOrigami& o, int* count = nullptr);
std::vector<int> yCylinders(const ExtendedOrigami& o, int* count = nullptr);

struct SchreierData {
  std::vector<int> orbit;                 // visited points in BFS order
  std::vector<Word> transversal;          // per orbit position
  std::vector<Word> generators;           // Schreier generators of the stabilizer
  int index = 0;                          // orbit size
  int firstComponentOrbitSize = 0;        // distinct cells hit by the orbit
};

// Orbit/stabilizer data of <x,y> acting on Lambda^ from `base`.
SchreierData stabilizer(const ExtendedOrigami& o, SignedIndex base);

// True iff y preserves the sign component everywhere (requires sign-normal o).
bool isAbelian(const ExtendedOrigami& o);

}  // namespace veech
