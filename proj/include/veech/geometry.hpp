#pragma once

#include <optional>
#include <vector>

#include "veech/pdec.hpp"

namespace veech {

// Plain linear map (ordinary column action), used at the geometry boundary to
// move external direction vectors into the normalized frame.
struct Lin2 {
  Scalar m00{1}, m01{0}, m10{0}, m11{1};
  Vec2 apply(const Vec2& v) const { return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y}; }
  static Lin2 columnsInverse(const Vec2& c1, const Vec2& c2);  // [c1 c2]^-1
};

// Exact realization of a P-decomposition, normalized so the decomposition
// directions become horizontal/vertical: every cell is an axis-aligned
// rectangle and all coordinates stay in the field. External directions are
// mapped in through `toInternal` (conjugation per the Veech-group remark
// Gamma(T_B R) = B Gamma(R) B^-1).
struct PlanarComplex {
  ExtendedOrigami origami;  // sign-normal
  std::vector<Scalar> width, height;  // per cell, 0-based
  std::vector<int> xplus, xminus;     // horizontal neighbors
  struct VGlue {
    int cell;
    bool flip;  // crossing lands on the partner's same-named side, reversed
  };
  std::vector<VGlue> up, down;

  // Corner classes: corner (cell, c) with c in {0=BL, 1=BR, 2=TR, 3=TL}.
  std::vector<int> cornerClass;  // size 4n
  int numClasses = 0;
  std::vector<int> classAngleOverPi;
  std::vector<int> complexClassOfOrigamiClass;  // per vertexClasses(origami) entry
  std::vector<int> origamiClassOfComplexClass;

  std::vector<int> markComplexClass;  // per input mark, complex class id

  Direction theta1 = horizontal(), theta2 = vertical();  // external pair
  Lin2 toInternal;
  Scalar norm1Sq{1}, norm2Sq{1};  // |u1|^2, |u2|^2 of the external representatives
  bool rationalLengths = false;

  int n() const { return origami.n; }
  int corner(int cell, int c) const { return 4 * cell + c; }
  Vec2 cornerPoint(int cell, int c) const;
  Scalar area() const;
};

PlanarComplex realize(const PDecomposition& p);

long defaultBudget(const PlanarComplex& c);

enum class TraceVerdict { JS, NotJS, Unknown };

struct SaddleConnection {
  struct Seg {
    int cell;
    Vec2 a, b;
  };
  std::vector<Seg> segs;
  int fromClass = -1, toClass = -1;
};

struct TraceResult {
  TraceVerdict verdict = TraceVerdict::Unknown;
  bool axis = false;           // internal direction is e1- or e2-parallel
  bool axisHorizontal = false; // valid when axis
  std::vector<SaddleConnection> connections;
};

// Decides the Jenkins-Strebel property in an external direction by tracing
// every separatrix; budget <= 0 uses the default.
TraceResult traceDirection(const PlanarComplex& c, const Direction& th, long budget = 0);

// Cylinder moduli (height/circumference, common scale) in an external
// direction. nullopt on Unknown/NotJS, with *verdict filled.
std::optional<std::vector<Scalar>> cylinderModuli(const PlanarComplex& c, const Direction& th,
                                                  long budget, TraceVerdict* verdict);

struct RedecomposeResult {
  TraceVerdict status = TraceVerdict::Unknown;
  int failedDirection = 0;  // 1 or 2 when status != JS
  PDecomposition pdec;      // canonicalized; marks carried from the complex
};

// Re-decomposes the surface in a new ordered direction pair: cuts along all
// saddle connections of both directions, reads off the parallelogram cells,
// signed adjacency, moduli, scale and marks.
RedecomposeResult redecompose(const PlanarComplex& c, const Direction& phi1,
                              const Direction& phi2, long budget = 0);

}  // namespace veech
