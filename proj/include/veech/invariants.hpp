#pragma once

#include <vector>

#include "veech/origami.hpp"

namespace veech {

// Cycle decomposition of the commutator m_{x y x^-1 y^-1} (left-to-right path
// semantics: apply x, then y, then x^-1, then y^-1).
std::vector<std::vector<int>> commutatorCycles(const ExtendedOrigami& o);

// Conjugacy class of commutator cycles under the deck pairing
// s -> x^-1(y^-1(neg s)).
struct OVertexClass {
  std::vector<std::vector<int>> cycles;  // one (self-paired) or two cycles
  bool selfPaired = false;
  int length = 0;        // common cycle length
  int angleOverPi = 0;   // cone angle as a multiple of pi
  int order = 0;         // order of the quadratic differential at the point
};

std::vector<OVertexClass> vertexClasses(const ExtendedOrigami& o);

// Index of the class containing a given point of Lambda^, per vertexClasses order.
std::vector<int> classOfPoint(const ExtendedOrigami& o, const std::vector<OVertexClass>& classes);

struct SurfaceType {
  int genus = 0;
  int punctures = 0;
  std::vector<int> orders;  // sorted ascending
};

SurfaceType surfaceType(const ExtendedOrigami& o);

enum class Axis { X, Y };

struct CylinderSpectrum {
  int count = 0;
  std::vector<Scalar> moduli;  // descending, normalized so the first entry is 1
};

CylinderSpectrum cylinderSpectrum(const ExtendedOrigami& o, Axis axis);

// Normalizes a positive list projectively: sort descending, divide by max.
CylinderSpectrum projectiveSpectrum(std::vector<Scalar> moduli);

struct DoubleCover {
  bool connected = false;    // false iff the base origami is Abelian
  int degree = 0;            // 2n if connected, n per component otherwise
  // Unsigned monodromy on 0-based points (degree many; for Abelian input this
  // is the Lambda-projected origami, the cover being two copies of it).
  std::vector<int> xPerm, yPerm;
  std::vector<int> deck;     // point involution (connected case: neg)
};

DoubleCover doubleCover(const ExtendedOrigami& o);

}  // namespace veech
