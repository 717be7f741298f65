#pragma once

#include "veech/iso.hpp"
#include "veech/linalg.hpp"

namespace veech {

inline Direction horizontal() { return Direction(Vec2(Scalar(1), Scalar(0))); }
inline Direction vertical() { return Direction(Vec2(Scalar(0), Scalar(1))); }

// The triple (Theta, k, O) with optional labeled marks; k is stored squared so
// that acting by A (which scales k by rho) stays in the field.
struct PDecomposition {
  Direction theta1, theta2;
  Scalar kSq;
  ExtendedOrigami origami;
  MarkTuple marks;

  PDecomposition() : theta1(horizontal()), theta2(vertical()), kSq(1) {}
};

}  // namespace veech
