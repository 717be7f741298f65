#pragma once

#include <random>
#include <string>
#include <vector>

#include "veech/affine.hpp"
#include "veech/io.hpp"

namespace veech::testing {

inline std::string fixturePath(const std::string& name) {
  return std::string(VEECH_FIXTURES_DIR) + "/" + name;
}

inline ExtendedOrigami makeOrigami(int n, const std::vector<std::vector<int>>& x,
                                   const std::vector<std::vector<int>>& y,
                                   std::vector<Scalar> moduli = {}) {
  ExtendedOrigami o;
  o.n = n;
  o.moduli = moduli.empty() ? std::vector<Scalar>(n, Scalar(1)) : std::move(moduli);
  auto conv = [&](const std::vector<std::vector<int>>& cycles) {
    return SignedPerm::fromCycles(n, cycles);
  };
  o.x = conv(x);
  o.y = conv(y);
  return o;
}

// Fig. 5-8 six-cell surface.
inline ExtendedOrigami exm1() {
  return makeOrigami(6, {{1, 2, 3, 4}, {5}, {6}}, {{1, 5, -6, -4}, {2, -3}});
}

// Fig. 11 two-cell pillowcase.
inline ExtendedOrigami pillow() { return makeOrigami(2, {{1, 2}}, {{1, -2}}); }

inline MarkTuple pillowMarks() {
  // (a,b,c,d) <-> ((1-),(2-),(1),(2))
  MarkTuple m;
  m.reps = {{SignedIndex{1, -1}.idx()},
            {SignedIndex{2, -1}.idx()},
            {SignedIndex{1, +1}.idx()},
            {SignedIndex{2, +1}.idx()}};
  return m;
}

inline ExtendedOrigami torus() { return makeOrigami(1, {{1}}, {{1}}); }

inline ExtendedOrigami l23() { return makeOrigami(4, {{1, 2, 3}, {4}}, {{1, 4}, {2}, {3}}); }

// The paper's O_T for the six-cell example.
inline ExtendedOrigami exm1OT() {
  return makeOrigami(6, {{1, 2, 3, 4}, {5}, {6}}, {{1, -2, 3, 5, 6, -4}});
}

inline Scalar w2() { return Scalar::sqrtD(2); }

inline ExtendedOrigami octagon() {
  Scalar one(1), r2 = w2(), half = Scalar(Rational(1, 2)) * r2;
  return makeOrigami(7, {{1, 2, 3}, {4, 7, 5, 6}}, {{1, 5, 4}, {2, 6, 3, 7}},
                     {one, r2, r2, half, half, one, one});
}

inline PDecomposition pd(const ExtendedOrigami& o, MarkTuple marks = {}) {
  PDecomposition p;
  p.origami = o;
  p.marks = std::move(marks);
  return p;
}

inline Mat2 m2i(long a, long b, long c, long d) {
  return Mat2(Scalar(a), Scalar(b), Scalar(c), Scalar(d));
}

// ---- randomized instances ----------------------------------------------------

using Rng = std::mt19937;

inline int randInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random sign-preserving x from a random permutation of the cells.
inline SignedPerm randomNormalX(Rng& rng, int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  SignedPerm x(n);
  for (int i = 0; i < n; ++i) {
    x.set(SignedIndex{i + 1, +1}.idx(), SignedIndex{perm[i] + 1, +1}.idx());
  }
  for (int i = 0; i < n; ++i)
    x.set(SignedIndex{perm[i] + 1, -1}.idx(), SignedIndex{i + 1, -1}.idx());
  return x;
}

// Random equivariant, non-branching signed permutation (used for y).
inline SignedPerm randomSignedY(Rng& rng, int n) {
  while (true) {
    std::vector<int> img(2 * n, -1);
    std::vector<char> used(2 * n, 0);
    std::vector<int> order(2 * n);
    for (int i = 0; i < 2 * n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    bool ok = true;
    for (int src : order) {
      if (img[src] != -1) continue;
      std::vector<int> cands;
      for (int t = 0; t < 2 * n; ++t) {
        if (used[t] || t == negIdx(src)) continue;
        // Forced mirror assignment: y(neg t) = neg src.
        if (t == src) {
          if (img[negIdx(src)] == -1 && !used[negIdx(src)]) cands.push_back(t);
          continue;
        }
        if (img[negIdx(t)] != -1) continue;
        if (used[negIdx(src)] && negIdx(src) != t) continue;
        cands.push_back(t);
      }
      if (cands.empty()) {
        ok = false;
        break;
      }
      int t = cands[randInt(rng, 0, (int)cands.size() - 1)];
      img[src] = t;
      used[t] = 1;
      if (negIdx(t) != src) {
        img[negIdx(t)] = negIdx(src);
        used[negIdx(src)] = 1;
      }
    }
    if (!ok) continue;
    SignedPerm y(n);
    for (int i = 0; i < 2 * n; ++i) y.set(i, img[i]);
    if (!y.isBijective() || !y.isEquivariant()) continue;
    bool branch = false;
    for (int i = 0; i < 2 * n; ++i)
      if (y.map(i) == negIdx(i)) branch = true;
    if (!branch) return y;
  }
}

// Random valid extended origami with all moduli 1 (always consistent).
inline ExtendedOrigami randomOrigami(Rng& rng, int maxN) {
  while (true) {
    int n = randInt(rng, 1, maxN);
    ExtendedOrigami o;
    o.n = n;
    o.moduli.assign(n, Scalar(1));
    o.x = randomNormalX(rng, n);
    o.y = randomSignedY(rng, n);
    if (validate(o).ok) return o;
  }
}

// Random valid origami with consistent non-trivial moduli, built from random
// cylinder heights.
inline ExtendedOrigami randomModuliOrigami(Rng& rng, int maxN) {
  while (true) {
    ExtendedOrigami o = randomOrigami(rng, maxN);
    int nx = 0, ny = 0;
    auto xc = xCylinders(o, &nx);
    auto yc = yCylinders(o, &ny);
    std::vector<Scalar> h1, h2;
    for (int j = 0; j < nx; ++j) h1.push_back(Scalar(randInt(rng, 1, 4)));
    for (int k = 0; k < ny; ++k) h2.push_back(Scalar(randInt(rng, 1, 3)));
    for (int c = 0; c < o.n; ++c) o.moduli[c] = h1[xc[c]] / h2[yc[c]];
    if (validate(o).ok) return o;
  }
}

// Random relabeling: cells permuted, each optionally sheet-flipped;
// commutes with negation by construction.
inline SignedPerm randomRelabeling(Rng& rng, int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  SignedPerm tau(n);
  for (int c = 0; c < n; ++c) {
    int flip = randInt(rng, 0, 1);
    tau.set(SignedIndex{c + 1, +1}.idx(), SignedIndex{perm[c] + 1, flip ? -1 : +1}.idx());
    tau.set(SignedIndex{c + 1, -1}.idx(), SignedIndex{perm[c] + 1, flip ? +1 : -1}.idx());
  }
  return tau;
}

// Conjugates o by a relabeling tau (cells renamed, sheets possibly flipped).
inline ExtendedOrigami relabel(const ExtendedOrigami& o, const SignedPerm& tau) {
  ExtendedOrigami r = o;
  SignedPerm tinv = tau.inverse();
  r.x = tinv.compose(o.x).compose(tau);
  r.y = tinv.compose(o.y).compose(tau);
  for (int c = 0; c < o.n; ++c) {
    int img = SignedIndex::fromIdx(tau.map(SignedIndex{c + 1, +1}.idx())).cell;
    r.moduli[img - 1] = o.moduli[c];
  }
  return r;
}

// Def-"Pdec" isomorphism of P-decompositions: equal ordered direction pair,
// isomorphic (marked) origamis, and the sigma-anchored exact scale equality
// k1^2 M2(1)^2 == k2^2 M2(sigma(1))^2.
inline bool pdecIsomorphic(const PDecomposition& p1, const PDecomposition& p2) {
  if (!(p1.theta1 == p2.theta1) || !(p1.theta2 == p2.theta2)) return false;
  auto scaleOk = [&](const Isomorphism& iso) {
    const Scalar& m1 = p2.origami.moduli[0];
    const Scalar& mImg = p2.origami.moduli[SignedIndex::fromIdx(iso.sigma[0]).cell - 1];
    return p1.kSq * m1 * m1 == p2.kSq * mImg * mImg;
  };
  return findIsomorphism(p1.origami, p2.origami, p1.marks, p2.marks, scaleOk).has_value();
}

inline Word randomWord(Rng& rng, int maxLen) {
  std::vector<int> ls;
  int len = randInt(rng, 0, maxLen);
  const int letters[4] = {1, -1, 2, -2};
  for (int i = 0; i < len; ++i) ls.push_back(letters[randInt(rng, 0, 3)]);
  return Word(ls);
}

inline SignedIndex randomPoint(Rng& rng, int n) {
  return SignedIndex::fromIdx(randInt(rng, 0, 2 * n - 1));
}

}  // namespace veech::testing
