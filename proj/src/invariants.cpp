#include "veech/invariants.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace veech {

std::vector<std::vector<int>> commutatorCycles(const ExtendedOrigami& o) {
  return monodromyPerm(o, Word::parse("xyXY")).cycles();
}

std::vector<OVertexClass> vertexClasses(const ExtendedOrigami& o) {
  auto cyc = commutatorCycles(o);
  const int m = 2 * o.n;
  std::vector<int> cycOf(m, -1);
  for (int ci = 0; ci < (int)cyc.size(); ++ci)
    for (int v : cyc[ci]) cycOf[v] = ci;

  SignedPerm xi = o.x.inverse(), yi = o.y.inverse();
  auto partnerOf = [&](int ci) {
    int s = cyc[ci][0];
    return cycOf[xi.map(yi.map(negIdx(s)))];
  };

  std::vector<OVertexClass> out;
  std::vector<char> used(cyc.size(), 0);
  for (int ci = 0; ci < (int)cyc.size(); ++ci) {
    if (used[ci]) continue;
    int pj = partnerOf(ci);
    if (partnerOf(pj) != ci || cyc[ci].size() != cyc[pj].size())
      throw std::logic_error("deck pairing is not a length-preserving involution");
    OVertexClass cls;
    cls.length = (int)cyc[ci].size();
    used[ci] = 1;
    cls.cycles.push_back(cyc[ci]);
    if (pj == ci) {
      cls.selfPaired = true;
      cls.angleOverPi = cls.length;
      cls.order = cls.length - 2;
    } else {
      used[pj] = 1;
      cls.cycles.push_back(cyc[pj]);
      cls.selfPaired = false;
      cls.angleOverPi = 2 * cls.length;
      cls.order = 2 * cls.length - 2;
    }
    out.push_back(std::move(cls));
  }
  return out;
}

std::vector<int> classOfPoint(const ExtendedOrigami& o, const std::vector<OVertexClass>& classes) {
  std::vector<int> out(2 * o.n, -1);
  for (int ci = 0; ci < (int)classes.size(); ++ci)
    for (const auto& cyc : classes[ci].cycles)
      for (int v : cyc) out[v] = ci;
  return out;
}

SurfaceType surfaceType(const ExtendedOrigami& o) {
  auto classes = vertexClasses(o);
  SurfaceType t;
  int sum = 0;
  for (const auto& c : classes) {
    t.orders.push_back(c.order);
    sum += c.order;
  }
  if ((sum + 4) % 4 != 0) throw std::logic_error("Gauss-Bonnet sum not divisible by 4");
  t.genus = (sum + 4) / 4;
  t.punctures = (int)classes.size();
  std::sort(t.orders.begin(), t.orders.end());
  return t;
}

CylinderSpectrum projectiveSpectrum(std::vector<Scalar> moduli) {
  CylinderSpectrum s;
  s.count = (int)moduli.size();
  std::sort(moduli.begin(), moduli.end(), [](const Scalar& a, const Scalar& b) { return b < a; });
  if (!moduli.empty()) {
    Scalar top = moduli.front();
    for (auto& m : moduli) m /= top;
  }
  s.moduli = std::move(moduli);
  return s;
}

CylinderSpectrum cylinderSpectrum(const ExtendedOrigami& o, Axis axis) {
  auto hr = solveHeights(o);
  auto* sol = std::get_if<HeightSolution>(&hr);
  if (!sol) throw std::runtime_error("cylinder spectrum needs a consistent origami");
  int count = 0;
  const std::vector<int>& cylOf = axis == Axis::X ? sol->xCylOf : sol->yCylOf;
  for (int c : cylOf) count = std::max(count, c + 1);
  // modulus = height / circumference; circumference sums the transversal side
  // lengths of the member cells.
  std::vector<Scalar> circ(count, Scalar(0));
  for (int c = 0; c < o.n; ++c)
    circ[cylOf[c]] += (axis == Axis::X ? sol->width(c) : sol->height(c));
  std::vector<Scalar> mods;
  for (int j = 0; j < count; ++j) {
    Scalar h = axis == Axis::X ? sol->h1[j] : sol->h2[j];
    mods.push_back(h / circ[j]);
  }
  return projectiveSpectrum(std::move(mods));
}

DoubleCover doubleCover(const ExtendedOrigami& o) {
  ExtendedOrigami nrm = isSignNormal(o) ? o : normalizeSigns(o);
  DoubleCover dc;
  if (isAbelian(nrm)) {
    dc.connected = false;
    dc.degree = nrm.n;
    dc.xPerm.resize(nrm.n);
    dc.yPerm.resize(nrm.n);
    dc.deck.resize(nrm.n);
    for (int c = 0; c < nrm.n; ++c) {
      dc.xPerm[c] = nrm.x.map(SignedIndex{c + 1, +1}).cell - 1;
      dc.yPerm[c] = nrm.y.map(SignedIndex{c + 1, +1}).cell - 1;
      dc.deck[c] = c;  // the two components swap; within a component the deck map is trivial
    }
  } else {
    dc.connected = true;
    dc.degree = 2 * nrm.n;
    dc.xPerm.resize(dc.degree);
    dc.yPerm.resize(dc.degree);
    dc.deck.resize(dc.degree);
    for (int i = 0; i < dc.degree; ++i) {
      dc.xPerm[i] = nrm.x.map(i);
      dc.yPerm[i] = nrm.y.map(i);
      dc.deck[i] = negIdx(i);
    }
  }
  return dc;
}

}  // namespace veech
