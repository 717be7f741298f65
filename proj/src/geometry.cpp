#include "veech/geometry.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace veech {

namespace {

enum SideId { SB = 0, SR = 1, ST = 2, SL = 3 };
enum CornerId { CBL = 0, CBR = 1, CTR = 2, CTL = 3 };

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int v) { return p[v] == v ? v : p[v] = find(p[v]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

Lin2 Lin2::columnsInverse(const Vec2& c1, const Vec2& c2) {
  Scalar det = c1.x * c2.y - c1.y * c2.x;
  if (det.isZero()) throw std::domain_error("degenerate direction pair");
  Lin2 l;
  l.m00 = c2.y / det;
  l.m01 = -c2.x / det;
  l.m10 = -c1.y / det;
  l.m11 = c1.x / det;
  return l;
}

Vec2 PlanarComplex::cornerPoint(int cell, int c) const {
  switch (c) {
    case CBL: return Vec2(Scalar(0), Scalar(0));
    case CBR: return Vec2(width[cell], Scalar(0));
    case CTR: return Vec2(width[cell], height[cell]);
    default: return Vec2(Scalar(0), height[cell]);
  }
}

Scalar PlanarComplex::area() const {
  Scalar s(0);
  for (int c = 0; c < n(); ++c) s += width[c] * height[c];
  return s;
}

long defaultBudget(const PlanarComplex& c) {
  double dims = 0;
  for (int i = 0; i < c.n(); ++i) dims += c.width[i].approx() + c.height[i].approx();
  long b = (long)(10.0 * c.n() * (dims + 1.0));
  return std::max(b, 1000L);
}

PlanarComplex realize(const PDecomposition& p) {
  requireValid(p.origami);
  if (p.theta1 == p.theta2) throw std::runtime_error("realize: directions coincide");
  if (p.kSq.sign() <= 0) throw std::runtime_error("realize: k^2 must be positive");

  PlanarComplex c;
  ExtendedOrigami o = isSignNormal(p.origami) ? p.origami : normalizeSigns(p.origami);
  c.origami = o;

  auto hr = solveHeights(o);
  auto* sol = std::get_if<HeightSolution>(&hr);
  if (!sol) throw std::runtime_error("realize: inconsistent origami");

  const Vec2& u1 = p.theta1.rep();
  const Vec2& u2 = p.theta2.rep();
  c.theta1 = p.theta1;
  c.theta2 = p.theta2;
  c.norm1Sq = u1.norm2();
  c.norm2Sq = u2.norm2();
  c.toInternal = Lin2::columnsInverse(u1, u2);

  Scalar kNormSq = p.kSq * c.norm1Sq / c.norm2Sq;
  long ambient = p.origami.fieldD();
  for (const Scalar* v : {&u1.x, &u1.y, &u2.x, &u2.y, &p.kSq})
    if (v->fieldD() != 1) ambient = v->fieldD();
  auto kNorm = kNormSq.sqrtInField(ambient);
  if (!kNorm)
    throw std::runtime_error(
        "realize: normalized scale sqrt(k^2*|u1|^2/|u2|^2) is not in the field");

  const int n = o.n;
  c.width.resize(n);
  c.height.resize(n);
  // Family scales chosen so cell 1 has modulus kNorm = height/width.
  Scalar s = sol->height(0), t = *kNorm * sol->width(0);
  for (int i = 0; i < n; ++i) {
    c.width[i] = s * sol->width(i);
    c.height[i] = t * sol->height(i);
  }
  c.rationalLengths = true;
  for (int i = 0; i < n; ++i)
    if (!c.width[i].isRational() || !c.height[i].isRational()) c.rationalLengths = false;

  // Gluing tables.
  c.xplus.resize(n);
  c.xminus.resize(n);
  c.up.resize(n);
  c.down.resize(n);
  for (int i = 0; i < n; ++i) {
    SignedIndex xi = o.x.map(SignedIndex{i + 1, +1});
    if (xi.sign < 0) throw std::logic_error("realize: x not sign-normal");
    c.xplus[i] = xi.cell - 1;
    SignedIndex yi = o.y.map(SignedIndex{i + 1, +1});
    c.up[i] = {yi.cell - 1, yi.sign < 0};
    SignedIndex yd = o.y.map(SignedIndex{i + 1, -1});
    c.down[i] = {yd.cell - 1, yd.sign > 0};
  }
  for (int i = 0; i < n; ++i) c.xminus[c.xplus[i]] = i;
  for (int i = 0; i < n; ++i) {
    if (c.height[i] != c.height[c.xplus[i]])
      throw std::logic_error("realize: unequal heights along an x-cylinder");
    if (c.width[i] != c.width[c.up[i].cell])
      throw std::logic_error("realize: unequal widths across a vertical gluing");
    if (c.width[i] != c.width[c.down[i].cell])
      throw std::logic_error("realize: unequal widths across a vertical gluing");
  }

  // Corner classes via the endpoint identifications of the three gluing kinds.
  UnionFind uf(4 * n);
  for (int i = 0; i < n; ++i) {
    int r = c.xplus[i];
    uf.unite(c.corner(i, CBR), c.corner(r, CBL));
    uf.unite(c.corner(i, CTR), c.corner(r, CTL));
    if (!c.up[i].flip) {
      uf.unite(c.corner(i, CTL), c.corner(c.up[i].cell, CBL));
      uf.unite(c.corner(i, CTR), c.corner(c.up[i].cell, CBR));
    } else {
      uf.unite(c.corner(i, CTL), c.corner(c.up[i].cell, CTR));
      uf.unite(c.corner(i, CTR), c.corner(c.up[i].cell, CTL));
    }
    if (c.down[i].flip) {
      uf.unite(c.corner(i, CBL), c.corner(c.down[i].cell, CBR));
      uf.unite(c.corner(i, CBR), c.corner(c.down[i].cell, CBL));
    }
  }
  c.cornerClass.assign(4 * n, -1);
  c.numClasses = 0;
  std::vector<int> sizes;
  for (int v = 0; v < 4 * n; ++v) {
    int r = uf.find(v);
    if (c.cornerClass[r] == -1) {
      c.cornerClass[r] = c.numClasses++;
      sizes.push_back(0);
    }
    c.cornerClass[v] = c.cornerClass[r];
  }
  for (int v = 0; v < 4 * n; ++v) sizes[c.cornerClass[v]]++;
  c.classAngleOverPi.resize(c.numClasses);
  for (int k = 0; k < c.numClasses; ++k) {
    if (sizes[k] % 2 != 0) throw std::logic_error("realize: odd corner count at a vertex");
    c.classAngleOverPi[k] = sizes[k] / 2;
  }

  // Match complex vertex classes with the origami's O-vertex classes:
  // the commutator cycle through (cell,+) winds around the TR corner, the one
  // through (cell,-) around BL.
  auto classes = vertexClasses(o);
  c.complexClassOfOrigamiClass.assign(classes.size(), -1);
  c.origamiClassOfComplexClass.assign(c.numClasses, -1);
  for (int ci = 0; ci < (int)classes.size(); ++ci) {
    for (const auto& cyc : classes[ci].cycles) {
      for (int v : cyc) {
        SignedIndex sgn = SignedIndex::fromIdx(v);
        int cc = c.cornerClass[c.corner(sgn.cell - 1, sgn.sign > 0 ? CTR : CBL)];
        if (c.complexClassOfOrigamiClass[ci] == -1) {
          c.complexClassOfOrigamiClass[ci] = cc;
        } else if (c.complexClassOfOrigamiClass[ci] != cc) {
          throw std::logic_error("realize: vertex-class correspondence not single-valued");
        }
        if (c.origamiClassOfComplexClass[cc] != -1 && c.origamiClassOfComplexClass[cc] != ci)
          throw std::logic_error("realize: vertex-class correspondence not injective");
        c.origamiClassOfComplexClass[cc] = ci;
      }
    }
    if (classes[ci].angleOverPi != c.classAngleOverPi[c.complexClassOfOrigamiClass[ci]])
      throw std::logic_error("realize: cone angle mismatch between origami and complex");
  }
  for (int cc = 0; cc < c.numClasses; ++cc)
    if (c.origamiClassOfComplexClass[cc] == -1)
      throw std::logic_error("realize: complex vertex missing from origami classes");

  // Marks: representative cycles live in p.origami labels; the sign
  // normalization is an isomorphism, so resolve classes through it.
  if (!p.marks.empty()) {
    auto iso = findIsomorphism(p.origami, o);
    if (!iso) throw std::logic_error("realize: normalization broke isomorphism");
    auto classesIn = vertexClasses(p.origami);
    auto pointCls = classOfPoint(o, classes);
    for (const auto& rep : p.marks.reps) {
      int ci = classIndexOfRep(p.origami, classesIn, rep);
      int target = pointCls[iso->sigma[classesIn[ci].cycles[0][0]]];
      c.markComplexClass.push_back(c.complexClassOfOrigamiClass[target]);
    }
  }
  return c;
}

namespace {

struct TraceState {
  int cell;
  Vec2 p;
  Vec2 dir;
};

// One straight segment inside a rectangle for a strictly diagonal direction.
// Returns the exit point and which side/corner was hit.
struct Hit {
  Vec2 q;
  bool corner;
  int side;    // SideId, valid when !corner
  int cornerId;  // CornerId, valid when corner
};

Hit stepInCell(const PlanarComplex& c, const TraceState& s) {
  const Scalar& w = c.width[s.cell];
  const Scalar& h = c.height[s.cell];
  bool hx = !s.dir.x.isZero(), hy = !s.dir.y.isZero();
  Scalar tx(0), ty(0);
  if (hx) tx = (s.dir.x.sign() > 0 ? (w - s.p.x) : -s.p.x) / s.dir.x;
  if (hy) ty = (s.dir.y.sign() > 0 ? (h - s.p.y) : -s.p.y) / s.dir.y;
  Hit hit;
  int cmpv;
  if (hx && hy)
    cmpv = tx < ty ? -1 : (ty < tx ? 1 : 0);
  else
    cmpv = hx ? -1 : 1;
  Scalar t = cmpv <= 0 ? tx : ty;
  hit.q = Vec2(s.p.x + s.dir.x * t, s.p.y + s.dir.y * t);
  if (cmpv == 0) {
    hit.corner = true;
    bool right = s.dir.x.sign() > 0, top = s.dir.y.sign() > 0;
    hit.cornerId = right ? (top ? CTR : CBR) : (top ? CTL : CBL);
  } else {
    hit.corner = false;
    hit.side = cmpv < 0 ? (s.dir.x.sign() > 0 ? SR : SL) : (s.dir.y.sign() > 0 ? ST : SB);
  }
  return hit;
}

TraceState crossSide(const PlanarComplex& c, int cell, int side, const Vec2& q, const Vec2& dir) {
  switch (side) {
    case SR: return {c.xplus[cell], Vec2(Scalar(0), q.y), dir};
    case SL: {
      int m = c.xminus[cell];
      return {m, Vec2(c.width[m], q.y), dir};
    }
    case ST: {
      auto g = c.up[cell];
      if (!g.flip) return {g.cell, Vec2(q.x, Scalar(0)), dir};
      return {g.cell, Vec2(c.width[g.cell] - q.x, c.height[g.cell]), -dir};
    }
    default: {
      auto g = c.down[cell];
      if (!g.flip) return {g.cell, Vec2(q.x, c.height[g.cell]), dir};
      return {g.cell, Vec2(c.width[g.cell] - q.x, Scalar(0)), -dir};
    }
  }
}

// Whether a strictly diagonal direction points into the cell from the corner.
bool dirFitsCorner(int cornerId, const Vec2& dir) {
  int sx = dir.x.sign(), sy = dir.y.sign();
  switch (cornerId) {
    case CBL: return sx > 0 && sy > 0;
    case CBR: return sx < 0 && sy > 0;
    case CTR: return sx < 0 && sy < 0;
    default: return sx > 0 && sy < 0;
  }
}

std::optional<SaddleConnection> traceSeparatrix(const PlanarComplex& c, int cell, int cornerId,
                                                const Vec2& dir, long budget) {
  SaddleConnection conn;
  conn.fromClass = c.cornerClass[c.corner(cell, cornerId)];
  TraceState s{cell, c.cornerPoint(cell, cornerId), dir};
  for (long i = 0; i < budget; ++i) {
    Hit hit = stepInCell(c, s);
    conn.segs.push_back({s.cell, s.p, hit.q});
    if (hit.corner) {
      conn.toClass = c.cornerClass[c.corner(s.cell, hit.cornerId)];
      return conn;
    }
    s = crossSide(c, s.cell, hit.side, hit.q, s.dir);
  }
  return std::nullopt;
}

bool slopeIsRational(const Vec2& v) {
  if (v.x.isZero() || v.y.isZero()) return true;
  return (v.y / v.x).isRational();
}

// ---- per-cell planar subdivision --------------------------------------------

struct Chord {
  Vec2 a, b;
  bool operator<(const Chord& o) const {
    Vec2Less lt;
    if (a != o.a) return lt(a, o.a);
    return lt(b, o.b);
  }
};

Chord makeChord(Vec2 a, Vec2 b) {
  if (Vec2Less()(b, a)) std::swap(a, b);
  return {a, b};
}

struct CellSubdiv {
  std::vector<Vec2> pts;
  std::vector<std::vector<int>> faces;  // ccw polygons, positive area
  struct Piece {
    int a, b;   // node ids, ordered ccw along the boundary
    int face;   // adjacent interior face
  };
  std::vector<std::vector<Piece>> sidePieces;  // by SideId
};

struct AngleLess {
  const std::vector<Vec2>& pts;
  int origin;
  bool operator()(int u, int v) const {
    Vec2 du = pts[u] - pts[origin];
    Vec2 dv = pts[v] - pts[origin];
    auto half = [](const Vec2& d) {
      int sy = d.y.sign();
      if (sy != 0) return sy < 0 ? 1 : 0;
      return d.x.sign() < 0 ? 1 : 0;
    };
    int hu = half(du), hv = half(dv);
    if (hu != hv) return hu < hv;
    return cross(du, dv).sign() > 0;
  }
};

CellSubdiv subdivideCell(const Scalar& w, const Scalar& h, const std::vector<Chord>& chords) {
  CellSubdiv sd;
  std::map<Vec2, int, Vec2Less> nodeId;
  auto node = [&](const Vec2& p) {
    auto it = nodeId.find(p);
    if (it != nodeId.end()) return it->second;
    int id = (int)sd.pts.size();
    sd.pts.push_back(p);
    nodeId.emplace(p, id);
    return id;
  };
  Vec2 bl(Scalar(0), Scalar(0)), br(w, Scalar(0)), tr(w, h), tl(Scalar(0), h);
  node(bl);
  node(br);
  node(tr);
  node(tl);

  struct Carrier {
    Vec2 a, b;
    std::vector<int> nodes;
  };
  std::vector<Carrier> carriers;
  carriers.push_back({bl, br, {}});  // B
  carriers.push_back({br, tr, {}});  // R
  carriers.push_back({tr, tl, {}});  // T (ccw)
  carriers.push_back({tl, bl, {}});  // L
  for (const auto& ch : chords) carriers.push_back({ch.a, ch.b, {}});

  for (auto& car : carriers) {
    car.nodes.push_back(node(car.a));
    car.nodes.push_back(node(car.b));
  }
  // Chord x chord transversal intersections (sides already carry chord
  // endpoints as their own endpoints are on the boundary).
  for (size_t i = 4; i < carriers.size(); ++i) {
    for (size_t j = i + 1; j < carriers.size(); ++j) {
      Vec2 d1 = carriers[i].b - carriers[i].a;
      Vec2 d2 = carriers[j].b - carriers[j].a;
      Scalar den = cross(d1, d2);
      if (den.isZero()) continue;
      Vec2 rhs = carriers[j].a - carriers[i].a;
      Scalar t = cross(rhs, d2) / den;
      Scalar u = cross(rhs, d1) / den;
      if (t.sign() < 0 || (t - Scalar(1)).sign() > 0) continue;
      if (u.sign() < 0 || (u - Scalar(1)).sign() > 0) continue;
      Vec2 q = carriers[i].a + d1 * t;
      int id = node(q);
      carriers[i].nodes.push_back(id);
      carriers[j].nodes.push_back(id);
    }
  }
  // Chord endpoints subdivide the sides.
  for (size_t j = 4; j < carriers.size(); ++j) {
    for (int end = 0; end < 2; ++end) {
      Vec2 q = end ? carriers[j].b : carriers[j].a;
      for (int s = 0; s < 4; ++s) {
        Vec2 d = carriers[s].b - carriers[s].a;
        if (!cross(d, q - carriers[s].a).isZero()) continue;
        Scalar t = (!d.x.isZero()) ? (q.x - carriers[s].a.x) / d.x : (q.y - carriers[s].a.y) / d.y;
        if (t.sign() >= 0 && (t - Scalar(1)).sign() <= 0) carriers[s].nodes.push_back(node(q));
      }
    }
  }

  // Sub-edges, deduplicated and sorted along each carrier.
  std::set<std::pair<int, int>> undirected;
  for (auto& car : carriers) {
    Vec2 d = car.b - car.a;
    auto along = [&](int id) { return dot(sd.pts[id] - car.a, d); };
    std::sort(car.nodes.begin(), car.nodes.end(),
              [&](int u, int v) { return along(u) < along(v); });
    car.nodes.erase(std::unique(car.nodes.begin(), car.nodes.end()), car.nodes.end());
    for (size_t i = 0; i + 1 < car.nodes.size(); ++i) {
      int a = car.nodes[i], b = car.nodes[i + 1];
      if (a != b) undirected.insert({std::min(a, b), std::max(a, b)});
    }
  }

  // Half-edge structure.
  struct HalfEdge {
    int from, to;
    int twin, next = -1, face = -1;
  };
  std::vector<HalfEdge> hes;
  std::map<std::pair<int, int>, int> heId;
  for (auto [a, b] : undirected) {
    int i = (int)hes.size();
    hes.push_back({a, b, i + 1});
    hes.push_back({b, a, i});
    heId[{a, b}] = i;
    heId[{b, a}] = i + 1;
  }
  std::vector<std::vector<int>> outgoing(sd.pts.size());
  for (int i = 0; i < (int)hes.size(); ++i) outgoing[hes[i].from].push_back(i);
  for (int v = 0; v < (int)sd.pts.size(); ++v) {
    std::sort(outgoing[v].begin(), outgoing[v].end(), [&](int e, int f) {
      AngleLess al{sd.pts, v};
      return al(hes[e].to, hes[f].to);
    });
  }
  // next(e) = predecessor of twin(e) in the ccw order around head(e).
  for (int e = 0; e < (int)hes.size(); ++e) {
    int head = hes[e].to;
    const auto& out = outgoing[head];
    int tw = hes[e].twin;
    int pos = -1;
    for (int i = 0; i < (int)out.size(); ++i)
      if (out[i] == tw) pos = i;
    hes[e].next = out[(pos + (int)out.size() - 1) % out.size()];
  }
  // Extract faces; keep counterclockwise (positive area) ones.
  for (int e = 0; e < (int)hes.size(); ++e) {
    if (hes[e].face != -1) continue;
    std::vector<int> cycle;
    int cur = e;
    do {
      cycle.push_back(cur);
      cur = hes[cur].next;
    } while (cur != e);
    Scalar area2(0);
    std::vector<int> poly;
    for (int heid : cycle) {
      poly.push_back(hes[heid].from);
      area2 += cross(sd.pts[hes[heid].from], sd.pts[hes[heid].to]);
    }
    int faceIdx = -1;
    if (area2.sign() > 0) {
      faceIdx = (int)sd.faces.size();
      sd.faces.push_back(poly);
    }
    for (int heid : cycle) hes[heid].face = faceIdx == -1 ? -2 : faceIdx;
  }

  // Boundary pieces in ccw traversal order per side.
  sd.sidePieces.assign(4, {});
  for (int s = 0; s < 4; ++s) {
    auto& car = carriers[s];
    for (size_t i = 0; i + 1 < car.nodes.size(); ++i) {
      int a = car.nodes[i], b = car.nodes[i + 1];
      int e = heId.at({a, b});
      if (hes[e].face < 0) e = hes[e].twin;
      sd.sidePieces[s].push_back({a, b, hes[e].face});
    }
  }
  return sd;
}

// Point in closed convex ccw polygon.
bool inFaceClosed(const CellSubdiv& sd, int face, const Vec2& p) {
  const auto& poly = sd.faces[face];
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = sd.pts[poly[i]];
    const Vec2& b = sd.pts[poly[(i + 1) % poly.size()]];
    if (cross(b - a, p - a).sign() < 0) return false;
  }
  return true;
}

// Face containing p + eps*dir (p on the closure).
int faceAt(const CellSubdiv& sd, const Vec2& p, const Vec2& dir) {
  for (int f = 0; f < (int)sd.faces.size(); ++f) {
    const auto& poly = sd.faces[f];
    bool ok = true;
    for (size_t i = 0; i < poly.size() && ok; ++i) {
      const Vec2& a = sd.pts[poly[i]];
      const Vec2& b = sd.pts[poly[(i + 1) % poly.size()]];
      Scalar side = cross(b - a, p - a);
      int sg = side.sign();
      if (sg < 0) {
        ok = false;
      } else if (sg == 0) {
        Scalar dd = cross(b - a, dir);
        if (dd.sign() < 0) ok = false;
        if (dd.sign() == 0 && dot(dir, b - a).sign() < 0) ok = false;
      }
    }
    if (ok) return f;
  }
  return -1;
}

// ---- merged faces (groups) ---------------------------------------------------

struct AffineMap {
  int sign = 1;  // +1 or -1
  Vec2 off{Scalar(0), Scalar(0)};
  Vec2 apply(const Vec2& p) const { return sign > 0 ? p + off : off - p; }
  Vec2 applyDir(const Vec2& d) const { return sign > 0 ? d : -d; }
};

// Local point map across a side gluing (cell -> partner cell coordinates).
AffineMap glueMap(const PlanarComplex& c, int cell, int side) {
  AffineMap m;
  switch (side) {
    case SR:
      m.off = Vec2(-c.width[cell], Scalar(0));
      return m;
    case SL:
      m.off = Vec2(c.width[c.xminus[cell]], Scalar(0));
      return m;
    case ST: {
      auto g = c.up[cell];
      if (!g.flip) {
        m.off = Vec2(Scalar(0), -c.height[cell]);
      } else {
        m.sign = -1;
        m.off = Vec2(c.width[g.cell], c.height[g.cell] + c.height[cell]);
      }
      return m;
    }
    default: {
      auto g = c.down[cell];
      if (!g.flip) {
        m.off = Vec2(Scalar(0), c.height[g.cell]);
      } else {
        m.sign = -1;
        m.off = Vec2(c.width[g.cell], Scalar(0));
      }
      return m;
    }
  }
}

int partnerCell(const PlanarComplex& c, int cell, int side) {
  switch (side) {
    case SR: return c.xplus[cell];
    case SL: return c.xminus[cell];
    case ST: return c.up[cell].cell;
    default: return c.down[cell].cell;
  }
}

int partnerSide(const PlanarComplex& c, int cell, int side) {
  switch (side) {
    case SR: return SL;
    case SL: return SR;
    case ST: return c.up[cell].flip ? ST : SB;
    default: return c.down[cell].flip ? SB : ST;
  }
}

struct MergedComplex {
  std::vector<CellSubdiv> sub;       // per cell
  std::vector<int> faceBase;         // global face id offset per cell
  int totalFaces = 0;
  std::vector<int> groupOf;          // global face -> group
  int groupCount = 0;
  std::vector<AffineMap> dev;        // global face -> group frame
  std::vector<std::vector<Vec2>> holonomy;  // per group, back-edge mismatches
  std::vector<std::vector<int>> groupFaces;

  int globalFace(int cell, int f) const { return faceBase[cell] + f; }
  int cellOfFace(int gf) const {
    int cell = 0;
    while (cell + 1 < (int)faceBase.size() && faceBase[cell + 1] <= gf) ++cell;
    return cell;
  }
};

MergedComplex buildMerged(const PlanarComplex& c,
                          const std::vector<std::vector<Chord>>& chordsPerCell,
                          bool coverHorizontalSides, bool coverVerticalSides) {
  MergedComplex mc;
  const int n = c.n();
  mc.sub.reserve(n);
  mc.faceBase.resize(n);
  for (int i = 0; i < n; ++i) {
    mc.faceBase[i] = mc.totalFaces;
    mc.sub.push_back(subdivideCell(c.width[i], c.height[i], chordsPerCell[i]));
    mc.totalFaces += (int)mc.sub[i].faces.size();
  }

  UnionFind uf(mc.totalFaces);
  struct MergeEdge {
    int fa, fb;      // global faces
    AffineMap bToA;  // partner-local -> local
  };
  std::vector<MergeEdge> edges;

  for (int cell = 0; cell < n; ++cell) {
    for (int side = 0; side < 4; ++side) {
      bool covered = (side == ST || side == SB) ? coverHorizontalSides : coverVerticalSides;
      if (covered) continue;
      int pc = partnerCell(c, cell, side);
      int ps = partnerSide(c, cell, side);
      // Process each unordered gluing once.
      if (pc < cell || (pc == cell && ps < side)) continue;
      AffineMap fwd = glueMap(c, cell, side);
      for (const auto& piece : mc.sub[cell].sidePieces[side]) {
        Vec2 pa = fwd.apply(mc.sub[cell].pts[piece.a]);
        Vec2 pb = fwd.apply(mc.sub[cell].pts[piece.b]);
        // Find the partner piece with endpoints {pa, pb}.
        int found = -1;
        for (int k = 0; k < (int)mc.sub[pc].sidePieces[ps].size(); ++k) {
          const auto& q = mc.sub[pc].sidePieces[ps][k];
          const Vec2& qa = mc.sub[pc].pts[q.a];
          const Vec2& qb = mc.sub[pc].pts[q.b];
          if ((qa == pa && qb == pb) || (qa == pb && qb == pa)) {
            found = k;
            break;
          }
        }
        if (found == -1) throw std::logic_error("merge: side subdivisions do not match");
        int fa = mc.globalFace(cell, piece.face);
        int fb = mc.globalFace(pc, mc.sub[pc].sidePieces[ps][found].face);
        AffineMap bToA;  // partner local -> local: inverse of fwd
        bToA.sign = fwd.sign;
        bToA.off = fwd.sign > 0 ? -fwd.off : fwd.off;
        edges.push_back({fa, fb, bToA});
        uf.unite(fa, fb);
      }
    }
  }

  mc.groupOf.assign(mc.totalFaces, -1);
  for (int f = 0; f < mc.totalFaces; ++f) {
    int r = uf.find(f);
    if (mc.groupOf[r] == -1) mc.groupOf[r] = mc.groupCount++;
    mc.groupOf[f] = mc.groupOf[r];
  }
  mc.groupFaces.assign(mc.groupCount, {});
  for (int f = 0; f < mc.totalFaces; ++f) mc.groupFaces[mc.groupOf[f]].push_back(f);

  // Develop each group over the merge edges.
  std::vector<std::vector<std::pair<int, AffineMap>>> adj(mc.totalFaces);
  for (const auto& e : edges) {
    adj[e.fa].push_back({e.fb, e.bToA});
    AffineMap aToB;
    aToB.sign = e.bToA.sign;
    aToB.off = e.bToA.sign > 0 ? -e.bToA.off : e.bToA.off;
    adj[e.fb].push_back({e.fa, aToB});
  }
  mc.dev.assign(mc.totalFaces, AffineMap{});
  mc.holonomy.assign(mc.groupCount, {});
  std::vector<char> seen(mc.totalFaces, 0);
  for (int f0 = 0; f0 < mc.totalFaces; ++f0) {
    if (seen[f0]) continue;
    seen[f0] = 1;
    mc.dev[f0] = AffineMap{};
    std::vector<int> queue = {f0};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int f = queue[qi];
      for (const auto& [g, bToA] : adj[f]) {
        // dev[g] should equal dev[f] composed with (g-local -> f-local).
        AffineMap cand;
        cand.sign = mc.dev[f].sign * bToA.sign;
        cand.off = mc.dev[f].apply(bToA.off);
        if (!seen[g]) {
          seen[g] = 1;
          mc.dev[g] = cand;
          queue.push_back(g);
        } else {
          if (cand.sign != mc.dev[g].sign)
            throw std::logic_error("merge: orientation-reversing holonomy in a face group");
          Vec2 delta = cand.off - mc.dev[g].off;
          if (!delta.isZero()) mc.holonomy[mc.groupOf[f]].push_back(delta);
        }
      }
    }
  }
  return mc;
}

// ---- direction tracing --------------------------------------------------------

struct DirectionData {
  TraceResult result;
  std::vector<std::vector<Chord>> chords;  // per cell, empty for axis directions
};

DirectionData traceInternal(const PlanarComplex& c, const Vec2& v, long budget) {
  DirectionData out;
  out.chords.assign(c.n(), {});
  if (v.isZero()) throw std::domain_error("zero direction");
  if (v.x.isZero() || v.y.isZero()) {
    out.result.verdict = TraceVerdict::JS;
    out.result.axis = true;
    out.result.axisHorizontal = v.y.isZero();
    // Every horizontal (resp. vertical) edge is a saddle connection.
    for (int cell = 0; cell < c.n(); ++cell) {
      SaddleConnection conn;
      if (out.result.axisHorizontal) {
        conn.segs.push_back({cell, Vec2(Scalar(0), Scalar(0)), Vec2(c.width[cell], Scalar(0))});
        conn.fromClass = c.cornerClass[c.corner(cell, CBL)];
        conn.toClass = c.cornerClass[c.corner(cell, CBR)];
      } else {
        conn.segs.push_back({cell, Vec2(Scalar(0), Scalar(0)), Vec2(Scalar(0), c.height[cell])});
        conn.fromClass = c.cornerClass[c.corner(cell, CBL)];
        conn.toClass = c.cornerClass[c.corner(cell, CTL)];
      }
      out.result.connections.push_back(std::move(conn));
    }
    return out;
  }
  if (c.rationalLengths && !slopeIsRational(v)) {
    out.result.verdict = TraceVerdict::NotJS;
    return out;
  }
  std::set<std::pair<int, Chord>> chordSet;
  for (int cell = 0; cell < c.n(); ++cell) {
    for (int cr = 0; cr < 4; ++cr) {
      for (const Vec2& dir : {v, -v}) {
        if (!dirFitsCorner(cr, dir)) continue;
        auto conn = traceSeparatrix(c, cell, cr, dir, budget);
        if (!conn) {
          out.result.verdict = TraceVerdict::Unknown;
          return out;
        }
        bool fresh = false;
        for (const auto& seg : conn->segs) {
          if (chordSet.insert({seg.cell, makeChord(seg.a, seg.b)}).second) fresh = true;
        }
        if (fresh) out.result.connections.push_back(std::move(*conn));
      }
    }
  }
  for (const auto& [cell, ch] : chordSet) out.chords[cell].push_back(ch);
  out.result.verdict = TraceVerdict::JS;
  return out;
}

Rational ratGcd(const Rational& a, const Rational& b) {
  mpz_class num, den;
  mpz_gcd(num.get_mpz_t(), a.get_num().get_mpz_t(), b.get_num().get_mpz_t());
  mpz_lcm(den.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
  return Rational(num, den);
}

}  // namespace

TraceResult traceDirection(const PlanarComplex& c, const Direction& th, long budget) {
  if (budget <= 0) budget = defaultBudget(c);
  Vec2 v = c.toInternal.apply(th.rep());
  return traceInternal(c, v, budget).result;
}

std::optional<std::vector<Scalar>> cylinderModuli(const PlanarComplex& c, const Direction& th,
                                                  long budget, TraceVerdict* verdict) {
  if (budget <= 0) budget = defaultBudget(c);
  Vec2 v = c.toInternal.apply(th.rep());
  DirectionData dd = traceInternal(c, v, budget);
  if (verdict) *verdict = dd.result.verdict;
  if (dd.result.verdict != TraceVerdict::JS) return std::nullopt;
  if (dd.result.axis) {
    // Combinatorial cylinders: rows (or columns) of the rectangle complex.
    bool horizontal = dd.result.axisHorizontal;
    int count = 0;
    auto cylOf =
        horizontal ? xCylinders(c.origami, &count) : yCylinders(c.origami, &count);
    std::vector<Scalar> circ(count, Scalar(0));
    std::vector<Scalar> h(count, Scalar(0));
    for (int cell = 0; cell < c.n(); ++cell) {
      int j = cylOf[cell];
      circ[j] += horizontal ? c.width[cell] : c.height[cell];
      h[j] = horizontal ? c.height[cell] : c.width[cell];
    }
    std::vector<Scalar> mods;
    for (int j = 0; j < count; ++j) mods.push_back(h[j] / circ[j]);
    return mods;
  }
  MergedComplex mc = buildMerged(c, dd.chords, false, false);
  std::vector<Scalar> mods;
  for (int g = 0; g < mc.groupCount; ++g) {
    Scalar area(0);
    for (int gf : mc.groupFaces[g]) {
      int cell = mc.cellOfFace(gf);
      const auto& poly = mc.sub[cell].faces[gf - mc.faceBase[cell]];
      Scalar a2(0);
      for (size_t i = 0; i < poly.size(); ++i)
        a2 += cross(mc.sub[cell].pts[poly[i]], mc.sub[cell].pts[poly[(i + 1) % poly.size()]]);
      area += a2 / Scalar(2);
    }
    if (mc.holonomy[g].empty()) throw std::logic_error("cylinder group without holonomy");
    // Holonomies are integer multiples of the circumference vector c*v^.
    Rational gcd(0);
    Scalar ref(0);
    for (const Vec2& delta : mc.holonomy[g]) {
      if (!cross(delta, v).isZero())
        throw std::logic_error("cylinder holonomy not parallel to the direction");
      Scalar t = (!v.x.isZero()) ? delta.x / v.x : delta.y / v.y;
      if (t.sign() < 0) t = -t;
      if (t.isZero()) continue;
      if (ref.isZero()) {
        ref = t;
        gcd = 1;
      } else {
        Scalar q = t / ref;
        if (!q.isRational()) throw std::logic_error("incommensurable cylinder holonomies");
        gcd = ratGcd(gcd, q.ratPart());
      }
    }
    if (ref.isZero()) throw std::logic_error("cylinder with trivial holonomy");
    Scalar circSq = (ref * gcd) * (ref * gcd) * v.norm2();
    mods.push_back(area / circSq);
  }
  return mods;
}

namespace {

// Neighbor probe from an interior point: walks in `dir` until the first cut
// crossing and reports the face beyond.
struct Probe {
  int face;      // global face id
  int dirSign;   // arrival direction as a multiple of the probe direction
};

Probe probeNeighbor(const PlanarComplex& c, const MergedComplex& mc,
                    const std::vector<std::vector<Chord>>& chords, bool coverH, bool coverV,
                    int startCell, Vec2 p, Vec2 dir, long budget) {
  int cell = startCell;
  int flips = 1;
  for (long guard = 0; guard < budget + 16; ++guard) {
    // Nearest chord hit strictly ahead.
    Scalar bestT(0);
    bool haveChord = false;
    for (const auto& ch : chords[cell]) {
      Vec2 d2 = ch.b - ch.a;
      Scalar den = cross(dir, d2);
      if (den.isZero()) continue;
      Vec2 rhs = ch.a - p;
      Scalar t = cross(rhs, d2) / den;
      Scalar u = cross(rhs, dir) / den;
      if (t.sign() <= 0) continue;
      if (u.sign() < 0 || (u - Scalar(1)).sign() > 0) continue;
      if (!haveChord || t < bestT) {
        bestT = t;
        haveChord = true;
      }
    }
    TraceState st{cell, p, dir};
    Hit hit = stepInCell(c, st);
    Scalar tSide =
        !dir.x.isZero() ? (hit.q.x - p.x) / dir.x : (hit.q.y - p.y) / dir.y;
    if (haveChord && bestT < tSide) {
      Vec2 q = p + dir * bestT;
      int f = faceAt(mc.sub[cell], q, dir);
      if (f < 0) throw std::logic_error("probe lost after chord crossing");
      return {mc.globalFace(cell, f), flips};
    }
    if (hit.corner) throw std::logic_error("probe ray hit a vertex");
    bool covered = (hit.side == ST || hit.side == SB) ? coverH : coverV;
    TraceState nxt = crossSide(c, cell, hit.side, hit.q, dir);
    bool flipped = nxt.dir != dir;
    cell = nxt.cell;
    p = nxt.p;
    dir = nxt.dir;
    if (flipped) flips = -flips;
    // On a covered side, or if the crossing point rides on a chord of the new
    // cell, we have crossed a cut.
    bool onChord = false;
    for (const auto& ch : chords[cell]) {
      Vec2 d2 = ch.b - ch.a;
      if (cross(d2, p - ch.a).isZero()) {
        Scalar u = (!d2.x.isZero()) ? (p.x - ch.a.x) / d2.x : (p.y - ch.a.y) / d2.y;
        if (u.sign() >= 0 && (u - Scalar(1)).sign() <= 0) {
          onChord = true;
          break;
        }
      }
    }
    if (covered || onChord) {
      int f = faceAt(mc.sub[cell], p, dir);
      if (f < 0) throw std::logic_error("probe lost after side crossing");
      return {mc.globalFace(cell, f), flips};
    }
  }
  throw std::logic_error("probe did not terminate");
}

}  // namespace

RedecomposeResult redecompose(const PlanarComplex& c, const Direction& phi1,
                              const Direction& phi2, long budget) {
  if (budget <= 0) budget = defaultBudget(c);
  if (phi1 == phi2) throw std::runtime_error("redecompose: directions coincide");
  Vec2 v1 = c.toInternal.apply(phi1.rep());
  Vec2 v2 = c.toInternal.apply(phi2.rep());

  RedecomposeResult out;
  DirectionData d1 = traceInternal(c, v1, budget);
  if (d1.result.verdict != TraceVerdict::JS) {
    out.status = d1.result.verdict;
    out.failedDirection = 1;
    return out;
  }
  DirectionData d2 = traceInternal(c, v2, budget);
  if (d2.result.verdict != TraceVerdict::JS) {
    out.status = d2.result.verdict;
    out.failedDirection = 2;
    return out;
  }

  bool coverH = (d1.result.axis && d1.result.axisHorizontal) ||
                (d2.result.axis && d2.result.axisHorizontal);
  bool coverV = (d1.result.axis && !d1.result.axisHorizontal) ||
                (d2.result.axis && !d2.result.axisHorizontal);
  std::vector<std::vector<Chord>> chords(c.n());
  for (int cell = 0; cell < c.n(); ++cell) {
    chords[cell] = d1.chords[cell];
    chords[cell].insert(chords[cell].end(), d2.chords[cell].begin(), d2.chords[cell].end());
  }

  MergedComplex mc = buildMerged(c, chords, coverH, coverV);
  for (int g = 0; g < mc.groupCount; ++g)
    if (!mc.holonomy[g].empty())
      throw std::logic_error("redecompose: a face group is not a disk");

  // Each group must be a (v1,v2)-parallelogram; read extents and side multiples.
  const Scalar X = cross(v1, v2);
  if (X.isZero()) throw std::runtime_error("redecompose: directions coincide internally");
  Scalar absX = X.sign() > 0 ? X : -X;

  struct NewCell {
    Scalar phi1min, phi1max, phi2min, phi2max;
    Scalar s1, s2;  // side multiples of v1, v2
    int seedFace;   // any face of the group
  };
  std::vector<NewCell> cells(mc.groupCount);
  std::vector<Scalar> areas(mc.groupCount, Scalar(0));
  std::vector<bool> started(mc.groupCount, false);
  for (int gf = 0; gf < mc.totalFaces; ++gf) {
    int g = mc.groupOf[gf];
    int cell = mc.cellOfFace(gf);
    const auto& sd = mc.sub[cell];
    const auto& poly = sd.faces[gf - mc.faceBase[cell]];
    Scalar a2(0);
    for (size_t i = 0; i < poly.size(); ++i) {
      const Vec2& pa = sd.pts[poly[i]];
      const Vec2& pb = sd.pts[poly[(i + 1) % poly.size()]];
      a2 += cross(pa, pb);
      Vec2 dp = mc.dev[gf].apply(pa);
      Scalar f1 = cross(v1, dp), f2 = cross(v2, dp);
      NewCell& nc = cells[g];
      if (!started[g]) {
        nc.phi1min = nc.phi1max = f1;
        nc.phi2min = nc.phi2max = f2;
        nc.seedFace = gf;
        started[g] = true;
      } else {
        nc.phi1min = std::min(nc.phi1min, f1);
        nc.phi1max = std::max(nc.phi1max, f1);
        nc.phi2min = std::min(nc.phi2min, f2);
        nc.phi2max = std::max(nc.phi2max, f2);
      }
    }
    // dev has linear part +-1, so local area is group-frame area.
    areas[g] += a2 / Scalar(2);
  }
  for (int g = 0; g < mc.groupCount; ++g) {
    NewCell& nc = cells[g];
    nc.s1 = (nc.phi2max - nc.phi2min) / absX;
    nc.s2 = (nc.phi1max - nc.phi1min) / absX;
    if (areas[g] != nc.s1 * nc.s2 * absX)
      throw std::logic_error("redecompose: face group is not a parallelogram");
  }

  // Adjacency with signs: probe from each group's center on both sheets.
  ExtendedOrigami newO;
  newO.n = mc.groupCount;
  newO.moduli.resize(newO.n);
  SignedPerm nx(newO.n), ny(newO.n);
  for (int g = 0; g < mc.groupCount; ++g) {
    newO.moduli[g] = cells[g].s2 / cells[g].s1;

    // Center in group frame, then in a member face's local coordinates.
    Scalar c1 = (cells[g].phi1min + cells[g].phi1max) / Scalar(2);
    Scalar c2 = (cells[g].phi2min + cells[g].phi2max) / Scalar(2);
    // Solve cross(v1,P)=c1, cross(v2,P)=c2 (Cramer).
    Scalar px = (c1 * v2.x - c2 * v1.x) / X;
    Scalar py = (c1 * v2.y - c2 * v1.y) / X;
    Vec2 centerGroup(px, py);
    int home = -1;
    Vec2 centerLocal;
    for (int gf : mc.groupFaces[g]) {
      int cell = mc.cellOfFace(gf);
      Vec2 local = mc.dev[gf].sign > 0 ? centerGroup - mc.dev[gf].off
                                       : mc.dev[gf].off - centerGroup;
      if (inFaceClosed(mc.sub[cell], gf - mc.faceBase[cell], local)) {
        home = gf;
        centerLocal = local;
        break;
      }
    }
    if (home == -1) throw std::logic_error("redecompose: center not found in its group");
    int homeCell = mc.cellOfFace(home);

    auto probe = [&](const Vec2& target, SignedPerm& perm, int sheetSign) {
      Vec2 localDir = mc.dev[home].applyDir(target) * Scalar(sheetSign);
      // localDir maps to sheetSign*target under dev[home].
      Probe pr = probeNeighbor(c, mc, chords, coverH, coverV, homeCell, centerLocal,
                               localDir, budget);
      int ng = mc.groupOf[pr.face];
      // Arrival direction in the neighbor's group frame.
      int arrSign = mc.dev[pr.face].sign * mc.dev[home].sign * pr.dirSign * sheetSign;
      SignedIndex from{g + 1, sheetSign};
      SignedIndex to{ng + 1, arrSign};
      perm.set(from.idx(), to.idx());
    };
    probe(v1, nx, +1);
    probe(v1, nx, -1);
    probe(v2, ny, +1);
    probe(v2, ny, -1);
  }
  newO.x = nx;
  newO.y = ny;
  requireValid(newO);

  // Vertex correspondence: group corner p0+s1v1+s2v2 <-> commutator cycle
  // through (g,+), p0 <-> (g,-).
  auto newClasses = vertexClasses(newO);
  std::vector<int> oldClassOfNewClass(newClasses.size(), -1);
  auto cornerOldClass = [&](int g, const Scalar& f1, const Scalar& f2) {
    Scalar px = (f1 * v2.x - f2 * v1.x) / X;
    Scalar py = (f1 * v2.y - f2 * v1.y) / X;
    Vec2 pt(px, py);
    for (int gf : mc.groupFaces[g]) {
      int cell = mc.cellOfFace(gf);
      Vec2 local = mc.dev[gf].sign > 0 ? pt - mc.dev[gf].off : mc.dev[gf].off - pt;
      if (!inFaceClosed(mc.sub[cell], gf - mc.faceBase[cell], local)) continue;
      for (int cr = 0; cr < 4; ++cr) {
        if (local == c.cornerPoint(cell, cr)) return c.cornerClass[c.corner(cell, cr)];
      }
    }
    throw std::logic_error("redecompose: new-cell corner is not an old vertex");
  };
  // With X > 0 the far corner p0+s1v1+s2v2 sits at (phi1max, phi2min) and p0
  // at (phi1min, phi2max); X < 0 swaps them.
  const bool posX = X.sign() > 0;
  for (int ci = 0; ci < (int)newClasses.size(); ++ci) {
    for (const auto& cyc : newClasses[ci].cycles) {
      for (int v : cyc) {
        SignedIndex sgn = SignedIndex::fromIdx(v);
        int g = sgn.cell - 1;
        bool far = sgn.sign > 0;  // (g,+) winds around the far corner
        if (!posX) far = !far;
        int oldCls = far ? cornerOldClass(g, cells[g].phi1max, cells[g].phi2min)
                         : cornerOldClass(g, cells[g].phi1min, cells[g].phi2max);
        if (oldClassOfNewClass[ci] == -1)
          oldClassOfNewClass[ci] = oldCls;
        else if (oldClassOfNewClass[ci] != oldCls)
          throw std::logic_error("redecompose: vertex class correspondence not single-valued");
      }
    }
  }
  std::vector<int> newClassOfOldClass(c.numClasses, -1);
  for (int ci = 0; ci < (int)newClasses.size(); ++ci) {
    int oc = oldClassOfNewClass[ci];
    if (oc < 0 || newClassOfOldClass[oc] != -1)
      throw std::logic_error("redecompose: vertex class correspondence not bijective");
    newClassOfOldClass[oc] = ci;
  }

  MarkTuple newMarks;
  for (int mcls : c.markComplexClass) {
    int nc = newClassOfOldClass[mcls];
    newMarks.reps.push_back(newClasses[nc].cycles[0]);
  }

  // Canonicalize; the anchor for k is canonical cell 1.
  CanonicalForm cf = canonicalForm(newO, newMarks);
  int anchor = -1;
  for (int g = 0; g < newO.n; ++g) {
    if (SignedIndex::fromIdx(cf.toCanonical[SignedIndex{g + 1, +1}.idx()]).cell == 1) {
      anchor = g;
      break;
    }
  }
  Scalar ratio = cells[anchor].s2 / cells[anchor].s1;
  Scalar kSq = ratio * ratio * phi2.rep().norm2() / phi1.rep().norm2();

  out.status = TraceVerdict::JS;
  out.pdec.theta1 = phi1;
  out.pdec.theta2 = phi2;
  out.pdec.kSq = kSq;
  out.pdec.origami = cf.relabeled;
  out.pdec.marks = cf.marks;
  return out;
}

}  // namespace veech
