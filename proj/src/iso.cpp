#include "veech/iso.hpp"

#include <algorithm>
#include <stdexcept>

namespace veech {

namespace {

std::vector<int> canonicalCycle(std::vector<int> cyc) {
  auto it = std::min_element(cyc.begin(), cyc.end());
  std::rotate(cyc.begin(), it, cyc.end());
  return cyc;
}

// Canonical name of the class of `rep` after applying the point map `f`.
std::vector<int> mapClassName(const OVertexClass& cls, const std::vector<int>& f) {
  std::vector<std::vector<int>> mapped;
  for (const auto& cyc : cls.cycles) {
    std::vector<int> m;
    m.reserve(cyc.size());
    for (int v : cyc) m.push_back(f[v]);
    mapped.push_back(canonicalCycle(std::move(m)));
  }
  return *std::min_element(mapped.begin(), mapped.end());
}

}  // namespace

int classIndexOfRep(const ExtendedOrigami& o, const std::vector<OVertexClass>& classes,
                    const std::vector<int>& rep) {
  if (rep.empty()) throw std::runtime_error("empty mark cycle");
  auto canon = canonicalCycle(rep);
  for (int ci = 0; ci < (int)classes.size(); ++ci) {
    for (const auto& cyc : classes[ci].cycles) {
      if (canonicalCycle(cyc) == canon) return ci;
    }
  }
  throw std::runtime_error("mark is not a commutator cycle of the origami");
}

namespace {

struct GenTables {
  SignedPerm x, xi, y, yi;
  explicit GenTables(const ExtendedOrigami& o)
      : x(o.x), xi(o.x.inverse()), y(o.y), yi(o.y.inverse()) {}
};

// Propagates sigma from sigma[base1] = base2 along the Schreier graph; the
// extension is unique by transitivity. Returns false on conflict.
bool propagate(const ExtendedOrigami& o1, const GenTables& t1, const GenTables& t2, int base1,
               int base2, std::vector<int>& sigma) {
  const int m = 2 * o1.n;
  sigma.assign(m, -1);
  auto assign = [&](int from, int to) {
    if (sigma[from] == -1) {
      sigma[from] = to;
      return 2;  // new
    }
    return sigma[from] == to ? 1 : 0;
  };
  std::vector<int> queue;
  auto push = [&](int from, int to) {
    int r = assign(from, to);
    if (r == 0) return false;
    if (r == 2) {
      int rn = assign(negIdx(from), negIdx(to));
      if (rn == 0) return false;
      queue.push_back(from);
      if (rn == 2) queue.push_back(negIdx(from));
    }
    return true;
  };
  if (!push(base1, base2)) return false;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int v = queue[qi];
    int sv = sigma[v];
    if (!push(t1.x.map(v), t2.x.map(sv))) return false;
    if (!push(t1.xi.map(v), t2.xi.map(sv))) return false;
    if (!push(t1.y.map(v), t2.y.map(sv))) return false;
    if (!push(t1.yi.map(v), t2.yi.map(sv))) return false;
  }
  for (int v : sigma)
    if (v == -1) return false;  // cannot happen for connected data
  std::vector<char> hit(m, 0);
  for (int v : sigma) {
    if (hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

}  // namespace

std::optional<Isomorphism> findIsomorphism(const ExtendedOrigami& o1, const ExtendedOrigami& o2,
                                           const MarkTuple& marks1, const MarkTuple& marks2,
                                           const IsoFilter& accept) {
  if (o1.n != o2.n) return std::nullopt;
  if (marks1.size() != marks2.size()) throw std::runtime_error("mark tuples differ in length");
  GenTables t1(o1), t2(o2);

  std::vector<OVertexClass> cls1, cls2;
  std::vector<int> markCls1, markCls2;
  if (!marks1.empty()) {
    cls1 = vertexClasses(o1);
    cls2 = vertexClasses(o2);
    for (const auto& r : marks1.reps) markCls1.push_back(classIndexOfRep(o1, cls1, r));
    for (const auto& r : marks2.reps) markCls2.push_back(classIndexOfRep(o2, cls2, r));
  }
  std::vector<int> pointCls2 = marks1.empty() ? std::vector<int>() : classOfPoint(o2, cls2);

  const int base1 = 0;  // (1,+)
  for (int base2 = 0; base2 < 2 * o2.n; ++base2) {
    std::vector<int> sigma;
    if (!propagate(o1, t1, t2, base1, base2, sigma)) continue;
    // Projective moduli.
    Scalar c = o1.moduli[0] / o2.moduli[SignedIndex::fromIdx(sigma[0]).cell - 1];
    bool ok = true;
    for (int cell = 1; cell <= o1.n && ok; ++cell) {
      int im = SignedIndex::fromIdx(sigma[SignedIndex{cell, +1}.idx()]).cell;
      ok = o1.moduli[cell - 1] == c * o2.moduli[im - 1];
    }
    if (!ok) continue;
    // Labeled marks: sigma maps the i-th marked class of o1 onto the i-th of o2.
    for (size_t i = 0; i < markCls1.size() && ok; ++i) {
      int rep = cls1[markCls1[i]].cycles[0][0];
      ok = pointCls2[sigma[rep]] == markCls2[i];
    }
    if (!ok) continue;
    Isomorphism iso{std::move(sigma), c};
    if (accept && !accept(iso)) continue;
    return iso;
  }
  return std::nullopt;
}

void verifyIsomorphism(const ExtendedOrigami& o1, const ExtendedOrigami& o2,
                       const MarkTuple& marks1, const MarkTuple& marks2, const Isomorphism& iso) {
  const int m = 2 * o1.n;
  if (o1.n != o2.n || (int)iso.sigma.size() != m) throw std::logic_error("iso: size mismatch");
  std::vector<char> hit(m, 0);
  for (int v : iso.sigma) {
    if (v < 0 || v >= m || hit[v]) throw std::logic_error("iso: sigma not bijective");
    hit[v] = 1;
  }
  for (int v = 0; v < m; ++v) {
    if (iso.sigma[negIdx(v)] != negIdx(iso.sigma[v]))
      throw std::logic_error("iso: sigma does not commute with negation");
    if (iso.sigma[o1.x.map(v)] != o2.x.map(iso.sigma[v]))
      throw std::logic_error("iso: x equivariance fails");
    if (iso.sigma[o1.y.map(v)] != o2.y.map(iso.sigma[v]))
      throw std::logic_error("iso: y equivariance fails");
  }
  for (int cell = 1; cell <= o1.n; ++cell) {
    int im = SignedIndex::fromIdx(iso.sigma[SignedIndex{cell, +1}.idx()]).cell;
    if (o1.moduli[cell - 1] != iso.rescale * o2.moduli[im - 1])
      throw std::logic_error("iso: projective moduli mismatch");
  }
  if (!marks1.empty()) {
    auto cls1 = vertexClasses(o1);
    auto cls2 = vertexClasses(o2);
    auto pc2 = classOfPoint(o2, cls2);
    for (size_t i = 0; i < marks1.size(); ++i) {
      int c1 = classIndexOfRep(o1, cls1, marks1.reps[i]);
      int c2 = classIndexOfRep(o2, cls2, marks2.reps[i]);
      if (pc2[iso.sigma[cls1[c1].cycles[0][0]]] != c2)
        throw std::logic_error("iso: marks are not matched componentwise");
    }
  }
}

namespace {

struct Relabeling {
  std::vector<int> tau;  // old idx -> new idx
  ExtendedOrigami out;
};

Relabeling relabelFrom(const ExtendedOrigami& o, const GenTables& t, int base) {
  const int m = 2 * o.n;
  std::vector<int> tau(m, -1);
  int nextCell = 1;
  std::vector<int> queue;
  auto visit = [&](int v) {
    if (tau[v] != -1) return;
    tau[v] = SignedIndex{nextCell, +1}.idx();
    tau[negIdx(v)] = SignedIndex{nextCell, -1}.idx();
    ++nextCell;
    queue.push_back(v);
    queue.push_back(negIdx(v));
  };
  visit(base);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int v = queue[qi];
    visit(t.x.map(v));
    visit(t.xi.map(v));
    visit(t.y.map(v));
    visit(t.yi.map(v));
  }
  if (nextCell != o.n + 1) throw std::logic_error("relabel: origami not connected");
  Relabeling r;
  r.tau = tau;
  r.out.n = o.n;
  r.out.moduli.resize(o.n);
  Scalar baseMod = o.moduli[SignedIndex::fromIdx(base).cell - 1];
  for (int cell = 1; cell <= o.n; ++cell) {
    int newCell = SignedIndex::fromIdx(tau[SignedIndex{cell, +1}.idx()]).cell;
    r.out.moduli[newCell - 1] = o.moduli[cell - 1] / baseMod;
  }
  SignedPerm nx(o.n), ny(o.n);
  for (int v = 0; v < m; ++v) {
    nx.set(tau[v], tau[o.x.map(v)]);
    ny.set(tau[v], tau[o.y.map(v)]);
  }
  r.out.x = nx;
  r.out.y = ny;
  return r;
}

std::string encode(const ExtendedOrigami& o, const std::vector<std::vector<int>>& markNames) {
  std::string s = "n=" + std::to_string(o.n) + ";x=";
  for (int cell = 1; cell <= o.n; ++cell) {
    s += std::to_string(o.x.map(SignedIndex{cell, +1}).asInt());
    s += ',';
  }
  s += ";y=";
  for (int cell = 1; cell <= o.n; ++cell) {
    s += std::to_string(o.y.map(SignedIndex{cell, +1}).asInt());
    s += ',';
  }
  s += ";M=";
  for (const auto& mscalar : o.moduli) s += mscalar.str() + ",";
  s += ";marks=";
  for (const auto& name : markNames) {
    s += "[";
    for (int v : name) s += SignedIndex::fromIdx(v).str() + ",";
    s += "]";
  }
  return s;
}

}  // namespace

CanonicalForm canonicalForm(const ExtendedOrigami& o, const MarkTuple& marks) {
  GenTables t(o);
  std::vector<OVertexClass> cls;
  std::vector<int> markCls;
  if (!marks.empty()) {
    cls = vertexClasses(o);
    for (const auto& r : marks.reps) markCls.push_back(classIndexOfRep(o, cls, r));
  }
  std::optional<CanonicalForm> best;
  for (int base = 0; base < 2 * o.n; ++base) {
    Relabeling r = relabelFrom(o, t, base);
    std::vector<std::vector<int>> markNames;
    for (int ci : markCls) markNames.push_back(mapClassName(cls[ci], r.tau));
    std::string key = encode(r.out, markNames);
    if (!best || key < best->key) {
      CanonicalForm cf;
      cf.key = std::move(key);
      cf.relabeled = std::move(r.out);
      cf.toCanonical = std::move(r.tau);
      cf.marks.reps = std::move(markNames);
      best = std::move(cf);
    }
  }
  return *best;
}

}  // namespace veech
