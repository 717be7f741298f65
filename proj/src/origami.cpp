#include "veech/origami.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace veech {

std::string SignedIndex::str() const {
  return sign < 0 ? std::to_string(cell) + "-" : std::to_string(cell);
}

SignedPerm::SignedPerm(int n) : img_(2 * n) { std::iota(img_.begin(), img_.end(), 0); }

SignedPerm SignedPerm::fromCycles(int n, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> img(2 * n, -1);
  auto assign = [&](int from, int to) {
    if (from < 0 || from >= 2 * n) throw ParseError("cycle entry out of range");
    if (img[from] != -1 && img[from] != to)
      throw ParseError("conflicting cycle assignments at " + SignedIndex::fromIdx(from).str());
    img[from] = to;
  };
  for (const auto& cyc : cycles) {
    if (cyc.empty()) throw ParseError("empty cycle");
    for (size_t i = 0; i < cyc.size(); ++i) {
      int v = cyc[i], w = cyc[(i + 1) % cyc.size()];
      if (v == 0 || w == 0) throw ParseError("cycle entries must be nonzero");
      if (std::abs(v) > n || std::abs(w) > n) throw ParseError("cycle entry exceeds n");
      int from = SignedIndex::fromInt(v).idx();
      int to = SignedIndex::fromInt(w).idx();
      assign(from, to);
      // Mirror assignment forced by equivariance: s(neg to) = neg from.
      assign(negIdx(to), negIdx(from));
    }
  }
  for (int i = 0; i < 2 * n; ++i)
    if (img[i] == -1) img[i] = i;  // unmentioned points are fixed
  SignedPerm p;
  p.img_ = std::move(img);
  if (!p.isBijective()) throw ParseError("cycles do not describe a bijection");
  return p;
}

bool SignedPerm::isBijective() const {
  std::vector<char> seen(img_.size(), 0);
  for (int v : img_) {
    if (v < 0 || v >= (int)img_.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

bool SignedPerm::isEquivariant() const {
  for (int i = 0; i < (int)img_.size(); ++i) {
    if (img_[negIdx(img_[i])] != negIdx(i)) return false;
  }
  return true;
}

SignedPerm SignedPerm::inverse() const {
  SignedPerm p;
  p.img_.resize(img_.size());
  for (int i = 0; i < (int)img_.size(); ++i) p.img_[img_[i]] = i;
  return p;
}

SignedPerm SignedPerm::compose(const SignedPerm& then) const {
  SignedPerm p;
  p.img_.resize(img_.size());
  for (int i = 0; i < (int)img_.size(); ++i) p.img_[i] = then.img_[img_[i]];
  return p;
}

std::vector<std::vector<int>> SignedPerm::cycles() const {
  std::vector<char> seen(img_.size(), 0);
  std::vector<std::vector<int>> out;
  for (int i = 0; i < (int)img_.size(); ++i) {
    if (seen[i]) continue;
    std::vector<int> cyc;
    int j = i;
    do {
      seen[j] = 1;
      cyc.push_back(j);
      j = img_[j];
    } while (j != i);
    out.push_back(std::move(cyc));
  }
  return out;
}

std::vector<std::vector<int>> SignedPerm::halfCycles() const {
  auto all = cycles();
  std::vector<std::vector<int>> out;
  std::set<int> drop;
  for (const auto& cyc : all) {
    if (drop.count(cyc[0])) continue;
    // Mirror cycle: reversed order, negated entries.
    std::vector<int> mir;
    for (auto it = cyc.rbegin(); it != cyc.rend(); ++it) mir.push_back(negIdx(*it));
    int mirMin = *std::min_element(mir.begin(), mir.end());
    if (mirMin != cyc[0]) drop.insert(mirMin);  // self-mirror cycles appear once
    out.push_back(cyc);
  }
  return out;
}

std::string SignedPerm::cycleStr() const {
  std::string s;
  for (const auto& cyc : halfCycles()) {
    if (cyc.size() == 1 && img_[cyc[0]] == cyc[0] && SignedIndex::fromIdx(cyc[0]).sign < 0)
      continue;  // fixed negative-sheet points add no information
    s += "(";
    for (size_t i = 0; i < cyc.size(); ++i) {
      if (i) s += " ";
      s += SignedIndex::fromIdx(cyc[i]).str();
    }
    s += ")";
  }
  return s.empty() ? "()" : s;
}

Word::Word(std::vector<int> letters) : ls_(std::move(letters)) {
  std::vector<int> red;
  for (int l : ls_) {
    if (l == 0 || std::abs(l) > 2) throw std::invalid_argument("bad word letter");
    if (!red.empty() && red.back() == -l)
      red.pop_back();
    else
      red.push_back(l);
  }
  ls_ = std::move(red);
}

Word Word::parse(const std::string& text) {
  std::vector<int> ls;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (std::isspace((unsigned char)c) || c == '*' || c == '.') continue;
    int l;
    switch (c) {
      case 'x': l = 1; break;
      case 'X': l = -1; break;
      case 'y': l = 2; break;
      case 'Y': l = -2; break;
      default: throw ParseError(std::string("bad word letter '") + c + "'");
    }
    if (i + 3 < text.size() && text.compare(i + 1, 3, "^-1") == 0) {
      l = -l;
      i += 3;
    }
    ls.push_back(l);
  }
  return Word(ls);
}

Word Word::inverse() const {
  std::vector<int> out(ls_.rbegin(), ls_.rend());
  for (int& l : out) l = -l;
  return Word(out);
}

Word Word::gammaMinusI() const {
  std::vector<int> out = ls_;
  for (int& l : out) l = -l;
  return Word(out);
}

Word Word::concat(const Word& o) const {
  std::vector<int> out = ls_;
  out.insert(out.end(), o.ls_.begin(), o.ls_.end());
  return Word(out);
}

std::string Word::str() const {
  if (ls_.empty()) return "1";
  std::string s;
  for (int l : ls_) s += (l == 1 ? 'x' : l == -1 ? 'X' : l == 2 ? 'y' : 'Y');
  return s;
}

long ExtendedOrigami::fieldD() const {
  long d = 1;
  for (const auto& m : moduli)
    if (m.fieldD() != 1) d = m.fieldD();
  return d;
}

std::string ValidationReport::summary() const {
  if (ok) return "valid";
  std::string s;
  for (const auto& f : failures) {
    if (!s.empty()) s += "; ";
    s += f.axiom + ": " + f.message;
  }
  return s;
}

namespace {

int applyLetter(const ExtendedOrigami& o, int letter, int idx) {
  switch (letter) {
    case 1: return o.x.map(idx);
    case -1: return o.x.inverse().map(idx);
    case 2: return o.y.map(idx);
    case -2: return o.y.inverse().map(idx);
    default: throw std::invalid_argument("bad letter");
  }
}

// Precomputed letter tables, for hot paths.
struct LetterTables {
  SignedPerm x, xi, y, yi;
  explicit LetterTables(const ExtendedOrigami& o)
      : x(o.x), xi(o.x.inverse()), y(o.y), yi(o.y.inverse()) {}
  int apply(int letter, int idx) const {
    switch (letter) {
      case 1: return x.map(idx);
      case -1: return xi.map(idx);
      case 2: return y.map(idx);
      default: return yi.map(idx);
    }
  }
};

}  // namespace

ValidationReport validate(const ExtendedOrigami& o) {
  ValidationReport rep;
  auto fail = [&](const std::string& axiom, const std::string& msg) {
    rep.ok = false;
    rep.failures.push_back({axiom, msg});
  };
  if (o.n <= 0) {
    fail("structure", "n must be positive");
    return rep;
  }
  if ((int)o.moduli.size() != o.n) {
    fail("structure", "moduli size != n");
    return rep;
  }
  if (o.x.n() != o.n || o.y.n() != o.n) {
    fail("structure", "permutation size != 2n");
    return rep;
  }
  for (int i = 0; i < o.n; ++i) {
    if (o.moduli[i].sign() <= 0) {
      fail("positivity", "modulus of cell " + std::to_string(i + 1) + " is not positive");
      break;
    }
  }
  if (!o.x.isBijective() || !o.y.isBijective()) {
    fail("structure", "x or y is not bijective");
    return rep;
  }
  if (!o.x.isEquivariant()) fail("equivariance", "x violates neg.x.neg = x^-1");
  if (!o.y.isEquivariant()) fail("equivariance", "y violates neg.y.neg = y^-1");
  for (int i = 0; i < 2 * o.n; ++i) {
    if (o.y.map(i) == negIdx(i)) {
      fail("non-branching", "y(s) = -s at s = " + SignedIndex::fromIdx(i).str());
      break;
    }
  }
  // Connectivity with respect to first components.
  {
    std::vector<char> cellSeen(o.n + 1, 0);
    std::vector<int> stack = {0};
    std::vector<char> seen(2 * o.n, 0);
    seen[0] = 1;
    cellSeen[1] = 1;
    LetterTables lt(o);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int letter : {1, -1, 2, -2}) {
        int w = lt.apply(letter, v);
        if (!seen[w]) {
          seen[w] = 1;
          cellSeen[SignedIndex::fromIdx(w).cell] = 1;
          stack.push_back(w);
        }
      }
    }
    for (int c = 1; c <= o.n; ++c) {
      if (!cellSeen[c]) {
        fail("connectivity", "cell " + std::to_string(c) + " is not reachable from cell 1");
        break;
      }
    }
  }
  if (!rep.ok) return rep;
  // Consistency (K_O trivial on the stabilizer of (1,+)), via the potential.
  auto hr = solveHeights(o);
  if (auto* bad = std::get_if<Inconsistent>(&hr)) {
    fail("consistency",
         "K(1, " + bad->witnessCycle.str() + ") = " + bad->kValue.str() + " != 1");
  }
  return rep;
}

void requireValid(const ExtendedOrigami& o) {
  auto rep = validate(o);
  if (!rep.ok) throw std::runtime_error("invalid extended origami: " + rep.summary());
}

SignedIndex monodromyEval(const ExtendedOrigami& o, const Word& w, SignedIndex s) {
  int idx = s.idx();
  for (int letter : w.letters()) idx = applyLetter(o, letter, idx);
  return SignedIndex::fromIdx(idx);
}

SignedPerm monodromyPerm(const ExtendedOrigami& o, const Word& w) {
  SignedPerm p(o.n);
  LetterTables lt(o);
  for (int i = 0; i < 2 * o.n; ++i) {
    int idx = i;
    for (int letter : w.letters()) idx = lt.apply(letter, idx);
    p.set(i, idx);
  }
  return p;
}

namespace {

// Multiplicative K-factor of a single letter applied at `idx`; also advances idx.
Scalar kStep(const ExtendedOrigami& o, const LetterTables& lt, int letter, int& idx) {
  int next = lt.apply(letter, idx);
  const Scalar& mCur = o.moduli[SignedIndex::fromIdx(idx).cell - 1];
  const Scalar& mNext = o.moduli[SignedIndex::fromIdx(next).cell - 1];
  idx = next;
  if (letter == 1 || letter == -1) return mCur / mNext;
  return mNext / mCur;
}

}  // namespace

Scalar kCocycle(const ExtendedOrigami& o, SignedIndex s, const Word& w) {
  LetterTables lt(o);
  Scalar k(1);
  int idx = s.idx();
  for (int letter : w.letters()) k *= kStep(o, lt, letter, idx);
  return k;
}

std::vector<int> xCylinders(const ExtendedOrigami& o, int* count) {
  std::vector<int> parent(o.n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (int i = 0; i < 2 * o.n; ++i) {
    int a = SignedIndex::fromIdx(i).cell - 1;
    int b = SignedIndex::fromIdx(o.x.map(i)).cell - 1;
    parent[find(a)] = find(b);
  }
  std::vector<int> id(o.n, -1);
  int k = 0;
  for (int i = 0; i < o.n; ++i) {
    int r = find(i);
    if (id[r] == -1) id[r] = k++;
    id[i] = id[r];
  }
  if (count) *count = k;
  return id;
}

std::vector<int> yCylinders(const ExtendedOrigami& o, int* count) {
  ExtendedOrigami swapped = o;
  std::swap(swapped.x, swapped.y);
  return xCylinders(swapped, count);
}

HeightResult solveHeights(const ExtendedOrigami& o) {
  const int m = 2 * o.n;
  LetterTables lt(o);
  std::vector<Scalar> S(m, Scalar(0));
  std::vector<char> seen(m, 0);
  std::vector<Word> path(m);  // tree word from the component base

  auto modOf = [&](int idx) -> const Scalar& { return o.moduli[SignedIndex::fromIdx(idx).cell - 1]; };

  for (int base = 0; base < m; ++base) {
    if (seen[base]) continue;
    // Mirror component gets the mirrored potential.
    S[base] = seen[negIdx(base)] ? S[negIdx(base)] : Scalar(1);
    seen[base] = 1;
    std::vector<int> queue = {base};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int v = queue[qi];
      for (int letter : {1, -1, 2, -2}) {
        int w = lt.apply(letter, v);
        int tmp = v;
        Scalar f = kStep(o, lt, letter, tmp);
        Scalar cand = S[v] * f;
        if (!seen[w]) {
          seen[w] = 1;
          S[w] = cand;
          path[w] = path[v].concat(Word({letter}));
          queue.push_back(w);
        } else if (S[w] != cand) {
          Word witness = path[v].concat(Word({letter})).concat(path[w].inverse());
          return Inconsistent{witness, kCocycle(o, SignedIndex::fromIdx(base), witness)};
        }
      }
    }
  }
  // Sheets of one cell must carry equal area.
  for (int c = 0; c < o.n; ++c) {
    if (S[2 * c] != S[2 * c + 1]) {
      Word witness = path[2 * c + 1].concat(path[2 * c].inverse().gammaMinusI());
      return Inconsistent{witness, kCocycle(o, SignedIndex{c + 1, +1}, witness)};
    }
  }

  HeightSolution sol;
  sol.areaPotential = S;
  int nx = 0, ny = 0;
  sol.xCylOf = xCylinders(o, &nx);
  sol.yCylOf = yCylinders(o, &ny);
  sol.h1.assign(nx, Scalar(0));
  sol.h2.assign(ny, Scalar(0));
  // Bipartite propagation of h1[j]/h2[k] = M_cell over the cylinder graph;
  // consistency is forced by the potential (h1^2 tracks S*M, h2^2 tracks S/M).
  std::vector<char> hx(nx, 0), hy(ny, 0);
  sol.h1[sol.xCylOf[0]] = Scalar(1);
  hx[sol.xCylOf[0]] = 1;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int c = 0; c < o.n; ++c) {
      int j = sol.xCylOf[c], k = sol.yCylOf[c];
      if (hx[j] && !hy[k]) {
        sol.h2[k] = sol.h1[j] / o.moduli[c];
        hy[k] = 1;
        progress = true;
      } else if (hy[k] && !hx[j]) {
        sol.h1[j] = sol.h2[k] * o.moduli[c];
        hx[j] = 1;
        progress = true;
      } else if (hx[j] && hy[k]) {
        if (sol.h1[j] != sol.h2[k] * o.moduli[c])
          throw std::logic_error("height propagation contradicts consistent potential");
      }
    }
  }
  for (char f : hx)
    if (!f) throw std::logic_error("disconnected cylinder graph on connected origami");
  for (char f : hy)
    if (!f) throw std::logic_error("disconnected cylinder graph on connected origami");
  return sol;
}

bool isSignNormal(const ExtendedOrigami& o) {
  for (int i = 0; i < 2 * o.n; ++i) {
    if ((o.x.map(i) & 1) != (i & 1)) return false;
  }
  return true;
}

ExtendedOrigami normalizeSigns(const ExtendedOrigami& o) {
  std::vector<int> flip(o.n + 1, -1);  // -1 unknown, else 0/1
  for (int start = 1; start <= o.n; ++start) {
    if (flip[start] != -1) continue;
    flip[start] = 0;
    int cell = start;
    while (true) {
      SignedIndex cur{cell, flip[cell] ? -1 : +1};
      SignedIndex img = o.x.map(cur);
      int need = img.sign < 0 ? 1 : 0;  // flip target so x preserves sign
      if (flip[img.cell] == -1) {
        flip[img.cell] = need;
      } else if (flip[img.cell] != need) {
        throw std::runtime_error("sign normalization impossible: x-cylinder through cell " +
                                 std::to_string(start) + " has odd flip parity");
      }
      if (img.cell == start) break;
      cell = img.cell;
    }
  }
  SignedPerm tau(o.n);
  for (int c = 1; c <= o.n; ++c) {
    if (flip[c] == 1) {
      tau.set(SignedIndex{c, +1}.idx(), SignedIndex{c, -1}.idx());
      tau.set(SignedIndex{c, -1}.idx(), SignedIndex{c, +1}.idx());
    }
  }
  ExtendedOrigami out = o;
  out.x = tau.compose(o.x).compose(tau);  // tau then x then tau
  out.y = tau.compose(o.y).compose(tau);
  return out;
}

SchreierData stabilizer(const ExtendedOrigami& o, SignedIndex base) {
  LetterTables lt(o);
  SchreierData out;
  const int m = 2 * o.n;
  std::vector<int> pos(m, -1);
  out.orbit.push_back(base.idx());
  pos[base.idx()] = 0;
  out.transversal.push_back(Word());
  struct Edge {
    int from, letter, to;
  };
  std::vector<Edge> nonTree;
  for (size_t qi = 0; qi < out.orbit.size(); ++qi) {
    int v = out.orbit[qi];
    for (int letter : {1, 2}) {
      int w = lt.apply(letter, v);
      if (pos[w] == -1) {
        pos[w] = (int)out.orbit.size();
        out.orbit.push_back(w);
        out.transversal.push_back(out.transversal[qi].concat(Word({letter})));
      } else {
        nonTree.push_back({v, letter, w});
      }
    }
  }
  for (const auto& e : nonTree) {
    Word g = out.transversal[pos[e.from]].concat(Word({e.letter})).concat(
        out.transversal[pos[e.to]].inverse());
    if (!g.empty()) out.generators.push_back(g);
  }
  out.index = (int)out.orbit.size();
  std::set<int> cells;
  for (int v : out.orbit) cells.insert(SignedIndex::fromIdx(v).cell);
  out.firstComponentOrbitSize = (int)cells.size();
  return out;
}

bool isAbelian(const ExtendedOrigami& o) {
  ExtendedOrigami nrm = isSignNormal(o) ? o : normalizeSigns(o);
  for (int i = 0; i < 2 * nrm.n; ++i) {
    if ((nrm.y.map(i) & 1) != (i & 1)) return false;
  }
  return true;
}

}  // namespace veech
