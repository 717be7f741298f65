#include "veech/affine.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace veech {

PDecomposition act(const Mat2& a, const PDecomposition& p) {
  if (!a.invertible()) throw std::domain_error("act: singular matrix");
  PDecomposition out = p;
  out.theta1 = directionImage(a, p.theta1);
  out.theta2 = directionImage(a, p.theta2);
  out.kSq = p.kSq * rhoSq(a, p.theta1, p.theta2);
  return out;
}

namespace {

std::string spectrumStr(const CylinderSpectrum& s) {
  std::string out = "n=" + std::to_string(s.count) + " [";
  for (size_t i = 0; i < s.moduli.size(); ++i) {
    if (i) out += ",";
    out += s.moduli[i].str();
  }
  return out + "]";
}

}  // namespace

PrefilterResult prefilter(const PlanarComplex& c, const Mat2& a, long budget) {
  if (!a.invertible()) throw std::domain_error("prefilter: singular matrix");
  PrefilterResult out;
  const Direction dirs[2] = {c.theta1, c.theta2};
  for (int i = 0; i < 2; ++i) {
    Direction image = directionImage(a, dirs[i]);
    TraceVerdict v1 = TraceVerdict::JS, v2 = TraceVerdict::JS;
    auto base = cylinderModuli(c, dirs[i], budget, &v1);
    auto img = cylinderModuli(c, image, budget, &v2);
    if (!base || v1 != TraceVerdict::JS)
      throw std::logic_error("prefilter: base direction of the decomposition is not JS");
    if (v2 == TraceVerdict::Unknown) {
      out.status = PrefilterStatus::Unknown;
      out.witness = "budget exhausted tracing direction " + image.str();
      return out;
    }
    if (v2 == TraceVerdict::NotJS) {
      out.status = PrefilterStatus::Fail;
      out.witness = "direction " + image.str() + " is not Jenkins-Strebel";
      return out;
    }
    auto sBase = projectiveSpectrum(*base);
    auto sImg = projectiveSpectrum(*img);
    if (sBase.count != sImg.count || sBase.moduli != sImg.moduli) {
      out.status = PrefilterStatus::Fail;
      out.witness = "spectrum of " + dirs[i].str() + " is " + spectrumStr(sBase) + " but of " +
                    image.str() + " is " + spectrumStr(sImg);
      return out;
    }
  }
  out.status = PrefilterStatus::Pass;
  return out;
}

PrefilterResult prefilter(const PDecomposition& p, const Mat2& a, long budget) {
  return prefilter(realize(p), a, budget);
}

MembershipVerdict membership(const PlanarComplex& c, const PDecomposition& p, const Mat2& a,
                             bool marked, long budget) {
  if (!a.invertible()) throw std::domain_error("membership: singular matrix");
  MembershipVerdict out;
  out.rhoSquared = rhoSq(a, p.theta1, p.theta2);

  PrefilterResult pf = prefilter(c, a, budget);
  if (pf.status == PrefilterStatus::Unknown) {
    out.status = MembershipStatus::Unknown;
    out.detail = pf.witness;
    return out;
  }
  if (pf.status == PrefilterStatus::Fail) {
    out.status = MembershipStatus::NotMember;
    bool notJs = pf.witness.find("Jenkins-Strebel") != std::string::npos;
    out.reason = notJs ? RejectReason::NotJS : RejectReason::PrefilterFail;
    out.detail = pf.witness;
    return out;
  }

  Direction a1 = directionImage(a, p.theta1);
  Direction a2 = directionImage(a, p.theta2);
  RedecomposeResult rd = redecompose(c, a1, a2, budget);
  if (rd.status == TraceVerdict::Unknown) {
    out.status = MembershipStatus::Unknown;
    out.detail = "budget exhausted re-decomposing in direction " +
                 (rd.failedDirection == 1 ? a1.str() : a2.str());
    return out;
  }
  if (rd.status == TraceVerdict::NotJS) {
    out.status = MembershipStatus::NotMember;
    out.reason = RejectReason::NotJS;
    out.detail = "direction " + (rd.failedDirection == 1 ? a1.str() : a2.str()) +
                 " is not Jenkins-Strebel";
    return out;
  }
  out.redecomposition = rd.pdec;

  // Compare P(R, A Theta) with act(A, P): isomorphism + exact squared scale.
  const ExtendedOrigami& oNew = rd.pdec.origami;
  const ExtendedOrigami& oRef = p.origami;
  const MarkTuple& marksNew = marked ? rd.pdec.marks : MarkTuple{};
  static const MarkTuple kNoMarks;
  const MarkTuple& marksRef = marked ? p.marks : kNoMarks;

  Scalar kNewSq = rd.pdec.kSq;
  Scalar target = out.rhoSquared * p.kSq;
  auto scaleOk = [&](const Isomorphism& iso) {
    const Scalar& m1 = oRef.moduli[0];
    const Scalar& mImg = oRef.moduli[SignedIndex::fromIdx(iso.sigma[0]).cell - 1];
    return kNewSq * m1 * m1 == target * mImg * mImg;
  };
  auto certified = findIsomorphism(oNew, oRef, marksNew, marksRef, scaleOk);
  if (certified) {
    verifyIsomorphism(oNew, oRef, marksNew, marksRef, *certified);
    out.status = MembershipStatus::Member;
    out.certificate = certified;
    return out;
  }
  out.status = MembershipStatus::NotMember;
  if (findIsomorphism(oNew, oRef, marksNew, marksRef)) {
    out.reason = RejectReason::ScaleMismatch;
    out.detail = "isomorphic origami but k'^2 != rho^2 k^2 under any certificate";
  } else {
    out.reason = RejectReason::NoIsomorphism;
    out.detail = marked ? "no marked isomorphism between the re-decomposition and A.P"
                        : "no isomorphism between the re-decomposition and A.P";
  }
  return out;
}

MembershipVerdict membership(const PDecomposition& p, const Mat2& a, bool marked, long budget) {
  return membership(realize(p), p, a, marked, budget);
}

PDecomposition refineRational(const PDecomposition& p) {
  PlanarComplex c = realize(p);
  const int n = c.n();
  const Scalar unit = c.width[0];
  std::vector<long> wCount(n), hCount(n);
  mpz_class lcm = 1;
  std::vector<Rational> ratios;
  for (int i = 0; i < n; ++i) {
    for (const Scalar* s : {&c.width[i], &c.height[i]}) {
      Scalar r = *s / unit;
      if (!r.isRational())
        throw std::runtime_error("incommensurable side lengths: " + s->str() + " vs " +
                                 unit.str());
      ratios.push_back(r.ratPart());
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), r.ratPart().get_den().get_mpz_t());
    }
  }
  for (int i = 0; i < n; ++i) {
    Rational w = ratios[2 * i] * lcm, h = ratios[2 * i + 1] * lcm;
    w.canonicalize();
    h.canonicalize();
    wCount[i] = (long)w.get_num().get_si();
    hCount[i] = (long)h.get_num().get_si();
  }

  // Grid cell ids.
  std::vector<long> base(n + 1, 0);
  for (int i = 0; i < n; ++i) base[i + 1] = base[i] + wCount[i] * hCount[i];
  long total = base[n];
  if (total > 100000) throw std::runtime_error("refinement would exceed 100000 cells");
  auto id = [&](int cell, long col, long row) { return base[cell] + row * wCount[cell] + col; };

  int nn = (int)total;
  std::vector<int> xp(nn);
  for (int i = 0; i < n; ++i) {
    for (long r = 0; r < hCount[i]; ++r) {
      for (long col = 0; col < wCount[i]; ++col) {
        if (col + 1 < wCount[i]) {
          xp[id(i, col, r)] = (int)id(i, col + 1, r);
        } else {
          // Row r keeps its height across the x-gluing.
          xp[id(i, col, r)] = (int)id(c.xplus[i], 0, r);
        }
      }
    }
  }
  SignedPerm nx(nn), ny(nn);
  for (int q = 0; q < nn; ++q) {
    nx.set(SignedIndex{q + 1, +1}.idx(), SignedIndex{xp[q] + 1, +1}.idx());
  }
  std::vector<int> xpInv(nn);
  for (int q = 0; q < nn; ++q) xpInv[xp[q]] = q;
  for (int q = 0; q < nn; ++q)
    nx.set(SignedIndex{q + 1, -1}.idx(), SignedIndex{xpInv[q] + 1, -1}.idx());

  for (int i = 0; i < n; ++i) {
    for (long r = 0; r < hCount[i]; ++r) {
      for (long col = 0; col < wCount[i]; ++col) {
        int q = (int)id(i, col, r);
        // Up from the positive sheet.
        SignedIndex upImg;
        if (r + 1 < hCount[i]) {
          upImg = {(int)id(i, col, r + 1) + 1, +1};
        } else if (!c.up[i].flip) {
          upImg = {(int)id(c.up[i].cell, col, 0) + 1, +1};
        } else {
          int m = c.up[i].cell;
          upImg = {(int)id(m, wCount[m] - 1 - col, hCount[m] - 1) + 1, -1};
        }
        ny.set(SignedIndex{q + 1, +1}.idx(), upImg.idx());
        // Up from the negative sheet = down in the base chart.
        SignedIndex dnImg;
        if (r > 0) {
          dnImg = {(int)id(i, col, r - 1) + 1, -1};
        } else if (!c.down[i].flip) {
          int m = c.down[i].cell;
          dnImg = {(int)id(m, col, hCount[m] - 1) + 1, -1};
        } else {
          int m = c.down[i].cell;
          dnImg = {(int)id(m, wCount[m] - 1 - col, 0) + 1, +1};
        }
        ny.set(SignedIndex{q + 1, -1}.idx(), dnImg.idx());
      }
    }
  }

  PDecomposition out;
  out.theta1 = p.theta1;
  out.theta2 = p.theta2;
  out.kSq = c.norm2Sq / c.norm1Sq;  // congruent squares in the normalized frame
  out.origami.n = nn;
  out.origami.moduli.assign(nn, Scalar(1));
  out.origami.x = nx;
  out.origami.y = ny;
  requireValid(out.origami);

  // Marks: the input marks first, then every original vertex class not
  // already among them. Grid corner (cell i, BL of subcell (0,0)) realizes the
  // original corner class of (i, BL); commutator cycles through ((q),-) wind
  // around BL corners.
  auto classesNew = vertexClasses(out.origami);
  auto pointCls = classOfPoint(out.origami, classesNew);
  auto newClassOfOldComplexClass = [&](int oldCls) -> int {
    for (int i = 0; i < n; ++i) {
      const int corners[4] = {c.corner(i, 0), c.corner(i, 1), c.corner(i, 2), c.corner(i, 3)};
      const SignedIndex pts[4] = {
          SignedIndex{(int)id(i, 0, 0) + 1, -1},                              // BL
          SignedIndex{(int)id(i, wCount[i] - 1, 0) + 1, -1},                  // BR: BL of its x+ ... use TR convention below
          SignedIndex{(int)id(i, wCount[i] - 1, hCount[i] - 1) + 1, +1},      // TR
          SignedIndex{(int)id(i, 0, hCount[i] - 1) + 1, +1},                  // TL: TR of its x- ...
      };
      // Only BL and TR admit the direct cycle correspondence; the other two
      // corners of the big cell coincide with BL/TR corners of neighbors, so
      // scanning all cells over BL/TR suffices.
      for (int k : {0, 2}) {
        if (c.cornerClass[corners[k]] == oldCls) return pointCls[pts[k].idx()];
      }
    }
    throw std::logic_error("refine: original vertex class not located on the grid");
  };
  std::vector<int> markedCls;
  for (int mcls : c.markComplexClass) {
    int nc = newClassOfOldComplexClass(mcls);
    out.marks.reps.push_back(classesNew[nc].cycles[0]);
    markedCls.push_back(nc);
  }
  for (int oldCls = 0; oldCls < c.numClasses; ++oldCls) {
    int nc = newClassOfOldComplexClass(oldCls);
    if (std::find(markedCls.begin(), markedCls.end(), nc) == markedCls.end()) {
      out.marks.reps.push_back(classesNew[nc].cycles[0]);
      markedCls.push_back(nc);
    }
  }
  return out;
}

Mat2 matT() { return Mat2(Scalar(1), Scalar(1), Scalar(0), Scalar(1)); }
Mat2 matS() { return Mat2(Scalar(0), Scalar(-1), Scalar(1), Scalar(0)); }

Mat2 wordMatrix(const std::vector<int>& tokens) {
  Mat2 m;
  for (int t : tokens) {
    switch (t) {
      case 1: m = m * matT(); break;
      case -1: m = m * matT().inverse(); break;
      case 2: m = m * matS(); break;
      default: throw std::invalid_argument("bad word token");
    }
  }
  return m;
}

std::string wordStr(const std::vector<int>& tokens) {
  if (tokens.empty()) return "I";
  std::string s;
  for (size_t i = 0; i < tokens.size();) {
    if (tokens[i] == 2) {
      s += "S";
      ++i;
      continue;
    }
    int sign = tokens[i];
    size_t j = i;
    while (j < tokens.size() && tokens[j] == sign) ++j;
    long count = (long)(j - i) * (sign > 0 ? 1 : -1);
    s += "T";
    if (count != 1) s += "^" + std::to_string(count);
    i = j;
  }
  return s;
}

std::vector<int> pslWord(const Mat2& a) {
  auto intOf = [](const Scalar& s) {
    if (!s.isRational() || s.ratPart().get_den() != 1)
      throw std::runtime_error("pslWord: matrix is not integral");
    return mpz_class(s.ratPart().get_num());
  };
  mpz_class ma = intOf(a.a), mb = intOf(a.b), mc = intOf(a.c), md = intOf(a.d);
  if (ma * md - mb * mc != 1) throw std::runtime_error("pslWord: determinant must be 1");
  std::vector<int> tokens;
  auto emitT = [&](const mpz_class& q) {
    long n = q.get_si();
    for (long i = 0; i < std::abs(n); ++i) tokens.push_back(n > 0 ? 1 : -1);
  };
  // Reduce by left multiplications, recording inverses in application order.
  while (mc != 0) {
    // Nearest-integer quotient of a/c.
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), ma.get_mpz_t(), mc.get_mpz_t());
    if (2 * r > abs(mc)) q += 1;
    // T^-q: row1 -= q*row2; record inverse T^q.
    ma -= q * mc;
    mb -= q * md;
    emitT(q);
    // S: (row1,row2) -> (-row2,row1); record S.
    mpz_class na = -mc, nb = -md;
    mc = ma;
    md = mb;
    ma = na;
    mb = nb;
    tokens.push_back(2);
  }
  // Now +-[[1,b],[0,1]].
  if (ma == 1)
    emitT(mb);
  else
    emitT(-mb);
  if (!wordMatrix(tokens).pslEquals(a)) throw std::logic_error("pslWord: verification failed");
  return tokens;
}

namespace {

bool isSquareTiled(const PDecomposition& p, std::string* why) {
  if (!(p.theta1 == horizontal()) || !(p.theta2 == vertical())) {
    *why = "theta must be the standard pair (1,0),(0,1)";
    return false;
  }
  for (const auto& m : p.origami.moduli) {
    if (m != p.origami.moduli[0]) {
      *why = "moduli are not all equal; run refine first";
      return false;
    }
  }
  if (p.kSq != Scalar(1)) {
    *why = "k^2 != 1; run refine first";
    return false;
  }
  return true;
}

}  // namespace

CosetGraph enumerateGroup(const PDecomposition& p, bool marked, int maxVertices, long budget) {
  requireValid(p.origami);
  std::string why;
  if (!isSquareTiled(p, &why)) throw std::runtime_error("enumerate_group: " + why);

  CosetGraph g;
  g.marked = marked;
  MarkTuple marks = marked ? p.marks : MarkTuple{};
  CanonicalForm cf0 = canonicalForm(p.origami, marks);
  std::map<std::string, int> ids;

  auto addVertex = [&](CanonicalForm cf, std::vector<int> word) {
    CosetGraph::Vertex v;
    v.key = cf.key;
    v.pdec.theta1 = horizontal();
    v.pdec.theta2 = vertical();
    v.pdec.kSq = Scalar(1);
    v.pdec.origami = std::move(cf.relabeled);
    v.pdec.marks = std::move(cf.marks);
    v.repWord = std::move(word);
    ids[v.key] = (int)g.vertices.size();
    g.vertices.push_back(std::move(v));
    return (int)g.vertices.size() - 1;
  };
  addVertex(std::move(cf0), {});

  // BFS over the moves T, T^-1, S.
  for (size_t qi = 0; qi < g.vertices.size(); ++qi) {
    if ((int)g.vertices.size() > maxVertices) {
      g.complete = false;
      break;
    }
    struct Move {
      int token;
      Mat2 m;
      int CosetGraph::Vertex::* slot;
    };
    const Move moves[3] = {{1, matT(), &CosetGraph::Vertex::stepT},
                           {-1, matT().inverse(), &CosetGraph::Vertex::stepTinv},
                           {2, matS(), &CosetGraph::Vertex::stepS}};
    for (const auto& mv : moves) {
      if (g.vertices[qi].*(mv.slot) != -1) continue;
      const PDecomposition& q = g.vertices[qi].pdec;
      PlanarComplex c = realize(q);
      Direction d1 = directionImage(mv.m.inverse(), horizontal());
      Direction d2 = directionImage(mv.m.inverse(), vertical());
      RedecomposeResult rd = redecompose(c, d1, d2, budget);
      if (rd.status != TraceVerdict::JS)
        throw std::runtime_error("enumerate_group: generator step failed (budget too small?)");
      PDecomposition moved = act(mv.m, rd.pdec);
      if (!(moved.theta1 == horizontal()) || !(moved.theta2 == vertical()) ||
          moved.kSq != Scalar(1))
        throw std::logic_error("enumerate_group: step did not return to the normalized frame");
      CanonicalForm cf = canonicalForm(moved.origami, marked ? moved.marks : MarkTuple{});
      int target;
      auto it = ids.find(cf.key);
      if (it != ids.end()) {
        target = it->second;
      } else {
        std::vector<int> w = g.vertices[qi].repWord;
        w.push_back(mv.token);
        target = addVertex(std::move(cf), std::move(w));
      }
      g.vertices[qi].*(mv.slot) = target;
    }
  }

  if (g.complete) {
    // Schreier generators over {T, S}.
    auto repInv = [](const std::vector<int>& w) {
      std::vector<int> out;
      for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(*it == 2 ? 2 : -*it);
      return out;
    };
    std::set<std::string> seen;
    for (int v = 0; v < (int)g.vertices.size(); ++v) {
      struct GenEdge {
        int token, target;
      };
      const GenEdge gens[2] = {{1, g.vertices[v].stepT}, {2, g.vertices[v].stepS}};
      for (const auto& ge : gens) {
        int w = ge.target;
        // Skip spanning-tree edges: target discovered exactly by this edge.
        if (!g.vertices[w].repWord.empty() && g.vertices[w].repWord.back() == ge.token) {
          std::vector<int> prefix(g.vertices[w].repWord.begin(),
                                  g.vertices[w].repWord.end() - 1);
          if (prefix == g.vertices[v].repWord) continue;
        }
        std::vector<int> word = g.vertices[v].repWord;
        word.push_back(ge.token);
        auto inv = repInv(g.vertices[w].repWord);
        word.insert(word.end(), inv.begin(), inv.end());
        Mat2 m = wordMatrix(word);
        if (m.pslEquals(Mat2::identity())) continue;
        std::string key = wordStr(word);
        if (seen.insert(key).second) {
          g.stabilizerWords.push_back(word);
          g.stabilizerMatrices.push_back(m);
        }
      }
    }
  }
  return g;
}

MembershipStatus wordWalkMembership(const CosetGraph& g, const Mat2& a) {
  std::vector<int> tokens = pslWord(a);
  int v = 0;
  for (int t : tokens) {
    int next = t == 1 ? g.vertices[v].stepT : t == -1 ? g.vertices[v].stepTinv
                                                      : g.vertices[v].stepS;
    if (next == -1) return MembershipStatus::Unknown;
    v = next;
  }
  return v == 0 ? MembershipStatus::Member : MembershipStatus::NotMember;
}

}  // namespace veech
