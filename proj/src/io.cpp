#include "veech/io.hpp"

#include <fstream>

namespace veech {

namespace {

std::vector<std::vector<int>> parseCycles(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of cycles");
  std::vector<std::vector<int>> out;
  for (const auto& cyc : j) {
    if (!cyc.is_array()) throw ParseError(std::string(what) + ": each cycle must be an array");
    std::vector<int> c;
    for (const auto& v : cyc) {
      if (!v.is_number_integer() || v.get<int>() == 0)
        throw ParseError(std::string(what) + ": cycle entries must be nonzero integers");
      c.push_back(v.get<int>());
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::vector<int>> cyclesToIdx(const std::vector<std::vector<int>>& cycles) {
  std::vector<std::vector<int>> out;
  for (const auto& cyc : cycles) {
    std::vector<int> c;
    for (int v : cyc) c.push_back(SignedIndex::fromInt(v).idx());
    out.push_back(std::move(c));
  }
  return out;
}

Json cycleToJson(const std::vector<int>& idxCycle) {
  Json arr = Json::array();
  for (int v : idxCycle) arr.push_back(SignedIndex::fromIdx(v).asInt());
  return arr;
}

Json permToJson(const SignedPerm& perm) {
  Json arr = Json::array();
  for (const auto& cyc : perm.halfCycles()) {
    // Skip fixed points of the negative sheet; they mirror positive ones.
    if (cyc.size() == 1 && SignedIndex::fromIdx(cyc[0]).sign < 0 &&
        perm.map(cyc[0]) == cyc[0])
      continue;
    arr.push_back(cycleToJson(cyc));
  }
  return arr;
}

}  // namespace

PDecomposition parseDocument(const Json& doc) {
  if (!doc.is_object()) throw ParseError("document must be a JSON object");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw ParseError("field 'n' (cell count) is required");
  int n = doc["n"].get<int>();
  if (n <= 0) throw ParseError("n must be positive");
  long d = 1;
  if (doc.contains("field")) {
    if (!doc["field"].is_object() || !doc["field"].contains("d"))
      throw ParseError("'field' must be an object with entry 'd'");
    d = doc["field"]["d"].get<long>();
    Scalar::checkSquareFree(d);
  }
  PDecomposition p;
  p.origami.n = n;
  if (doc.contains("moduli")) {
    const auto& ms = doc["moduli"];
    if (!ms.is_array() || (int)ms.size() != n)
      throw ParseError("'moduli' must be an array of n scalar strings");
    for (const auto& m : ms) p.origami.moduli.push_back(Scalar::parse(m.get<std::string>(), d));
  } else {
    p.origami.moduli.assign(n, Scalar(1));
  }
  if (!doc.contains("x") || !doc.contains("y")) throw ParseError("fields 'x' and 'y' required");
  std::vector<std::vector<int>> xc = parseCycles(doc["x"], "x");
  std::vector<std::vector<int>> yc = parseCycles(doc["y"], "y");
  auto toIdxCycles = [&](const std::vector<std::vector<int>>& cs) {
    std::vector<std::vector<int>> out;
    for (const auto& c : cs) {
      std::vector<int> ic;
      for (int v : c) {
        if (std::abs(v) > n) throw ParseError("cycle entry out of range: " + std::to_string(v));
        ic.push_back(v);
      }
      out.push_back(ic);
    }
    return out;
  };
  p.origami.x = SignedPerm::fromCycles(n, toIdxCycles(xc));
  p.origami.y = SignedPerm::fromCycles(n, toIdxCycles(yc));

  if (doc.contains("theta")) {
    const auto& th = doc["theta"];
    if (!th.is_array() || th.size() != 2 || !th[0].is_array() || th[0].size() != 2 ||
        !th[1].is_array() || th[1].size() != 2)
      throw ParseError("'theta' must be two vectors of two scalar strings");
    auto vec = [&](const Json& v) {
      return Vec2(Scalar::parse(v[0].get<std::string>(), d),
                  Scalar::parse(v[1].get<std::string>(), d));
    };
    p.theta1 = Direction(vec(th[0]));
    p.theta2 = Direction(vec(th[1]));
    if (p.theta1 == p.theta2) throw ParseError("theta directions coincide");
  }
  if (doc.contains("k")) {
    Scalar k = Scalar::parse(doc["k"].get<std::string>(), d);
    if (k.sign() <= 0) throw ParseError("k must be positive");
    p.kSq = k * k;
  }
  if (doc.contains("marks")) {
    for (auto& cyc : cyclesToIdx(parseCycles(doc["marks"], "marks"))) {
      for (int v : cyc)
        if (v >= 2 * n) throw ParseError("mark cycle entry out of range");
      p.marks.reps.push_back(std::move(cyc));
    }
  }
  return p;
}

PDecomposition loadDocument(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("JSON parse error in " + path + ": " + e.what());
  }
  try {
    return parseDocument(doc);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json serializeDocument(const PDecomposition& p) {
  Json doc;
  doc["n"] = p.origami.n;
  long d = p.origami.fieldD();
  for (const Direction* th : {&p.theta1, &p.theta2}) {
    if (th->rep().x.fieldD() != 1) d = th->rep().x.fieldD();
    if (th->rep().y.fieldD() != 1) d = th->rep().y.fieldD();
  }
  if (p.kSq.fieldD() != 1) d = p.kSq.fieldD();
  if (d != 1) doc["field"] = Json{{"d", d}};
  Json mods = Json::array();
  for (const auto& m : p.origami.moduli) mods.push_back(m.str());
  doc["moduli"] = mods;
  doc["x"] = permToJson(p.origami.x);
  doc["y"] = permToJson(p.origami.y);
  doc["theta"] = Json::array({Json::array({p.theta1.rep().x.str(), p.theta1.rep().y.str()}),
                              Json::array({p.theta2.rep().x.str(), p.theta2.rep().y.str()})});
  auto k = p.kSq.sqrtInField();
  if (k)
    doc["k"] = k->str();
  else
    doc["k_squared"] = p.kSq.str();
  if (!p.marks.empty()) {
    Json marks = Json::array();
    for (const auto& rep : p.marks.reps) marks.push_back(cycleToJson(rep));
    doc["marks"] = marks;
  }
  return doc;
}

Json validationJson(const ValidationReport& rep) {
  Json out;
  out["valid"] = rep.ok;
  Json fails = Json::array();
  for (const auto& f : rep.failures) fails.push_back(Json{{"axiom", f.axiom}, {"message", f.message}});
  out["failures"] = fails;
  return out;
}

Json infoReport(const PDecomposition& p) {
  Json out;
  ExtendedOrigami o = isSignNormal(p.origami) ? p.origami : normalizeSigns(p.origami);
  SurfaceType st = surfaceType(o);
  out["genus"] = st.genus;
  out["punctures"] = st.punctures;
  out["orders"] = st.orders;
  out["abelian"] = isAbelian(o);
  auto spec = [&](Axis ax) {
    CylinderSpectrum s = cylinderSpectrum(o, ax);
    Json arr = Json::array();
    for (const auto& m : s.moduli) arr.push_back(m.str());
    return Json{{"count", s.count}, {"moduli", arr}};
  };
  out["spectrum_x"] = spec(Axis::X);
  out["spectrum_y"] = spec(Axis::Y);
  Json cellMods = Json::array();
  for (const auto& m : o.moduli) cellMods.push_back(m.str());
  out["cell_moduli"] = cellMods;
  Json classes = Json::array();
  for (const auto& cls : vertexClasses(o)) {
    Json c;
    Json cycles = Json::array();
    for (const auto& cyc : cls.cycles) cycles.push_back(cycleToJson(cyc));
    c["cycles"] = cycles;
    c["branch"] = cls.selfPaired;
    c["angle_over_pi"] = cls.angleOverPi;
    c["order"] = cls.order;
    classes.push_back(c);
  }
  out["vertex_classes"] = classes;
  return out;
}

std::string statusName(MembershipStatus s) {
  switch (s) {
    case MembershipStatus::Member: return "Member";
    case MembershipStatus::NotMember: return "NotMember";
    default: return "Unknown";
  }
}

std::string reasonName(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "None";
    case RejectReason::PrefilterFail: return "PrefilterFail";
    case RejectReason::NotJS: return "NotJS";
    case RejectReason::NoIsomorphism: return "NoIsomorphism";
    default: return "ScaleMismatch";
  }
}

}  // namespace veech
