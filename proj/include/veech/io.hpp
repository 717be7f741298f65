#pragma once

#include <string>

#include <json.hpp>

#include "veech/affine.hpp"

namespace veech {

using Json = nlohmann::ordered_json;

// Input document: n, field.d (optional), moduli (optional, Scalar strings),
// x and y as arrays of cycles of nonzero integers (negative = flipped sheet,
// half-cycles allowed), theta (optional pair of vectors), k (optional),
// marks (optional array of cycles, ordered).
PDecomposition parseDocument(const Json& doc);
PDecomposition loadDocument(const std::string& path);

Json serializeDocument(const PDecomposition& p);

Json infoReport(const PDecomposition& p);
Json validationJson(const ValidationReport& rep);

std::string statusName(MembershipStatus s);
std::string reasonName(RejectReason r);

}  // namespace veech
