#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "veech/invariants.hpp"
#include "veech/origami.hpp"

namespace veech {

// Ordered (labeled) tuple of O-vertex classes, each named by a representative
// commutator cycle in idx form. A marked isomorphism must match entries
// componentwise.
struct MarkTuple {
  std::vector<std::vector<int>> reps;

  bool empty() const { return reps.empty(); }
  size_t size() const { return reps.size(); }
};

// Resolves a representative cycle to its class index, validating that the rep
// is an actual commutator cycle of o.
int classIndexOfRep(const ExtendedOrigami& o, const std::vector<OVertexClass>& classes,
                    const std::vector<int>& rep);

struct Isomorphism {
  std::vector<int> sigma;  // Lambda^(o1) -> Lambda^(o2), idx form
  Scalar rescale;          // M1[cell] = rescale * M2[cell of sigma(cell,+)]

  SignedIndex map(SignedIndex s) const { return SignedIndex::fromIdx(sigma[s.idx()]); }
};

using IsoFilter = std::function<bool(const Isomorphism&)>;

// Searches for (Phi, sigma) with Phi(x1)=x2, Phi(y1)=y2, sigma negation-
// equivariant, projective moduli match, and marks matched componentwise when
// given. `accept` can further constrain (e.g. the membership scale check);
// the first acceptable certificate in deterministic base order is returned.
std::optional<Isomorphism> findIsomorphism(const ExtendedOrigami& o1, const ExtendedOrigami& o2,
                                           const MarkTuple& marks1 = {},
                                           const MarkTuple& marks2 = {},
                                           const IsoFilter& accept = nullptr);

// Re-verifies all isomorphism clauses; throws std::logic_error on failure.
void verifyIsomorphism(const ExtendedOrigami& o1, const ExtendedOrigami& o2,
                       const MarkTuple& marks1, const MarkTuple& marks2, const Isomorphism& iso);

struct CanonicalForm {
  std::string key;  // canonical byte string; equal iff isomorphic (marks included)
  ExtendedOrigami relabeled;
  MarkTuple marks;
  std::vector<int> toCanonical;  // idx map original -> relabeled
};

CanonicalForm canonicalForm(const ExtendedOrigami& o, const MarkTuple& marks = {});

}  // namespace veech
