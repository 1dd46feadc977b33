#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ordtop/prodset.hpp"
#include "ordtop/stepmap.hpp"

namespace ordtop {

// One recorded decision of a construction run.
struct TraceEvent {
  std::string step;   // recursion index as ordinal text
  std::string kind;   // "min-abscissa", "slice-max", "limit-sup", "phi"
  std::string value;  // ordinal text or "(x,y)" pair text
};

// An almost closed index set I, its limit l, and a continuous map defined
// on I plus {l}: the certificate form the constructions return.
struct Witness {
  OrdSet index_set;
  Ordinal limit;
  StepMap map;
  std::vector<TraceEvent> trace;
};

// Affine sequence converging to the limit ordinal from below, read off the
// normal form. Throws NotRepresentable when the final exponent is itself a
// limit, since no affine sequence reaches such an ordinal.
AffineSeq fundamental_seq(const Ordinal& limit);

// Strictly increasing affine sequence of points of u converging to lambda
// from below. Throws NotRepresentable when no single atom of u carries one.
AffineSeq approach_seq(const OrdSet& u, const Ordinal& lambda);

// The same pieces with the codomain interval replaced by a wider one.
StepMap widen_codomain(const StepMap& f, const Ambient& wider);
StepMap widen_codomain(const StepMap& f, const ProdAmbient& wider);

// Exact injectivity decision. Products are decided through an injective
// coordinate map; when neither coordinate decides, NotRepresentable.
bool is_injective(const StepMap& f);

// Space codomain: x < y in the domain implies f(x) < f(y).
bool is_strictly_increasing(const StepMap& f);

// Whether part is closed when the subspace `whole` is the whole space.
bool closed_within(const OrdSet& whole, const OrdSet& part);
// Whether part reaches arbitrarily high in whole.
bool cofinal_within(const OrdSet& whole, const OrdSet& part);

// Closed cofinal subset of f's domain on which f is one to one, computed
// by the keep/drop recursion: a point is dropped exactly when the kept set
// below it has a maximum whose value recurs at or beyond the point.
// Verifies the three postconditions before returning.
OrdSet injective_refinement(const StepMap& f, unsigned long budget = 100000,
                            std::vector<TraceEvent>* trace = nullptr);

// The map j -> least element of c at or above j, capped at max(c).
// Continuity is re-verified before returning.
StepMap retract_to_closed(const Ambient& a, const OrdSet& c);

struct StaircaseResult {
  Ordinal l;      // a limit ordinal
  StepMap map;    // domain [0, l], product codomain
  std::vector<TraceEvent> trace;
};

// Strictly increasing staircase through b ending at the corner (bound_x,
// bound_y): map([0,l)) inside b, map(l) = the corner. The five entry
// checks are named hypotheses; the recursion follows minimal abscissa then
// maximal slice ordinate, with affine runs closed at limit stages.
StaircaseResult staircase(const Ordinal& bound_x, const Ordinal& bound_y,
                          const ProdSet& b, unsigned long budget = 100000);

// Witness that a is not closed: an almost closed index set mapped into a
// whose limit lands on a point of closure(a) outside a. Prefers a witness
// inside a single non-closed slice; otherwise truncates to the least
// outside limit point and runs the staircase.
Witness product_witness(const ProdSet& a, unsigned long budget = 100000);

// First violated Witness invariant checked against the product set the
// witness speaks about, or nullopt when all hold. Pair runs are verified
// exactly where rectangle covers decide membership and by dense index
// sampling otherwise.
std::optional<std::string> witness_defect(const Witness& w, const ProdSet& a);

// A point of the set and a point outside it lying in the first point's
// closure; arises from maps constant on a cofinal fiber.
struct SpecializationPair {
  MapValue inside;
  MapValue outside;
};

struct NormalizedWitness {
  std::optional<Witness> injective;
  std::optional<SpecializationPair> pair;
};

// Either restricts the witness map to an index set on which it is one to
// one, or, for finite codomains with a cofinal constant fiber, returns the
// specialization pair. The result is re-verified.
NormalizedWitness witness_normalize(const Witness& w);

// Closed neighborhood of k inside u within the subspace k_set plus its
// limit: the singleton when k is isolated there, otherwise an interval
// [k', k] whose part below k is almost closed.
OrdSet regular_neighborhood(const OrdSet& k_set, const Ordinal& k, const OrdSet& u);

// Rechecks the witness map with the index domain under the directed
// topology; the returned point, if any, violates directed continuity and
// indicates a defect.
std::optional<Ordinal> directed_defect(const Witness& w);

}  // namespace ordtop
