#pragma once

#include <optional>
#include <vector>

#include "ordtop/lset.hpp"

namespace ordtop {

enum class Topology { Order, Directed };

// The ambient space: [0, bound] when closed, [0, bound) otherwise, carrying
// either the order topology or the directed topology. The directed topology
// requires a closed ambient whose bound is a limit ordinal; there every
// point below the bound is isolated and the bound's neighborhoods are the
// upward closed end segments.
struct Ambient {
  Ordinal bound;
  bool closed = true;
  Topology topology = Topology::Order;
};

bool operator==(const Ambient& a, const Ambient& b);
inline bool operator!=(const Ambient& a, const Ambient& b) { return !(a == b); }

// Throws Error(Input) when the topology flavor does not fit the interval.
void validate_ambient(const Ambient& a);
// Chunk level housing every subset of the space; throws NotRepresentable
// when the bound's leading exponent is not finite.
int ambient_level(const Ambient& a);

// A representable subset of an ambient interval. All operations are exact;
// binary operations require identical ambients.
class OrdSet {
 public:
  static OrdSet empty(const Ambient& a);
  static OrdSet full(const Ambient& a);
  static OrdSet singleton(const Ambient& a, const Ordinal& p);
  // [lo, hi) or [lo, hi]; the atom must lie inside the space.
  static OrdSet interval(const Ambient& a, const Ordinal& lo, const Ordinal& hi,
                         bool closed_hi);
  // {s(n) : n < count}, every n when count is absent.
  static OrdSet ladder_points(const Ambient& a, const AffineSeq& s,
                              const std::optional<mpz_class>& count = std::nullopt);
  // Union of blocks [s(n), s(n)+width) for n < count; blocks must not
  // overlap the next block's start.
  static OrdSet ladder_blocks(const Ambient& a, const AffineSeq& s, const Ordinal& width,
                              const std::optional<mpz_class>& count = std::nullopt);
  // Adopts a layered set already known to lie inside the space.
  static OrdSet from_lset(const Ambient& a, LSet s);

  const Ambient& ambient() const { return ambient_; }
  const LSet& lset() const { return set_; }

  bool is_empty() const;
  bool member(const Ordinal& p) const;
  Ordinal min() const;  // EmptySet
  Ordinal sup() const;  // EmptySet
  bool sup_attained() const;
  Ordinal order_type() const;
  Ordinal position_of(const Ordinal& x) const;
  Ordinal point_at(const Ordinal& alpha) const;
  std::optional<Ordinal> first_above(const Ordinal& x) const;

 private:
  OrdSet(Ambient a, LSet s);
  Ambient ambient_;
  LSet set_;
};

OrdSet ord_union(const OrdSet& a, const OrdSet& b);
OrdSet ord_intersect(const OrdSet& a, const OrdSet& b);
OrdSet ord_diff(const OrdSet& a, const OrdSet& b);
OrdSet ord_complement(const OrdSet& s);
bool ord_subset(const OrdSet& a, const OrdSet& b);
bool ord_equal(const OrdSet& a, const OrdSet& b);

bool is_cofinal(const OrdSet& s);
bool is_bounded(const OrdSet& s);
// Limit points within the space under the ambient's topology. Under the
// directed topology the only candidate is the bound itself.
OrdSet limit_points(const OrdSet& s);
OrdSet closure(const OrdSet& s);
bool is_closed(const OrdSet& s);
// Order topology only: a maximum exists and every limit point below it
// belongs to the set. The empty set counts as compact.
bool is_compact(const OrdSet& s);
// Order topology only: closure(s) \ s is a single point l that is also the
// least space element above every element of s. Returns l, or nullopt.
std::optional<Ordinal> almost_closed_point(const OrdSet& s);

// Three independently computed views of the same dichotomy for a subset i
// of a closed ambient: the inclusion (i with its internal order topology
// into the space) is continuous; it is an embedding; i is closed or almost
// closed. Their equality is a theorem the tests assert, not an assumption.
struct EquivReport {
  bool cond_continuous;
  bool cond_embedding;
  bool cond_closed_or_almost_closed;
};
EquivReport three_equiv(const OrdSet& i);

// Order isomorphism between [0, order_type(i)] and closure(i) sending the
// top to the unique limit point; exists exactly when i is almost closed.
struct Compactification {
  Ambient domain;        // [0, internal_type], order topology
  Ordinal internal_type; // the added top's position
  Ordinal limit_point;   // its value in the ambient
  OrdSet source;         // i itself

  Ordinal eval(const Ordinal& alpha) const;  // OutOfDomain above the top
  Ordinal inv(const Ordinal& y) const;       // OutOfDomain outside closure(i)
  OrdSet image() const;                      // closure(i)
};
Compactification compactify(const OrdSet& i);  // NotAlmostClosed

// Image of a domain subset under the isomorphism, as a subset of the
// ambient the source lives in. Exact; throws when the subset's structure
// cannot be carried over within budget.
OrdSet iso_image(const Compactification& h, const OrdSet& l);

}  // namespace ordtop
