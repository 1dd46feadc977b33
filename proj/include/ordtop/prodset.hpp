#pragma once

#include <optional>
#include <vector>

#include "ordtop/ordset.hpp"

namespace ordtop {

// Product of two ambient intervals under the product of the order
// topologies. Basic neighborhoods of (x, y) are products (a, x] times
// (b, y].
struct ProdAmbient {
  Ambient x;
  Ambient y;
};

bool operator==(const ProdAmbient& a, const ProdAmbient& b);
inline bool operator!=(const ProdAmbient& a, const ProdAmbient& b) { return !(a == b); }
// Throws Error(Input) unless both factors carry the order topology.
void validate_prod_ambient(const ProdAmbient& a);

struct ProdPoint {
  Ordinal x;
  Ordinal y;
};

// Synchronized ladder {(x(n), y(n)) : n < count}, every n when count is
// absent. Both coordinate sequences advance together, so the atom is a
// curve, not a grid.
struct PairSeq {
  AffineSeq x;
  AffineSeq y;
  std::optional<mpz_class> count;
};

// A representable subset of a product: a finite union of rectangles and
// synchronized pair ladders.
class ProdSet {
 public:
  struct Rect {
    OrdSet x;
    OrdSet y;
  };

  static ProdSet empty(const ProdAmbient& a);
  static ProdSet rect(const ProdAmbient& a, OrdSet xs, OrdSet ys);
  static ProdSet pairs(const ProdAmbient& a, PairSeq p);

  const ProdAmbient& ambient() const { return ambient_; }
  const std::vector<Rect>& rects() const { return rects_; }
  const std::vector<PairSeq>& pair_atoms() const { return pairs_; }

  bool is_empty() const;
  bool member(const Ordinal& px, const Ordinal& py) const;

 private:
  explicit ProdSet(ProdAmbient a);
  ProdAmbient ambient_;
  std::vector<Rect> rects_;
  std::vector<PairSeq> pairs_;
  friend ProdSet prod_union(const ProdSet& a, const ProdSet& b);
  friend ProdSet prod_restrict(const ProdSet& s, const OrdSet& rx, const OrdSet& ry);
  friend ProdSet prod_transpose(const ProdSet& s);
  friend ProdSet prod_closure(const ProdSet& s);
};

ProdSet prod_union(const ProdSet& a, const ProdSet& b);
// Intersection with the rectangle rx times ry.
ProdSet prod_restrict(const ProdSet& s, const OrdSet& rx, const OrdSet& ry);
// The same set with the factors swapped.
ProdSet prod_transpose(const ProdSet& s);

// {y : (x, y) in s} as a subset of the second factor.
OrdSet vertical_slice(const ProdSet& s, const Ordinal& x);
// {x : (x, y) in s} as a subset of the first factor.
OrdSet horizontal_slice(const ProdSet& s, const Ordinal& y);

// The x axis split into the finitely many classes on which the
// rectangle-derived part of the vertical slice is constant. The classes
// partition the first factor's space; pair atoms contribute at most one
// extra slice point per abscissa on top of `slice`.
struct SliceClass {
  OrdSet xs;
  OrdSet slice;
};
std::vector<SliceClass> vertical_slice_classes(const ProdSet& s);

bool prod_is_limit_point(const ProdSet& s, const Ordinal& px, const Ordinal& py);
ProdSet prod_closure(const ProdSet& s);
// Least point of limit(s) outside s in lexicographic x-then-y order.
std::optional<ProdPoint> first_outside_limit(const ProdSet& s);
bool prod_is_closed(const ProdSet& s);

// Least x (then least missing y) whose vertical slice fails to be closed
// in the second factor; the missing y is approached inside the column.
std::optional<ProdPoint> first_vertical_slice_violation(const ProdSet& s);
std::optional<ProdPoint> first_horizontal_slice_violation(const ProdSet& s);

// Least x strictly above `above` (from the bottom when absent) whose
// vertical slice is nonempty, requiring the slice supremum to exceed
// `ymin` when given.
std::optional<Ordinal> next_slice_abscissa(const ProdSet& s,
                                           const std::optional<Ordinal>& above,
                                           const std::optional<Ordinal>& ymin);

}  // namespace ordtop
