#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

#include "ordtop/affine.hpp"
#include "ordtop/intset.hpp"
#include "ordtop/ordinal.hpp"

namespace ordtop {

// Subset of [0, w^(level+1)) in a layered chunk form. Level 0 stores a set
// of naturals. Level d >= 1 splits the range into chunks [w^d*k, w^d*(k+1))
// and stores groups of chunk indices with pairwise disjoint index sets, each
// group sharing one nonempty child set of level d-1.
class LSet {
 public:
  struct Part;

  LSet();
  LSet(const LSet&);
  LSet(LSet&&) noexcept;
  LSet& operator=(const LSet&);
  LSet& operator=(LSet&&) noexcept;
  ~LSet();

  static LSet empty(int level);
  static LSet from_base(IntSet base);  // level 0
  // Drops parts with an empty index set or an empty child; the caller must
  // keep the remaining index sets pairwise disjoint.
  static LSet make(int level, std::vector<Part> parts);
  static LSet full(int level);                     // [0, w^(level+1))
  static LSet below(int level, const Ordinal& b);  // [0, b), b <= w^(level+1)
  static LSet point(int level, const Ordinal& x);
  // {s(n) : n < count} (all n when count is absent); the range must fit
  // inside [0, w^(level+1)).
  static LSet ladder(int level, const AffineSeq& s,
                     const std::optional<mpz_class>& count);
  // Union of the blocks [s(n), s(n)+width) for n < count; block n+1 must
  // start at or after the end of block n.
  static LSet ladder_blocks(int level, const AffineSeq& s, const Ordinal& width,
                            const std::optional<mpz_class>& count);
  LSet lifted(int level) const;

  int level() const { return level_; }
  const IntSet& base() const { return base_; }
  const std::vector<Part>& parts() const { return parts_; }

  bool is_empty() const;
  bool member(const Ordinal& x) const;
  Ordinal min() const;  // requires nonempty

  struct Sup {
    Ordinal value;  // may equal w^(level+1)
    bool attained;
  };
  Sup sup() const;       // requires nonempty
  bool cofinal() const;  // sup value == w^(level+1)

  // Order type of the set; position_of is the rank of a member and point_at
  // its inverse. Both throw OutOfDomain outside their domain.
  Ordinal order_type() const;
  Ordinal position_of(const Ordinal& x) const;
  Ordinal point_at(const Ordinal& alpha) const;

 private:
  int level_ = 0;
  IntSet base_;
  std::vector<Part> parts_;
};

struct LSet::Part {
  IntSet ks;
  LSet child;
};

LSet ls_union(const LSet& a, const LSet& b);
LSet ls_intersect(const LSet& a, const LSet& b);
LSet ls_diff(const LSet& a, const LSet& b);
// Complement within [0, w^(level+1)).
LSet ls_complement(const LSet& a);
bool ls_subset(const LSet& a, const LSet& b);
bool ls_equal(const LSet& a, const LSet& b);
// Points of [0, w^(level+1)) that are limits of strictly increasing
// sequences from the set. Members of the set itself are included when they
// qualify; the level bound w^(level+1) is never included.
LSet ls_limit_points(const LSet& a);

// Elements of the set whose rank is below r.
LSet ls_rank_prefix(const LSet& s, const Ordinal& r);
// Elements of the set whose rank lies in some [base + step*n, base +
// step*n + width) for n < count (every n when count is absent). Width one
// selects the ranks base + step*n themselves.
LSet ls_rank_select(const LSet& s, const Ordinal& base, const Ordinal& step,
                    const Ordinal& width, const std::optional<mpz_class>& count);

// x = w^level * k + rest with rest below w^level; requires every exponent
// of x at or below level.
std::pair<mpz_class, Ordinal> chunk_split(const Ordinal& x, int level);
Ordinal chunk_join(int level, const mpz_class& k, const Ordinal& rest);

}  // namespace ordtop
