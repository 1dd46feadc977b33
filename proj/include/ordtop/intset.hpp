#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace ordtop {

// One strided run of naturals: start, start+stride, ... with `count` elements
// (unbounded when count is absent). stride >= 1; count >= 1 when present.
struct IntRun {
  mpz_class start;
  mpz_class stride;
  std::optional<mpz_class> count;

  mpz_class last() const;  // requires bounded
  bool member(const mpz_class& k) const;
};

// Subset of the naturals as a finite union of runs. Runs may overlap; all
// operations are exact. Operations that must align incommensurate strides
// throw NotRepresentable when the alignment budget is exceeded.
class IntSet {
 public:
  IntSet() = default;
  static IntSet of(std::vector<IntRun> runs);
  static IntSet single(const mpz_class& k);
  static IntSet range(const mpz_class& lo, const mpz_class& width);  // [lo, lo+width)
  static IntSet upward(const mpz_class& lo);                         // [lo, inf)
  static IntSet all();

  const std::vector<IntRun>& runs() const { return runs_; }
  bool is_empty() const { return runs_.empty(); }
  bool unbounded() const;
  bool member(const mpz_class& k) const;
  mpz_class min() const;  // requires nonempty
  mpz_class max() const;  // requires nonempty and bounded
  std::optional<mpz_class> first_ge(const mpz_class& k) const;

  // Elements in ascending order while they do not exceed `bound`; throws
  // BudgetExceeded past `budget` elements.
  std::vector<mpz_class> enumerate_below(const mpz_class& bound, std::size_t budget) const;

  // Equivalent form with pairwise disjoint runs in ascending order and
  // adjacent runs merged where the stride allows.
  IntSet normalized() const;

 private:
  std::vector<IntRun> runs_;
};

IntSet int_union(const IntSet& a, const IntSet& b);
IntSet int_intersect(const IntSet& a, const IntSet& b);
// Complement within the naturals.
IntSet int_complement(const IntSet& a);
IntSet int_diff(const IntSet& a, const IntSet& b);
bool int_subset(const IntSet& a, const IntSet& b);
bool int_equal(const IntSet& a, const IntSet& b);
// k |-> k + d.
IntSet int_shift_up(const IntSet& a, const mpz_class& d);
// Elements >= d, each mapped to k - d.
IntSet int_shift_down(const IntSet& a, const mpz_class& d);

}  // namespace ordtop
