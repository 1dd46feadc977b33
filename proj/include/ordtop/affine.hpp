#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ordtop/ordinal.hpp"

namespace ordtop {

// Strictly increasing sequence n |-> base + step*n on indices n >= 0.
class AffineSeq {
 public:
  // Throws ZeroStep when step == 0.
  AffineSeq(Ordinal base, Ordinal step);

  const Ordinal& base() const { return base_; }
  const Ordinal& step() const { return step_; }
  Ordinal at(const mpz_class& n) const;

 private:
  Ordinal base_;
  Ordinal step_;
};

// Equal components, which coincides with pointwise equality of the sequences.
bool operator==(const AffineSeq& a, const AffineSeq& b);
inline bool operator!=(const AffineSeq& a, const AffineSeq& b) { return !(a == b); }

// Supremum of the sequence's range, always a limit ordinal.
Ordinal seq_limit(const AffineSeq& s);

// Shape of s.at(n) for every n >= 1: high + w^sigma*(a0 + c*n) + low, where
// every exponent of high is above sigma and every exponent of low is below.
struct UniformForm {
  Ordinal high;
  Ordinal sigma;
  mpz_class a0;
  mpz_class c;
  Ordinal low;
};
UniformForm uniform_form(const AffineSeq& s);

// Sign of compare(R(n), S(n)) for every n at once: at0 covers n == 0; for
// n >= 1 the sign is `before` on [1, flip), `at` at n == flip, and `after`
// for n > flip. Constant outcomes use flip == 1 with all three fields equal.
struct SignPattern {
  int at0;
  mpz_class flip;
  int before;
  int at;
  int after;
};

int sign_at(const SignPattern& p, const mpz_class& n);
bool sign_always(const SignPattern& p, int s);
bool sign_never(const SignPattern& p, int s);

SignPattern affine_compare(const AffineSeq& r, const AffineSeq& s);
// Pattern of compare(r.at(n), x).
SignPattern affine_compare_const(const AffineSeq& r, const Ordinal& x);

// Largest n with s.at(n) <= x; requires s.at(0) <= x < seq_limit(s).
mpz_class affine_floor(const AffineSeq& s, const Ordinal& x);
// The n with s.at(n) == x, if any.
std::optional<mpz_class> affine_index_of(const AffineSeq& s, const Ordinal& x);

// n |-> delta + s.at(n).
AffineSeq affine_add(const Ordinal& delta, const AffineSeq& s);
// n |-> s.at(from + n).
AffineSeq affine_suffix(const AffineSeq& s, const mpz_class& from);

// n |-> left_sub(a, s.at(n)), restricted to the n with a <= s.at(n). That
// index set is either empty or an upward closed interval; the values are
// listed pointwise for the finitely many indices below `start` and follow
// seq (value at start + k is seq.at(k)) from `start` on.
struct AffineTail {
  std::vector<std::pair<mpz_class, Ordinal>> exceptional;
  mpz_class start;
  std::optional<AffineSeq> seq;
};
AffineTail affine_left_sub(const Ordinal& a, const AffineSeq& s);

}  // namespace ordtop
