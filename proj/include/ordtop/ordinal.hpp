#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ordtop {

enum class OrdinalKind { Zero, Successor, Limit };

struct OrdTerm;

// Ordinal below epsilon_0 in Cantor normal form: a finite sum
// w^e1*c1 + ... + w^ek*ck with e1 > e2 > ... > ek and every ci >= 1.
// Values are immutable; all operations return fresh values.
class Ordinal {
 public:
  Ordinal();
  Ordinal(const Ordinal&);
  Ordinal(Ordinal&&) noexcept;
  Ordinal& operator=(const Ordinal&);
  Ordinal& operator=(Ordinal&&) noexcept;
  ~Ordinal();

  static Ordinal nat(const mpz_class& n);
  static Ordinal nat(unsigned long n);
  static Ordinal omega();
  static Ordinal omega_power(const Ordinal& e);
  static Ordinal single(const Ordinal& e, const mpz_class& c);
  // Ordinal sum of the listed terms, left to right. Accepts unnormalized
  // input (any exponent order, repeated exponents, zero coefficients).
  static Ordinal from_terms(const std::vector<OrdTerm>& raw);

  const std::vector<OrdTerm>& terms() const;
  bool is_zero() const;
  bool is_nat() const;
  // The value as a natural number; requires is_nat().
  mpz_class nat_value() const;
  // Exponent of the leading term; requires a nonzero value.
  const Ordinal& lead_exp() const;

 private:
  struct Trusted {};
  Ordinal(std::vector<OrdTerm> ts, Trusted);

  std::vector<OrdTerm> terms_;

  friend Ordinal add(const Ordinal&, const Ordinal&);
  friend Ordinal mul_nat(const Ordinal&, const mpz_class&);
  friend Ordinal predecessor(const Ordinal&);
  friend Ordinal left_sub(const Ordinal&, const Ordinal&);
};

struct OrdTerm {
  Ordinal exp;
  mpz_class coeff;
};

inline const std::vector<OrdTerm>& Ordinal::terms() const { return terms_; }

// Total order; returns -1, 0, or 1.
int compare(const Ordinal& a, const Ordinal& b);

inline bool operator==(const Ordinal& a, const Ordinal& b) { return compare(a, b) == 0; }
inline bool operator!=(const Ordinal& a, const Ordinal& b) { return compare(a, b) != 0; }
inline bool operator<(const Ordinal& a, const Ordinal& b) { return compare(a, b) < 0; }
inline bool operator<=(const Ordinal& a, const Ordinal& b) { return compare(a, b) <= 0; }
inline bool operator>(const Ordinal& a, const Ordinal& b) { return compare(a, b) > 0; }
inline bool operator>=(const Ordinal& a, const Ordinal& b) { return compare(a, b) >= 0; }

Ordinal add(const Ordinal& a, const Ordinal& b);
Ordinal mul_nat(const Ordinal& a, const mpz_class& n);
OrdinalKind kind(const Ordinal& a);
// Throws NotASuccessor unless kind(a) == Successor.
Ordinal predecessor(const Ordinal& a);
Ordinal successor(const Ordinal& a);
// The unique x with add(a, x) == b; requires a <= b.
Ordinal left_sub(const Ordinal& a, const Ordinal& b);
// q and r with x == add(mul_nat(t, q), r) and r < t; requires t != 0 and
// x < t*omega (equivalently, x below omega^(lead_exp(t)+1)).
std::pair<mpz_class, Ordinal> div_nat(const Ordinal& x, const Ordinal& t);

// Grammar (ASCII, no whitespace):
//   ordinal := "0" | term ("+" term)*
//   term    := nat | "w" ("^" exponent)? ("*" nat)?
//   exponent := digit | "w" | "(" ordinal ")"
//   nat     := [1-9][0-9]*     (plus the standalone "0" production)
// Canonical printing: w^0*c prints as c, coefficient 1 is omitted, exponent 1
// prints as plain "w", finite exponents 2..9 print as ^d, exponent omega
// prints as ^w, all other exponents are parenthesized.
Ordinal parse_ordinal(std::string_view text);
std::string format_ordinal(const Ordinal& a);

}  // namespace ordtop
