#include "ordtop/affine.hpp"

#include <stdexcept>

#include "ordtop/errors.hpp"

namespace ordtop {

AffineSeq::AffineSeq(Ordinal base, Ordinal step)
    : base_(std::move(base)), step_(std::move(step)) {
  if (step_.is_zero()) throw ZeroStep();
}

Ordinal AffineSeq::at(const mpz_class& n) const {
  if (n < 0) throw std::logic_error("AffineSeq::at requires a nonnegative index");
  return add(base_, mul_nat(step_, n));
}

bool operator==(const AffineSeq& a, const AffineSeq& b) {
  return a.base() == b.base() && a.step() == b.step();
}

Ordinal seq_limit(const AffineSeq& s) {
  return add(s.base(), Ordinal::omega_power(successor(s.step().lead_exp())));
}

UniformForm uniform_form(const AffineSeq& s) {
  UniformForm u;
  u.sigma = s.step().lead_exp();
  u.c = s.step().terms().front().coeff;
  u.low = Ordinal::from_terms(std::vector<OrdTerm>(s.step().terms().begin() + 1,
                                                   s.step().terms().end()));
  std::vector<OrdTerm> high;
  u.a0 = 0;
  for (const auto& t : s.base().terms()) {
    int c = compare(t.exp, u.sigma);
    if (c > 0) {
      high.push_back(t);
    } else if (c == 0) {
      u.a0 = t.coeff;
    }
    // terms below sigma are absorbed for n >= 1
  }
  u.high = Ordinal::from_terms(high);
  return u;
}

int sign_at(const SignPattern& p, const mpz_class& n) {
  if (n == 0) return p.at0;
  if (n < p.flip) return p.before;
  if (n == p.flip) return p.at;
  return p.after;
}

bool sign_always(const SignPattern& p, int s) {
  if (p.at0 != s || p.at != s || p.after != s) return false;
  return p.flip <= 1 || p.before == s;
}

bool sign_never(const SignPattern& p, int s) {
  if (p.at0 == s || p.at == s || p.after == s) return false;
  return p.flip <= 1 || p.before != s;
}

namespace {

// One CNF position whose coefficient may grow linearly in the index.
struct SymTerm {
  Ordinal exp;
  mpz_class p;
  mpz_class q;
};

std::vector<SymTerm> symbolic_terms(const UniformForm& u) {
  std::vector<SymTerm> v;
  for (const auto& t : u.high.terms()) v.push_back({t.exp, t.coeff, 0});
  v.push_back({u.sigma, u.a0, u.c});
  for (const auto& t : u.low.terms()) v.push_back({t.exp, t.coeff, 0});
  return v;
}

std::vector<SymTerm> constant_terms(const Ordinal& x) {
  std::vector<SymTerm> v;
  for (const auto& t : x.terms()) v.push_back({t.exp, t.coeff, 0});
  return v;
}

// Shared walk over two symbolic CNF term lists, valid for indices n >= 1.
// eval_at resolves the single index where a growing coefficient difference
// passes through zero.
template <typename EvalAt>
SignPattern walk(int at0, const std::vector<SymTerm>& lhs, const std::vector<SymTerm>& rhs,
                 EvalAt eval_at) {
  auto constant = [&](int s) { return SignPattern{at0, 1, s, s, s}; };
  std::size_t i = 0;
  while (true) {
    if (i == lhs.size() && i == rhs.size()) return constant(0);
    if (i == lhs.size()) return constant(-1);
    if (i == rhs.size()) return constant(1);
    int ce = compare(lhs[i].exp, rhs[i].exp);
    if (ce != 0) return constant(ce);
    mpz_class dp = lhs[i].p - rhs[i].p;
    mpz_class dq = lhs[i].q - rhs[i].q;
    if (dq == 0) {
      if (dp != 0) return constant(dp < 0 ? -1 : 1);
      ++i;
      continue;
    }
    // delta(n) = dp + dq*n is strictly monotone and crosses zero once.
    int after = dq < 0 ? -1 : 1;
    mpz_class flip;
    mpz_class mag_p = after > 0 ? -dp : dp;
    mpz_class mag_q = after > 0 ? dq : -dq;
    if (mag_p <= mag_q) {
      flip = 1;
    } else {
      flip = (mag_p + mag_q - 1) / mag_q;
    }
    mpz_class delta_at = dp + dq * flip;
    int at = delta_at == 0 ? eval_at(flip) : after;
    return SignPattern{at0, flip, -after, at, after};
  }
}

}  // namespace

SignPattern affine_compare(const AffineSeq& r, const AffineSeq& s) {
  int at0 = compare(r.at(0), s.at(0));
  UniformForm ur = uniform_form(r);
  UniformForm us = uniform_form(s);
  return walk(at0, symbolic_terms(ur), symbolic_terms(us),
              [&](const mpz_class& n) { return compare(r.at(n), s.at(n)); });
}

SignPattern affine_compare_const(const AffineSeq& r, const Ordinal& x) {
  int at0 = compare(r.at(0), x);
  UniformForm ur = uniform_form(r);
  return walk(at0, symbolic_terms(ur), constant_terms(x),
              [&](const mpz_class& n) { return compare(r.at(n), x); });
}

mpz_class affine_floor(const AffineSeq& s, const Ordinal& x) {
  SignPattern p = affine_compare_const(s, x);
  if (p.after <= 0) throw std::logic_error("affine_floor requires x below the limit");
  if (p.at <= 0) return p.flip;
  if (p.flip >= 2 && p.before <= 0) return p.flip - 1;
  if (p.at0 <= 0) return 0;
  throw std::logic_error("affine_floor requires the base at or below x");
}

std::optional<mpz_class> affine_index_of(const AffineSeq& s, const Ordinal& x) {
  SignPattern p = affine_compare_const(s, x);
  if (p.at0 == 0) return mpz_class(0);
  if (p.at == 0) return p.flip;
  if (p.after == 0 || (p.flip >= 2 && p.before == 0)) {
    throw std::logic_error("strictly increasing sequence matched a constant on a range");
  }
  return std::nullopt;
}

AffineSeq affine_add(const Ordinal& delta, const AffineSeq& s) {
  return AffineSeq(add(delta, s.base()), s.step());
}

AffineSeq affine_suffix(const AffineSeq& s, const mpz_class& from) {
  return AffineSeq(s.at(from), s.step());
}

AffineTail affine_left_sub(const Ordinal& a, const AffineSeq& s) {
  SignPattern p = affine_compare_const(s, a);
  // First index with s.at(n) >= a; the defined set is upward closed.
  std::optional<mpz_class> first;
  if (p.at0 >= 0) {
    first = mpz_class(0);
  } else if (p.flip >= 2 && p.before >= 0) {
    first = mpz_class(1);
  } else if (p.at >= 0) {
    first = p.flip;
  } else if (p.after >= 0) {
    first = p.flip + 1;
  }
  AffineTail out;
  if (!first) {
    out.start = 0;
    return out;
  }
  mpz_class start = *first;
  if (start < 1) start = 1;
  start += 1;
  for (mpz_class n = *first; n < start; ++n) {
    out.exceptional.emplace_back(n, left_sub(a, s.at(n)));
  }
  out.start = start;
  out.seq = AffineSeq(left_sub(a, s.at(start)), s.step());
  // The tail claim is structural; spot-check it before returning.
  for (int k = 1; k <= 2; ++k) {
    if (out.seq->at(k) != left_sub(a, s.at(start + k))) {
      throw std::logic_error("affine_left_sub tail mismatch");
    }
  }
  return out;
}

}  // namespace ordtop
