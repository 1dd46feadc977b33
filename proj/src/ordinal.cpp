#include "ordtop/ordinal.hpp"

#include <cctype>
#include <stdexcept>

#include "ordtop/errors.hpp"

namespace ordtop {

Ordinal::Ordinal() = default;
Ordinal::Ordinal(const Ordinal&) = default;
Ordinal::Ordinal(Ordinal&&) noexcept = default;
Ordinal& Ordinal::operator=(const Ordinal&) = default;
Ordinal& Ordinal::operator=(Ordinal&&) noexcept = default;
Ordinal::~Ordinal() = default;

Ordinal::Ordinal(std::vector<OrdTerm> ts, Trusted) : terms_(std::move(ts)) {}

Ordinal Ordinal::nat(const mpz_class& n) {
  if (n < 0) throw std::logic_error("Ordinal::nat requires a nonnegative value");
  if (n == 0) return {};
  std::vector<OrdTerm> ts;
  ts.push_back(OrdTerm{Ordinal(), n});
  return {std::move(ts), Trusted{}};
}

Ordinal Ordinal::nat(unsigned long n) { return nat(mpz_class(n)); }

Ordinal Ordinal::omega() { return single(nat(1ul), 1); }

Ordinal Ordinal::omega_power(const Ordinal& e) { return single(e, 1); }

Ordinal Ordinal::single(const Ordinal& e, const mpz_class& c) {
  if (c < 0) throw std::logic_error("Ordinal::single requires a nonnegative coefficient");
  if (c == 0) return {};
  std::vector<OrdTerm> ts;
  ts.push_back(OrdTerm{e, c});
  return {std::move(ts), Trusted{}};
}

Ordinal Ordinal::from_terms(const std::vector<OrdTerm>& raw) {
  Ordinal acc;
  for (const auto& t : raw) acc = add(acc, single(t.exp, t.coeff));
  return acc;
}

bool Ordinal::is_nat() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().exp.is_zero());
}

mpz_class Ordinal::nat_value() const {
  if (!is_nat()) throw std::logic_error("nat_value on a transfinite ordinal");
  return terms_.empty() ? mpz_class(0) : terms_.front().coeff;
}

const Ordinal& Ordinal::lead_exp() const {
  if (terms_.empty()) throw std::logic_error("lead_exp of zero");
  return terms_.front().exp;
}

bool Ordinal::is_zero() const { return terms_.empty(); }

int compare(const Ordinal& a, const Ordinal& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t n = ta.size() < tb.size() ? ta.size() : tb.size();
  for (std::size_t i = 0; i < n; ++i) {
    int ce = compare(ta[i].exp, tb[i].exp);
    if (ce != 0) return ce;
    int cc = cmp(ta[i].coeff, tb[i].coeff);
    if (cc != 0) return cc < 0 ? -1 : 1;
  }
  if (ta.size() == tb.size()) return 0;
  return ta.size() < tb.size() ? -1 : 1;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.terms_.empty()) return a;
  if (a.terms_.empty()) return b;
  const Ordinal& f = b.terms_.front().exp;
  std::vector<OrdTerm> out;
  std::size_t i = 0;
  while (i < a.terms_.size() && compare(a.terms_[i].exp, f) > 0) out.push_back(a.terms_[i++]);
  mpz_class lead = b.terms_.front().coeff;
  if (i < a.terms_.size() && compare(a.terms_[i].exp, f) == 0) lead += a.terms_[i].coeff;
  out.push_back(OrdTerm{f, lead});
  out.insert(out.end(), b.terms_.begin() + 1, b.terms_.end());
  return {std::move(out), Ordinal::Trusted{}};
}

Ordinal mul_nat(const Ordinal& a, const mpz_class& n) {
  if (n < 0) throw std::logic_error("mul_nat requires a nonnegative multiplier");
  if (a.terms_.empty() || n == 0) return {};
  std::vector<OrdTerm> out = a.terms_;
  out.front().coeff *= n;
  return {std::move(out), Ordinal::Trusted{}};
}

OrdinalKind kind(const Ordinal& a) {
  if (a.terms().empty()) return OrdinalKind::Zero;
  if (a.terms().back().exp.is_zero()) return OrdinalKind::Successor;
  return OrdinalKind::Limit;
}

Ordinal predecessor(const Ordinal& a) {
  if (kind(a) != OrdinalKind::Successor) throw NotASuccessor();
  std::vector<OrdTerm> out = a.terms_;
  if (out.back().coeff == 1) {
    out.pop_back();
  } else {
    out.back().coeff -= 1;
  }
  return {std::move(out), Ordinal::Trusted{}};
}

Ordinal successor(const Ordinal& a) { return add(a, Ordinal::nat(1ul)); }

Ordinal left_sub(const Ordinal& a, const Ordinal& b) {
  int c = compare(a, b);
  if (c > 0) throw std::logic_error("left_sub requires the first argument to be <= the second");
  if (c == 0) return {};
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t i = 0;
  while (true) {
    if (i >= ta.size()) {
      return Ordinal::from_terms(std::vector<OrdTerm>(tb.begin() + i, tb.end()));
    }
    if (i >= tb.size()) throw std::logic_error("left_sub invariant violated");
    int ce = compare(ta[i].exp, tb[i].exp);
    if (ce < 0) {
      return Ordinal::from_terms(std::vector<OrdTerm>(tb.begin() + i, tb.end()));
    }
    if (ce > 0) throw std::logic_error("left_sub invariant violated");
    int cc = cmp(ta[i].coeff, tb[i].coeff);
    if (cc < 0) {
      std::vector<OrdTerm> out;
      out.push_back(OrdTerm{tb[i].exp, tb[i].coeff - ta[i].coeff});
      out.insert(out.end(), tb.begin() + i + 1, tb.end());
      return Ordinal::from_terms(out);
    }
    if (cc > 0) throw std::logic_error("left_sub invariant violated");
    ++i;
  }
}

std::pair<mpz_class, Ordinal> div_nat(const Ordinal& x, const Ordinal& t) {
  if (t.is_zero()) throw std::logic_error("div_nat by zero");
  if (x.is_zero()) return {mpz_class(0), Ordinal()};
  const Ordinal& sigma = t.lead_exp();
  if (compare(x.lead_exp(), sigma) > 0) {
    throw std::logic_error("div_nat requires the dividend below t*omega");
  }
  if (compare(x, t) < 0) return {mpz_class(0), x};
  // x >= t, so x's leading exponent equals sigma
  mpz_class q = x.terms().front().coeff / t.terms().front().coeff;
  while (q > 0 && compare(mul_nat(t, q), x) > 0) --q;
  Ordinal r = left_sub(mul_nat(t, q), x);
  int guard = 0;
  while (compare(r, t) >= 0) {
    ++q;
    r = left_sub(mul_nat(t, q), x);
    if (++guard > 4) throw std::logic_error("div_nat failed to converge");
  }
  return {q, r};
}

namespace {

struct Parser {
  std::string_view s;
  std::size_t i = 0;

  char peek() const { return i < s.size() ? s[i] : '\0'; }
  bool eof() const { return i >= s.size(); }
  [[noreturn]] void fail(const std::string& m) const { throw SyntaxError(m, i); }

  mpz_class parse_nat() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number");
    if (peek() == '0') fail("number may not start with 0");
    std::size_t j = i;
    while (!eof() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    return mpz_class(std::string(s.substr(j, i - j)), 10);
  }

  Ordinal parse_term() {
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      return Ordinal::nat(parse_nat());
    }
    if (peek() != 'w') fail("expected a term");
    ++i;
    Ordinal e = Ordinal::nat(1ul);
    if (peek() == '^') {
      ++i;
      if (peek() == '(') {
        ++i;
        e = parse_sum();
        if (peek() != ')') fail("expected )");
        ++i;
      } else if (peek() == 'w') {
        ++i;
        e = Ordinal::omega();
      } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
        e = Ordinal::nat(static_cast<unsigned long>(peek() - '0'));
        ++i;
      } else {
        fail("expected an exponent");
      }
    }
    mpz_class c = 1;
    if (peek() == '*') {
      ++i;
      c = parse_nat();
    }
    return Ordinal::single(e, c);
  }

  Ordinal parse_sum() {
    if (peek() == '0') {
      ++i;
      return {};
    }
    Ordinal acc = parse_term();
    while (peek() == '+') {
      ++i;
      acc = add(acc, parse_term());
    }
    return acc;
  }
};

}  // namespace

Ordinal parse_ordinal(std::string_view text) {
  Parser p{text};
  if (p.eof()) p.fail("empty input");
  Ordinal v = p.parse_sum();
  if (!p.eof()) p.fail("unexpected trailing input");
  return v;
}

std::string format_ordinal(const Ordinal& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : a.terms()) {
    if (!first) out += '+';
    first = false;
    if (t.exp.is_zero()) {
      out += t.coeff.get_str();
      continue;
    }
    out += 'w';
    if (!(t.exp.is_nat() && t.exp.nat_value() == 1)) {
      out += '^';
      if (t.exp.is_nat() && t.exp.nat_value() <= 9) {
        out += static_cast<char>('0' + t.exp.nat_value().get_ui());
      } else if (t.exp == Ordinal::omega()) {
        out += 'w';
      } else {
        out += '(';
        out += format_ordinal(t.exp);
        out += ')';
      }
    }
    if (t.coeff != 1) {
      out += '*';
      out += t.coeff.get_str();
    }
  }
  return out;
}

}  // namespace ordtop
