#include "ordtop/ordset.hpp"

#include <stdexcept>

#include "ordtop/errors.hpp"

namespace ordtop {

bool operator==(const Ambient& a, const Ambient& b) {
  return a.bound == b.bound && a.closed == b.closed && a.topology == b.topology;
}

void validate_ambient(const Ambient& a) {
  if (a.topology == Topology::Directed) {
    if (!a.closed || kind(a.bound) != OrdinalKind::Limit)
      throw Error(Error::Kind::Input,
                  "directed topology requires a closed ambient with a limit bound");
  }
}

int ambient_level(const Ambient& a) {
  if (a.bound.is_zero() || a.bound.is_nat()) return 0;
  const Ordinal& e = a.bound.lead_exp();
  if (!e.is_nat()) throw NotRepresentable("ambient bound above every representable level");
  mpz_class lv = e.nat_value();
  if (lv > 16) throw NotRepresentable("ambient bound above every representable level");
  return static_cast<int>(lv.get_ui());
}

namespace {

LSet space_lset(const Ambient& a) {
  int level = ambient_level(a);
  LSet open_part = LSet::below(level, a.bound);
  if (!a.closed) return open_part;
  return ls_union(open_part, LSet::point(level, a.bound));
}

bool in_space(const Ambient& a, const Ordinal& p) {
  int c = compare(p, a.bound);
  return c < 0 || (c == 0 && a.closed);
}

void require_order(const OrdSet& s, const char* what) {
  if (s.ambient().topology != Topology::Order)
    throw std::logic_error(std::string(what) + " requires the order topology");
}

void require_same_ambient(const OrdSet& a, const OrdSet& b) {
  if (!(a.ambient() == b.ambient())) throw std::logic_error("ambient mismatch");
}

}  // namespace

OrdSet::OrdSet(Ambient a, LSet s) : ambient_(std::move(a)), set_(std::move(s)) {}

OrdSet OrdSet::empty(const Ambient& a) {
  validate_ambient(a);
  return OrdSet(a, LSet::empty(ambient_level(a)));
}

OrdSet OrdSet::full(const Ambient& a) {
  validate_ambient(a);
  return OrdSet(a, space_lset(a));
}

OrdSet OrdSet::singleton(const Ambient& a, const Ordinal& p) {
  validate_ambient(a);
  if (!in_space(a, p)) throw Error(Error::Kind::Input, "point outside the ambient");
  return OrdSet(a, LSet::point(ambient_level(a), p));
}

OrdSet OrdSet::interval(const Ambient& a, const Ordinal& lo, const Ordinal& hi,
                        bool closed_hi) {
  validate_ambient(a);
  if (lo > hi) throw Error(Error::Kind::Input, "interval endpoints out of order");
  int level = ambient_level(a);
  if (closed_hi) {
    if (!in_space(a, hi)) throw Error(Error::Kind::Input, "interval outside the ambient");
    LSet s = ls_diff(LSet::below(level, successor(hi)), LSet::below(level, lo));
    return OrdSet(a, std::move(s));
  }
  if (hi > a.bound) throw Error(Error::Kind::Input, "interval outside the ambient");
  return OrdSet(a, ls_diff(LSet::below(level, hi), LSet::below(level, lo)));
}

OrdSet OrdSet::ladder_points(const Ambient& a, const AffineSeq& s,
                             const std::optional<mpz_class>& count) {
  validate_ambient(a);
  int level = ambient_level(a);
  if (count) {
    if (*count > 0 && !in_space(a, s.at(*count - 1)))
      throw Error(Error::Kind::Input, "ladder outside the ambient");
  } else if (seq_limit(s) > a.bound) {
    throw Error(Error::Kind::Input, "ladder outside the ambient");
  }
  return OrdSet(a, LSet::ladder(level, s, count));
}

OrdSet OrdSet::ladder_blocks(const Ambient& a, const AffineSeq& s, const Ordinal& width,
                             const std::optional<mpz_class>& count) {
  validate_ambient(a);
  int level = ambient_level(a);
  bool multiple = !count || *count >= 2;
  if (multiple) {
    AffineSeq hi(add(s.base(), width), s.step());
    SignPattern p = affine_compare(hi, affine_suffix(s, 1));
    if (!sign_never(p, 1))
      throw Error(Error::Kind::Input, "ladder blocks overlap the next block");
  }
  if (count) {
    if (*count > 0 && !width.is_zero()) {
      Ordinal last_end = add(s.at(*count - 1), width);
      Ordinal cap = a.closed ? successor(a.bound) : a.bound;
      if (last_end > cap)
        throw Error(Error::Kind::Input, "ladder blocks outside the ambient");
    }
  } else if (seq_limit(s) > a.bound) {
    throw Error(Error::Kind::Input, "ladder blocks outside the ambient");
  }
  return OrdSet(a, LSet::ladder_blocks(level, s, width, count));
}

OrdSet OrdSet::from_lset(const Ambient& a, LSet s) {
  validate_ambient(a);
  if (s.level() != ambient_level(a)) s = s.lifted(ambient_level(a));
  return OrdSet(a, std::move(s));
}

bool OrdSet::is_empty() const { return set_.is_empty(); }

bool OrdSet::member(const Ordinal& p) const {
  if (!in_space(ambient_, p)) return false;
  return set_.member(p);
}

Ordinal OrdSet::min() const {
  if (is_empty()) throw EmptySet("min");
  return set_.min();
}

Ordinal OrdSet::sup() const {
  if (is_empty()) throw EmptySet("sup");
  return set_.sup().value;
}

bool OrdSet::sup_attained() const {
  if (is_empty()) throw EmptySet("sup");
  return set_.sup().attained;
}

Ordinal OrdSet::order_type() const { return set_.order_type(); }

Ordinal OrdSet::position_of(const Ordinal& x) const { return set_.position_of(x); }

Ordinal OrdSet::point_at(const Ordinal& alpha) const { return set_.point_at(alpha); }

std::optional<Ordinal> OrdSet::first_above(const Ordinal& x) const {
  LSet tail = ls_diff(set_, LSet::below(set_.level(), successor(x)));
  if (tail.is_empty()) return std::nullopt;
  return tail.min();
}

OrdSet ord_union(const OrdSet& a, const OrdSet& b) {
  require_same_ambient(a, b);
  return OrdSet::from_lset(a.ambient(), ls_union(a.lset(), b.lset()));
}

OrdSet ord_intersect(const OrdSet& a, const OrdSet& b) {
  require_same_ambient(a, b);
  return OrdSet::from_lset(a.ambient(), ls_intersect(a.lset(), b.lset()));
}

OrdSet ord_diff(const OrdSet& a, const OrdSet& b) {
  require_same_ambient(a, b);
  return OrdSet::from_lset(a.ambient(), ls_diff(a.lset(), b.lset()));
}

OrdSet ord_complement(const OrdSet& s) {
  return OrdSet::from_lset(s.ambient(), ls_diff(space_lset(s.ambient()), s.lset()));
}

bool ord_subset(const OrdSet& a, const OrdSet& b) {
  require_same_ambient(a, b);
  return ls_subset(a.lset(), b.lset());
}

bool ord_equal(const OrdSet& a, const OrdSet& b) {
  require_same_ambient(a, b);
  return ls_equal(a.lset(), b.lset());
}

bool is_cofinal(const OrdSet& s) {
  if (s.is_empty()) return false;
  return s.sup() == s.ambient().bound;
}

bool is_bounded(const OrdSet& s) { return !is_cofinal(s); }

OrdSet limit_points(const OrdSet& s) {
  const Ambient& a = s.ambient();
  if (a.topology == Topology::Directed) {
    if (is_cofinal(s)) return OrdSet::singleton(a, a.bound);
    return OrdSet::empty(a);
  }
  LSet lp = ls_limit_points(s.lset());
  return OrdSet::from_lset(a, ls_intersect(lp, space_lset(a)));
}

OrdSet closure(const OrdSet& s) { return ord_union(s, limit_points(s)); }

bool is_closed(const OrdSet& s) { return ord_equal(closure(s), s); }

bool is_compact(const OrdSet& s) {
  require_order(s, "is_compact");
  if (s.is_empty()) return true;
  if (!s.sup_attained()) return false;
  OrdSet additions = ord_diff(limit_points(s), s);
  return additions.is_empty();
}

std::optional<Ordinal> almost_closed_point(const OrdSet& s) {
  require_order(s, "almost_closed_point");
  if (s.is_empty()) return std::nullopt;
  const Ambient& a = s.ambient();
  Ordinal cand;
  if (s.sup_attained()) {
    cand = successor(s.sup());
  } else {
    cand = s.sup();
  }
  bool cand_ok = compare(cand, a.bound) < 0 || (compare(cand, a.bound) == 0 && a.closed);
  if (!cand_ok) return std::nullopt;
  OrdSet additions = ord_diff(closure(s), s);
  if (ord_equal(additions, OrdSet::singleton(a, cand))) return cand;
  return std::nullopt;
}

EquivReport three_equiv(const OrdSet& i) {
  require_order(i, "three_equiv");
  if (i.is_empty()) return {true, true, true};

  // continuity of the inclusion: no limit point is gained strictly below
  // the supremum when passing to the subspace view
  OrdSet lp = limit_points(i);
  OrdSet additions = ord_diff(lp, i);
  const Ambient& a = i.ambient();
  int level = ambient_level(a);
  OrdSet below_sup = OrdSet::from_lset(a, LSet::below(level, i.sup()));
  bool cond1 = ord_intersect(additions, below_sup).is_empty();

  // embedding: internal limit ranks and subspace limit points must agree at
  // every probe; disagreements concentrate on successors of gained points
  std::vector<Ordinal> probes;
  probes.push_back(i.min());
  if (i.sup_attained()) probes.push_back(i.sup());
  if (auto nxt = i.first_above(i.min())) probes.push_back(*nxt);
  if (!additions.is_empty()) {
    if (auto nxt = i.first_above(additions.min())) probes.push_back(*nxt);
    OrdSet low = ord_intersect(additions, below_sup);
    if (!low.is_empty()) {
      if (auto nxt = i.first_above(low.min())) probes.push_back(*nxt);
    }
  }
  Ordinal ot = i.order_type();
  if (compare(ot, Ordinal::omega()) > 0) probes.push_back(i.point_at(Ordinal::omega()));
  bool cond2 = true;
  for (const auto& x : probes) {
    bool internal_limit = kind(i.position_of(x)) == OrdinalKind::Limit;
    bool subspace_limit = lp.member(x);
    if (internal_limit != subspace_limit) cond2 = false;
  }

  bool cond3 = is_closed(i) || almost_closed_point(i).has_value();
  return {cond1, cond2, cond3};
}

Ordinal Compactification::eval(const Ordinal& alpha) const {
  int c = compare(alpha, internal_type);
  if (c > 0) throw OutOfDomain("argument above the added top");
  if (c == 0) return limit_point;
  return source.point_at(alpha);
}

Ordinal Compactification::inv(const Ordinal& y) const {
  if (y == limit_point) return internal_type;
  if (!source.member(y)) throw OutOfDomain("value outside the closure");
  return source.position_of(y);
}

OrdSet Compactification::image() const { return closure(source); }

Compactification compactify(const OrdSet& i) {
  auto l = almost_closed_point(i);
  if (!l) throw NotAlmostClosed("compactification requires an almost closed set");
  Ordinal tau = i.order_type();
  Ambient domain{tau, true, Topology::Order};
  return Compactification{std::move(domain), std::move(tau), std::move(*l), i};
}

}  // namespace ordtop
