#include "ordtop/prodset.hpp"

#include <algorithm>
#include <utility>

#include "ordtop/errors.hpp"
#include "ordtop/stepmap.hpp"

namespace ordtop {

bool operator==(const ProdAmbient& a, const ProdAmbient& b) {
  return a.x == b.x && a.y == b.y;
}

void validate_prod_ambient(const ProdAmbient& a) {
  validate_ambient(a.x);
  validate_ambient(a.y);
  if (a.x.topology != Topology::Order || a.y.topology != Topology::Order)
    throw Error(Error::Kind::Input, "product factors must carry the order topology");
}

ProdSet::ProdSet(ProdAmbient a) : ambient_(std::move(a)) {}

ProdSet ProdSet::empty(const ProdAmbient& a) {
  validate_prod_ambient(a);
  return ProdSet(a);
}

ProdSet ProdSet::rect(const ProdAmbient& a, OrdSet xs, OrdSet ys) {
  validate_prod_ambient(a);
  if (xs.ambient() != a.x || ys.ambient() != a.y)
    throw Error(Error::Kind::Input, "rectangle factor ambient mismatch");
  ProdSet out(a);
  if (!xs.is_empty() && !ys.is_empty())
    out.rects_.push_back({std::move(xs), std::move(ys)});
  return out;
}

ProdSet ProdSet::pairs(const ProdAmbient& a, PairSeq p) {
  validate_prod_ambient(a);
  ProdSet out(a);
  if (p.count && *p.count <= 0) return out;
  if (p.count) {
    mpz_class last = *p.count - 1;
    if (!ambient_contains(a.x, p.x.at(last)) || !ambient_contains(a.y, p.y.at(last)))
      throw Error(Error::Kind::Input, "pair ladder leaves the space");
  } else {
    if (compare(seq_limit(p.x), a.x.bound) > 0 || compare(seq_limit(p.y), a.y.bound) > 0)
      throw Error(Error::Kind::Input, "pair ladder leaves the space");
  }
  out.pairs_.push_back(std::move(p));
  return out;
}

bool ProdSet::is_empty() const { return rects_.empty() && pairs_.empty(); }

namespace {

bool pair_index_ok(const PairSeq& p, const mpz_class& n) {
  return !p.count || n < *p.count;
}

// y values the pair atoms contribute at abscissa x.
std::vector<Ordinal> pair_values_at(const ProdSet& s, const Ordinal& x) {
  std::vector<Ordinal> out;
  for (const auto& p : s.pair_atoms()) {
    std::optional<mpz_class> n = affine_index_of(p.x, x);
    if (n && pair_index_ok(p, *n)) out.push_back(p.y.at(*n));
  }
  return out;
}

}  // namespace

bool ProdSet::member(const Ordinal& px, const Ordinal& py) const {
  if (!ambient_contains(ambient_.x, px) || !ambient_contains(ambient_.y, py))
    return false;
  for (const auto& r : rects_)
    if (r.x.member(px) && r.y.member(py)) return true;
  for (const auto& p : pairs_) {
    std::optional<mpz_class> n = affine_index_of(p.x, px);
    if (n && pair_index_ok(p, *n) && compare(p.y.at(*n), py) == 0) return true;
  }
  return false;
}

ProdSet prod_union(const ProdSet& a, const ProdSet& b) {
  if (!(a.ambient() == b.ambient()))
    throw Error(Error::Kind::Input, "product ambient mismatch");
  ProdSet out = a;
  out.rects_.insert(out.rects_.end(), b.rects_.begin(), b.rects_.end());
  out.pairs_.insert(out.pairs_.end(), b.pairs_.begin(), b.pairs_.end());
  return out;
}

ProdSet prod_restrict(const ProdSet& s, const OrdSet& rx, const OrdSet& ry) {
  if (rx.ambient() != s.ambient().x || ry.ambient() != s.ambient().y)
    throw Error(Error::Kind::Input, "restriction factor ambient mismatch");
  ProdSet out(s.ambient());
  for (const auto& r : s.rects()) {
    OrdSet ix = ord_intersect(r.x, rx);
    OrdSet iy = ord_intersect(r.y, ry);
    if (!ix.is_empty() && !iy.is_empty()) out.rects_.push_back({ix, iy});
  }
  for (const auto& p : s.pair_atoms()) {
    OrdSet range_x = OrdSet::ladder_points(s.ambient().x, p.x, p.count);
    OrdSet range_y = OrdSet::ladder_points(s.ambient().y, p.y, p.count);
    IntSet ix = affine_index_set(p.x, p.count, ord_intersect(rx, range_x));
    IntSet iy = affine_index_set(p.y, p.count, ord_intersect(ry, range_y));
    IntSet both = int_intersect(ix, iy).normalized();
    for (const auto& run : both.runs()) {
      PairSeq np{AffineSeq(p.x.at(run.start), mul_nat(p.x.step(), run.stride)),
                 AffineSeq(p.y.at(run.start), mul_nat(p.y.step(), run.stride)),
                 run.count};
      out.pairs_.push_back(std::move(np));
    }
  }
  return out;
}

ProdSet prod_transpose(const ProdSet& s) {
  ProdSet out(ProdAmbient{s.ambient().y, s.ambient().x});
  for (const auto& r : s.rects()) out.rects_.push_back({r.y, r.x});
  for (const auto& p : s.pair_atoms()) out.pairs_.push_back({p.y, p.x, p.count});
  return out;
}

OrdSet vertical_slice(const ProdSet& s, const Ordinal& x) {
  OrdSet out = OrdSet::empty(s.ambient().y);
  if (!ambient_contains(s.ambient().x, x)) return out;
  for (const auto& r : s.rects())
    if (r.x.member(x)) out = ord_union(out, r.y);
  for (const auto& v : pair_values_at(s, x))
    out = ord_union(out, OrdSet::singleton(s.ambient().y, v));
  return out;
}

OrdSet horizontal_slice(const ProdSet& s, const Ordinal& y) {
  return vertical_slice(prod_transpose(s), y);
}

std::vector<SliceClass> vertical_slice_classes(const ProdSet& s) {
  std::vector<SliceClass> classes;
  classes.push_back({OrdSet::full(s.ambient().x), OrdSet::empty(s.ambient().y)});
  for (const auto& r : s.rects()) {
    std::vector<SliceClass> next;
    for (const auto& c : classes) {
      OrdSet inside = ord_intersect(c.xs, r.x);
      OrdSet outside = ord_diff(c.xs, r.x);
      if (!inside.is_empty()) next.push_back({inside, ord_union(c.slice, r.y)});
      if (!outside.is_empty()) next.push_back({outside, c.slice});
      if (next.size() > 64) throw NotRepresentable("too many slice classes");
    }
    classes = std::move(next);
  }
  return classes;
}

namespace {

struct LimParts {
  std::vector<ProdSet::Rect> rects;
  std::vector<ProdPoint> corners;
};

LimParts limit_parts(const ProdSet& s) {
  LimParts out;
  for (const auto& r : s.rects()) {
    OrdSet lx = limit_points(r.x);
    OrdSet ly = limit_points(r.y);
    if (!lx.is_empty()) out.rects.push_back({lx, closure(r.y)});
    if (!ly.is_empty()) out.rects.push_back({closure(r.x), ly});
  }
  for (const auto& p : s.pair_atoms()) {
    if (p.count) continue;
    Ordinal u = seq_limit(p.x);
    Ordinal v = seq_limit(p.y);
    if (ambient_contains(s.ambient().x, u) && ambient_contains(s.ambient().y, v))
      out.corners.push_back({u, v});
  }
  return out;
}

// Least (x, y) in lexicographic order with x in xs, y in defects, and
// (x, y) outside s. Callers arrange defects to be disjoint from every
// rectangle slice over xs, so only pair atoms can cover a candidate.
std::optional<ProdPoint> first_defect(const OrdSet& xs, const OrdSet& defects,
                                      const ProdSet& s) {
  if (xs.is_empty() || defects.is_empty()) return std::nullopt;
  if (compare(defects.order_type(), Ordinal::omega()) >= 0) {
    Ordinal x0 = xs.min();
    std::optional<Ordinal> y = defects.min();
    while (y && s.member(x0, *y)) y = defects.first_above(*y);
    if (!y) return std::nullopt;
    return ProdPoint{x0, *y};
  }
  std::vector<Ordinal> ds;
  for (std::optional<Ordinal> it = defects.min(); it; it = defects.first_above(*it))
    ds.push_back(*it);
  std::vector<Ordinal> patched;
  for (const auto& p : s.pair_atoms()) {
    std::optional<mpz_class> n = affine_index_of(p.y, ds.front());
    if (!n || !pair_index_ok(p, *n)) continue;
    Ordinal px = p.x.at(*n);
    if (!xs.member(px)) continue;
    bool all = true;
    for (const auto& dj : ds)
      if (!s.member(px, dj)) {
        all = false;
        break;
      }
    if (all) patched.push_back(px);
  }
  auto is_patched = [&](const Ordinal& v) {
    for (const auto& g : patched)
      if (compare(g, v) == 0) return true;
    return false;
  };
  std::optional<Ordinal> x = xs.min();
  while (x && is_patched(*x)) x = xs.first_above(*x);
  if (!x) return std::nullopt;
  for (const auto& dj : ds)
    if (!s.member(*x, dj)) return ProdPoint{*x, dj};
  return std::nullopt;
}

void consider_lex(std::optional<ProdPoint>& best, const ProdPoint& c) {
  if (!best) {
    best = c;
    return;
  }
  int rx = compare(c.x, best->x);
  if (rx < 0 || (rx == 0 && compare(c.y, best->y) < 0)) best = c;
}

}  // namespace

bool prod_is_limit_point(const ProdSet& s, const Ordinal& px, const Ordinal& py) {
  LimParts lp = limit_parts(s);
  for (const auto& r : lp.rects)
    if (r.x.member(px) && r.y.member(py)) return true;
  for (const auto& c : lp.corners)
    if (compare(c.x, px) == 0 && compare(c.y, py) == 0) return true;
  return false;
}

ProdSet prod_closure(const ProdSet& s) {
  ProdSet out = s;
  LimParts lp = limit_parts(s);
  for (auto& r : lp.rects) out.rects_.push_back(std::move(r));
  for (const auto& c : lp.corners)
    out.rects_.push_back({OrdSet::singleton(s.ambient().x, c.x),
                          OrdSet::singleton(s.ambient().y, c.y)});
  return out;
}

std::optional<ProdPoint> first_outside_limit(const ProdSet& s) {
  LimParts lp = limit_parts(s);
  std::vector<SliceClass> classes = vertical_slice_classes(s);
  std::optional<ProdPoint> best;
  for (const auto& r : lp.rects) {
    for (const auto& c : classes) {
      OrdSet rx = ord_intersect(c.xs, r.x);
      if (rx.is_empty()) continue;
      OrdSet d = ord_diff(r.y, c.slice);
      std::optional<ProdPoint> cand = first_defect(rx, d, s);
      if (cand) consider_lex(best, *cand);
    }
  }
  for (const auto& c : lp.corners)
    if (!s.member(c.x, c.y)) consider_lex(best, c);
  return best;
}

bool prod_is_closed(const ProdSet& s) { return !first_outside_limit(s); }

std::optional<ProdPoint> first_vertical_slice_violation(const ProdSet& s) {
  std::vector<SliceClass> classes = vertical_slice_classes(s);
  std::optional<ProdPoint> best;
  for (const auto& c : classes) {
    OrdSet dl = ord_diff(limit_points(c.slice), c.slice);
    std::optional<ProdPoint> cand = first_defect(c.xs, dl, s);
    if (cand) consider_lex(best, *cand);
  }
  return best;
}

std::optional<ProdPoint> first_horizontal_slice_violation(const ProdSet& s) {
  std::optional<ProdPoint> t = first_vertical_slice_violation(prod_transpose(s));
  if (!t) return std::nullopt;
  return ProdPoint{t->y, t->x};
}

namespace {

// Least n with s.at(n) strictly above v, if any.
std::optional<mpz_class> least_index_above(const AffineSeq& s, const Ordinal& v) {
  if (compare(s.at(0), v) > 0) return mpz_class(0);
  if (compare(v, seq_limit(s)) >= 0) return std::nullopt;
  return affine_floor(s, v) + 1;
}

}  // namespace

std::optional<Ordinal> next_slice_abscissa(const ProdSet& s,
                                           const std::optional<Ordinal>& above,
                                           const std::optional<Ordinal>& ymin) {
  std::vector<SliceClass> classes = vertical_slice_classes(s);
  std::optional<Ordinal> best;
  auto consider = [&](const Ordinal& x) {
    if (!best || compare(x, *best) < 0) best = x;
  };
  for (const auto& c : classes) {
    if (c.slice.is_empty()) continue;
    if (ymin && compare(c.slice.sup(), *ymin) <= 0) continue;
    std::optional<Ordinal> x =
        above ? c.xs.first_above(*above) : std::optional<Ordinal>(c.xs.min());
    if (x) consider(*x);
  }
  for (const auto& p : s.pair_atoms()) {
    mpz_class n = 0;
    if (above) {
      std::optional<mpz_class> nx = least_index_above(p.x, *above);
      if (!nx) continue;
      n = *nx;
    }
    if (ymin) {
      std::optional<mpz_class> ny = least_index_above(p.y, *ymin);
      if (!ny) continue;
      if (*ny > n) n = *ny;
    }
    if (!pair_index_ok(p, n)) continue;
    consider(p.x.at(n));
  }
  return best;
}

}  // namespace ordtop
