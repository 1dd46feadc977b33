#include "ordtop/stepmap.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "ordtop/errors.hpp"
#include "ordtop/set_text.hpp"

namespace ordtop {

namespace {

using Piece = StepMap::Piece;
using RuleKind = StepMap::RuleKind;

Ordinal translate_at(const Ordinal& anchor, const Ordinal& delta, const Ordinal& p) {
  return add(delta, left_sub(anchor, p));
}

// The p with translate_at(anchor, delta, p) == v, if any.
std::optional<Ordinal> solve_translate(const Ordinal& anchor, const Ordinal& delta,
                                       const Ordinal& v) {
  if (v < delta) return std::nullopt;
  return add(anchor, left_sub(delta, v));
}

std::optional<Ordinal> pick_min(const std::optional<Ordinal>& a,
                                const std::optional<Ordinal>& b) {
  if (!a) return b;
  if (!b) return a;
  return compare(*a, *b) <= 0 ? a : b;
}

// [lo, hi) as a set in `into`. An exclusive end one past a closed bound is
// folded to [lo, bound]; anything further out stays for the builder to
// reject.
OrdSet clamped_interval(const Ambient& into, const Ordinal& lo, const Ordinal& hi) {
  if (into.closed && compare(hi, into.bound) > 0 && hi == successor(into.bound))
    return OrdSet::interval(into, lo, into.bound, true);
  return OrdSet::interval(into, lo, hi, false);
}

// {delta + left_sub(anchor, p) : p in s}, built inside `into`. Every element
// of s must sit at or above the anchor.
OrdSet transport(const Ambient& into, const Ordinal& anchor, const Ordinal& delta,
                 const OrdSet& s) {
  OrdSet acc = OrdSet::empty(into);
  if (s.is_empty()) return acc;
  for (const SetAtom& at : extract_atoms(s)) {
    switch (at.kind) {
      case SetAtom::Kind::Point:
        acc = ord_union(acc, OrdSet::singleton(into, translate_at(anchor, delta, at.a)));
        break;
      case SetAtom::Kind::Interval: {
        Ordinal lo = translate_at(anchor, delta, at.a);
        Ordinal hi = add(delta, left_sub(anchor, at.b));
        acc = ord_union(acc, clamped_interval(into, lo, hi));
        break;
      }
      case SetAtom::Kind::LadderPoints:
      case SetAtom::Kind::LadderBlocks: {
        bool blocks = at.kind == SetAtom::Kind::LadderBlocks;
        AffineTail t = affine_left_sub(anchor, AffineSeq(at.a, at.step));
        if (!t.seq) throw std::logic_error("transport anchored above its set");
        for (const auto& [n, r] : t.exceptional) {
          if (at.count && n >= *at.count) continue;
          Ordinal lo = add(delta, r);
          if (blocks) {
            acc = ord_union(acc, clamped_interval(into, lo, add(delta, add(r, at.b))));
          } else {
            acc = ord_union(acc, OrdSet::singleton(into, lo));
          }
        }
        if (!at.count || *at.count > t.start) {
          std::optional<mpz_class> rest;
          if (at.count) rest = *at.count - t.start;
          AffineSeq out = affine_add(delta, *t.seq);
          if (blocks) {
            acc = ord_union(acc, OrdSet::ladder_blocks(into, out, at.b, rest));
          } else {
            acc = ord_union(acc, OrdSet::ladder_points(into, out, rest));
          }
        }
        break;
      }
    }
  }
  return acc;
}

std::optional<mpz_class> ladder_count(const Ordinal& type) {
  if (type.is_nat()) return type.nat_value();
  return std::nullopt;
}

SetAtom single_blocks_atom(const OrdSet& s) {
  std::vector<SetAtom> atoms = extract_atoms(s);
  if (atoms.size() != 1 || atoms[0].kind != SetAtom::Kind::LadderBlocks)
    throw Error(Error::Kind::Input, "blocks rule needs a single uniform block run");
  return atoms[0];
}

OrdSet piece_image(const Ambient& into, const Piece& p) {
  switch (p.kind) {
    case RuleKind::Const:
      return OrdSet::singleton(into, p.value);
    case RuleKind::Shift:
      return transport(into, p.set.min(), p.value, p.set);
    case RuleKind::Ladder:
      return OrdSet::ladder_points(into, *p.out, ladder_count(p.set.order_type()));
    case RuleKind::Blocks:
      return OrdSet::ladder_points(into, *p.out, single_blocks_atom(p.set).count);
  }
  throw std::logic_error("unhandled rule kind");
}

void validate_map(const OrdSet& domain, const Codomain& cod,
                  const std::vector<Piece>& pieces) {
  const Ambient& da = domain.ambient();
  OrdSet cover = OrdSet::empty(da);
  for (const Piece& p : pieces) {
    if (p.set.ambient() != da)
      throw Error(Error::Kind::Input, "piece lives in a different space than the domain");
    if (p.set.is_empty()) throw Error(Error::Kind::Input, "empty piece");
    if (!ord_intersect(cover, p.set).is_empty())
      throw Error(Error::Kind::Input, "pieces overlap");
    cover = ord_union(cover, p.set);
    if (cod.kind == Codomain::Kind::Finite) {
      if (p.kind != RuleKind::Const || p.label < 0 ||
          static_cast<std::size_t>(p.label) >= cod.finite->points().size())
        throw Error(Error::Kind::Input, "a finite codomain needs a point label per piece");
      continue;
    }
    switch (p.kind) {
      case RuleKind::Const:
        if (p.label >= 0)
          throw Error(Error::Kind::Input, "point labels need a finite codomain");
        if (!ambient_contains(cod.space, p.value))
          throw Error(Error::Kind::Input, "constant value outside the codomain");
        break;
      case RuleKind::Shift:
      case RuleKind::Ladder:
      case RuleKind::Blocks:
        if (p.kind != RuleKind::Shift && !p.out)
          throw Error(Error::Kind::Input, "missing output sequence");
        if (p.kind == RuleKind::Ladder && p.set.order_type() > Ordinal::omega())
          throw Error(Error::Kind::Input, "ladder rule needs order type at most w");
        piece_image(cod.space, p);  // the set builders reject escapes
        break;
    }
  }
  if (!ord_equal(cover, domain))
    throw Error(Error::Kind::Input, "pieces must cover the domain exactly");
}

// Largest m with lo(m) strictly below p; p must exceed lo(0).
mpz_class strict_block_floor(const AffineSeq& lo, const Ordinal& p) {
  mpz_class m = affine_floor(lo, p);
  if (lo.at(m) == p) {
    if (m == 0) throw std::logic_error("no block approaches this point from below");
    m -= 1;
  }
  return m;
}

}  // namespace

bool ambient_contains(const Ambient& a, const Ordinal& p) {
  int c = compare(p, a.bound);
  return a.closed ? c <= 0 : c < 0;
}

Piece StepMap::const_piece(OrdSet set, Ordinal value) {
  return Piece{std::move(set), RuleKind::Const, std::move(value), -1, std::nullopt};
}

Piece StepMap::label_piece(OrdSet set, int label) {
  return Piece{std::move(set), RuleKind::Const, Ordinal(), label, std::nullopt};
}

Piece StepMap::shift_piece(OrdSet set, Ordinal delta) {
  return Piece{std::move(set), RuleKind::Shift, std::move(delta), -1, std::nullopt};
}

Piece StepMap::ladder_piece(OrdSet set, AffineSeq out) {
  return Piece{std::move(set), RuleKind::Ladder, Ordinal(), -1, std::move(out)};
}

Piece StepMap::blocks_piece(OrdSet set, AffineSeq out) {
  return Piece{std::move(set), RuleKind::Blocks, Ordinal(), -1, std::move(out)};
}

StepMap::StepMap(OrdSet domain, Codomain cod, std::vector<Piece> pieces)
    : domain_(std::move(domain)), cod_(std::move(cod)), pieces_(std::move(pieces)) {}

StepMap StepMap::to_space(Ambient cod, OrdSet domain, std::vector<Piece> pieces) {
  validate_ambient(cod);
  Codomain c;
  c.kind = Codomain::Kind::Space;
  c.space = cod;
  validate_map(domain, c, pieces);
  return StepMap(std::move(domain), std::move(c), std::move(pieces));
}

StepMap StepMap::to_finite(std::shared_ptr<const FiniteSpace> cod, OrdSet domain,
                           std::vector<Piece> pieces) {
  if (!cod) throw Error(Error::Kind::Input, "missing finite codomain");
  Codomain c;
  c.kind = Codomain::Kind::Finite;
  c.finite = std::move(cod);
  validate_map(domain, c, pieces);
  return StepMap(std::move(domain), std::move(c), std::move(pieces));
}

StepMap StepMap::to_product(StepMap first, StepMap second) {
  if (first.cod_.kind != Codomain::Kind::Space || second.cod_.kind != Codomain::Kind::Space)
    throw Error(Error::Kind::Input, "product components must map into ordinal intervals");
  if (first.domain_.ambient() != second.domain_.ambient() ||
      !ord_equal(first.domain_, second.domain_))
    throw Error(Error::Kind::Input, "product components must share a domain");
  Codomain c;
  c.kind = Codomain::Kind::Product;
  c.left = first.cod_.space;
  c.right = second.cod_.space;
  StepMap m(first.domain_, std::move(c), {});
  m.first_ = std::make_shared<const StepMap>(std::move(first));
  m.second_ = std::make_shared<const StepMap>(std::move(second));
  return m;
}

MapValue StepMap::eval(const Ordinal& p) const {
  if (cod_.kind == Codomain::Kind::Product) {
    MapValue a = first_->eval(p);
    MapValue b = second_->eval(p);
    return MapValue{std::move(a.x), std::move(b.x), -1};
  }
  for (const Piece& pc : pieces_) {
    if (!pc.set.member(p)) continue;
    switch (pc.kind) {
      case RuleKind::Const:
        return MapValue{pc.value, Ordinal(), pc.label};
      case RuleKind::Shift:
        return MapValue{translate_at(pc.set.min(), pc.value, p), Ordinal(), -1};
      case RuleKind::Ladder:
        return MapValue{pc.out->at(pc.set.position_of(p).nat_value()), Ordinal(), -1};
      case RuleKind::Blocks: {
        SetAtom at = single_blocks_atom(pc.set);
        return MapValue{pc.out->at(affine_floor(AffineSeq(at.a, at.step), p)), Ordinal(),
                        -1};
      }
    }
  }
  throw OutOfDomain("point outside the map's domain");
}

OrdSet map_image(const StepMap& f) {
  const Codomain& c = f.codomain();
  if (c.kind != Codomain::Kind::Space)
    throw Error(Error::Kind::Input, "ordinal image needs an ordinal codomain");
  OrdSet acc = OrdSet::empty(c.space);
  for (const Piece& p : f.pieces()) acc = ord_union(acc, piece_image(c.space, p));
  return acc;
}

std::uint32_t map_image_mask(const StepMap& f) {
  if (f.codomain().kind != Codomain::Kind::Finite)
    throw Error(Error::Kind::Input, "label image needs a finite codomain");
  std::uint32_t mask = 0;
  for (const Piece& p : f.pieces()) mask |= 1u << p.label;
  return mask;
}

namespace {

// Elements of s whose rank within s lies in the integer set.
OrdSet select_by_rank(const OrdSet& s, const IntSet& ranks) {
  OrdSet acc = OrdSet::empty(s.ambient());
  IntSet norm = ranks.normalized();
  for (const IntRun& run : norm.runs()) {
    LSet part = ls_rank_select(s.lset(), Ordinal::nat(run.start), Ordinal::nat(run.stride),
                               Ordinal::nat(1), run.count);
    acc = ord_union(acc, OrdSet::from_lset(s.ambient(), std::move(part)));
  }
  return acc;
}

// Union of the blocks of `at` whose index lies in the integer set.
OrdSet select_blocks(const Ambient& amb, const SetAtom& at, const IntSet& ns) {
  OrdSet acc = OrdSet::empty(amb);
  AffineSeq lo(at.a, at.step);
  IntSet norm = ns.normalized();
  for (const IntRun& run : norm.runs()) {
    if (run.count && *run.count == 1) {
      Ordinal base = lo.at(run.start);
      acc = ord_union(acc, clamped_interval(amb, base, add(base, at.b)));
      continue;
    }
    AffineSeq sub(lo.at(run.start), mul_nat(lo.step(), run.stride));
    acc = ord_union(acc, OrdSet::ladder_blocks(amb, sub, at.b, run.count));
  }
  return acc;
}

mpz_class int_count_below(const IntSet& s, const mpz_class& r) {
  mpz_class total = 0;
  IntSet norm = s.normalized();
  for (const IntRun& run : norm.runs()) {
    if (run.start >= r) continue;
    mpz_class k = (r - 1 - run.start) / run.stride + 1;
    if (run.count && *run.count < k) k = *run.count;
    total += k;
  }
  return total;
}

mpz_class per_class_count(const mpz_class& total, const mpz_class& cls,
                          const mpz_class& period) {
  if (total <= cls) return 0;
  return (total - 1 - cls) / period + 1;
}

}  // namespace

IntSet affine_index_set(const AffineSeq& seq, const std::optional<mpz_class>& count,
                        const OrdSet& target) {
  OrdSet range = OrdSet::ladder_points(target.ambient(), seq, count);
  OrdSet hit = ord_intersect(range, target);
  IntSet out;
  if (hit.is_empty()) return out;
  auto index_of = [&](const Ordinal& x) {
    std::optional<mpz_class> n = affine_index_of(seq, x);
    if (!n) throw std::logic_error("range point with no index");
    return *n;
  };
  for (const SetAtom& at : extract_atoms(hit)) {
    switch (at.kind) {
      case SetAtom::Kind::Point:
        out = int_union(out, IntSet::single(index_of(at.a)));
        break;
      case SetAtom::Kind::Interval: {
        if (seq.step() != Ordinal::nat(1))
          throw std::logic_error("consecutive range elements need step one");
        mpz_class n0 = index_of(at.a);
        Ordinal len = left_sub(at.a, at.b);
        if (len.is_nat()) {
          out = int_union(out, IntSet::of({IntRun{n0, 1, len.nat_value()}}));
        } else {
          std::optional<mpz_class> rest;
          if (count) rest = *count - n0;
          out = int_union(out, IntSet::of({IntRun{n0, 1, rest}}));
        }
        break;
      }
      case SetAtom::Kind::LadderPoints: {
        AffineSeq sub(at.a, at.step);
        if (at.count && *at.count <= 3) {
          for (mpz_class j = 0; j < *at.count; ++j)
            out = int_union(out, IntSet::single(index_of(sub.at(j))));
          break;
        }
        mpz_class m0 = index_of(sub.at(0));
        mpz_class m1 = index_of(sub.at(1));
        mpz_class m2 = index_of(sub.at(2));
        mpz_class stride = m2 - m1;
        if (index_of(sub.at(3)) != m2 + stride)
          throw std::logic_error("sub-ladder indices drift");
        if (m1 - m0 == stride) {
          std::optional<mpz_class> cnt;
          if (at.count) cnt = *at.count;
          out = int_union(out, IntSet::of({IntRun{m0, stride, cnt}}));
        } else {
          out = int_union(out, IntSet::single(m0));
          std::optional<mpz_class> cnt;
          if (at.count) cnt = *at.count - 1;
          out = int_union(out, IntSet::of({IntRun{m1, stride, cnt}}));
        }
        break;
      }
      case SetAtom::Kind::LadderBlocks: {
        AffineSeq lo(at.a, at.step);
        if (seq.step() != Ordinal::nat(1))
          throw std::logic_error("consecutive range elements need step one");
        if (!at.b.is_nat()) {
          if (at.count && *at.count == 1) {
            mpz_class n0 = index_of(at.a);
            std::optional<mpz_class> rest;
            if (count) rest = *count - n0;
            out = int_union(out, IntSet::of({IntRun{n0, 1, rest}}));
            break;
          }
          throw std::logic_error("infinite blocks inside a ladder range");
        }
        mpz_class w = at.b.nat_value();
        if (at.count && *at.count <= 3) {
          for (mpz_class i = 0; i < *at.count; ++i)
            out = int_union(out, IntSet::of({IntRun{index_of(lo.at(i)), 1, w}}));
          break;
        }
        mpz_class s0 = index_of(lo.at(0));
        mpz_class s1 = index_of(lo.at(1));
        mpz_class s2 = index_of(lo.at(2));
        mpz_class stride = s2 - s1;
        if (index_of(lo.at(3)) != s2 + stride)
          throw std::logic_error("sub-block indices drift");
        std::vector<IntRun> runs;
        if (s1 - s0 == stride) {
          std::optional<mpz_class> cnt;
          if (at.count) cnt = *at.count;
          for (mpz_class t = 0; t < w; ++t) runs.push_back(IntRun{s0 + t, stride, cnt});
        } else {
          std::optional<mpz_class> cnt;
          if (at.count) cnt = *at.count - 1;
          runs.push_back(IntRun{s0, 1, w});
          for (mpz_class t = 0; t < w; ++t) runs.push_back(IntRun{s1 + t, stride, cnt});
        }
        out = int_union(out, IntSet::of(runs));
        break;
      }
    }
  }
  return out;
}

namespace {

// Ranks of the elements of sub within sup. Guessed strides are verified by
// selecting the ranks back out of sup and comparing, so the result is exact.
IntSet subset_ranks(const OrdSet& sup, const OrdSet& sub) {
  IntSet out;
  if (sub.is_empty()) return out;
  auto rank_of = [&](const Ordinal& x) {
    Ordinal r = sup.position_of(x);
    if (!r.is_nat()) throw std::logic_error("rank not finite");
    return r.nat_value();
  };
  for (const SetAtom& at : extract_atoms(sub)) {
    switch (at.kind) {
      case SetAtom::Kind::Point:
        out = int_union(out, IntSet::single(rank_of(at.a)));
        break;
      case SetAtom::Kind::Interval: {
        mpz_class r0 = rank_of(at.a);
        Ordinal len = left_sub(at.a, at.b);
        std::optional<mpz_class> cnt;
        if (len.is_nat()) cnt = len.nat_value();
        out = int_union(out, IntSet::of({IntRun{r0, 1, cnt}}));
        break;
      }
      case SetAtom::Kind::LadderPoints:
      case SetAtom::Kind::LadderBlocks: {
        bool blocks = at.kind == SetAtom::Kind::LadderBlocks;
        mpz_class w = 1;
        if (blocks) {
          if (!at.b.is_nat()) throw NotRepresentable("subset ranks across infinite blocks");
          w = at.b.nat_value();
        }
        AffineSeq lo(at.a, at.step);
        OrdSet atom_set = blocks ? OrdSet::ladder_blocks(sub.ambient(), lo, at.b, at.count)
                                 : OrdSet::ladder_points(sub.ambient(), lo, at.count);
        if (at.count && *at.count <= 8) {
          for (mpz_class i = 0; i < *at.count; ++i)
            out = int_union(out, IntSet::of({IntRun{rank_of(lo.at(i)), 1, w}}));
          break;
        }
        std::vector<mpz_class> r;
        for (mpz_class i = 0; i < 8; ++i) r.push_back(rank_of(lo.at(i)));
        bool done = false;
        for (unsigned long period : {1ul, 2ul, 4ul}) {
          IntSet cand;
          bool shape_ok = true;
          for (unsigned long cls = 0; cls < period && shape_ok; ++cls) {
            mpz_class base = r[cls];
            mpz_class stride = r[cls + period] - base;
            if (stride < 1) {
              shape_ok = false;
              break;
            }
            for (unsigned long i = cls; i + period < 8; i += period) {
              if (r[i + period] - r[i] != stride) {
                shape_ok = false;
                break;
              }
            }
            if (!shape_ok) break;
            std::optional<mpz_class> cnt;
            if (at.count) cnt = per_class_count(*at.count, cls, period);
            if (cnt && *cnt == 0) continue;
            for (mpz_class t = 0; t < w; ++t)
              cand = int_union(cand, IntSet::of({IntRun{base + t, stride, cnt}}));
          }
          if (!shape_ok) continue;
          if (ord_equal(select_by_rank(sup, cand), atom_set)) {
            out = int_union(out, cand);
            done = true;
            break;
          }
        }
        if (!done) throw NotRepresentable("subset ranks beyond the affine fragment");
        break;
      }
    }
  }
  return out;
}

}  // namespace

OrdSet map_preimage(const StepMap& f, const OrdSet& target) {
  const Codomain& c = f.codomain();
  if (c.kind != Codomain::Kind::Space)
    throw Error(Error::Kind::Input, "ordinal preimage needs an ordinal codomain");
  if (target.ambient() != c.space)
    throw Error(Error::Kind::Input, "target lives in a different space than the codomain");
  OrdSet acc = OrdSet::empty(f.domain().ambient());
  for (const Piece& p : f.pieces()) {
    switch (p.kind) {
      case RuleKind::Const:
        if (target.member(p.value)) acc = ord_union(acc, p.set);
        break;
      case RuleKind::Shift: {
        Ordinal anchor = p.set.min();
        OrdSet img = transport(c.space, anchor, p.value, p.set);
        OrdSet hit = ord_intersect(img, target);
        if (!hit.is_empty())
          acc = ord_union(acc, transport(f.domain().ambient(), p.value, anchor, hit));
        break;
      }
      case RuleKind::Ladder: {
        IntSet ns = affine_index_set(*p.out, ladder_count(p.set.order_type()), target);
        if (!ns.is_empty()) acc = ord_union(acc, select_by_rank(p.set, ns));
        break;
      }
      case RuleKind::Blocks: {
        SetAtom at = single_blocks_atom(p.set);
        IntSet ns = affine_index_set(*p.out, at.count, target);
        if (!ns.is_empty()) acc = ord_union(acc, select_blocks(f.domain().ambient(), at, ns));
        break;
      }
    }
  }
  return acc;
}

OrdSet map_preimage_label(const StepMap& f, int label) {
  if (f.codomain().kind != Codomain::Kind::Finite)
    throw Error(Error::Kind::Input, "label preimage needs a finite codomain");
  OrdSet acc = OrdSet::empty(f.domain().ambient());
  for (const Piece& p : f.pieces())
    if (p.label == label) acc = ord_union(acc, p.set);
  return acc;
}

namespace {

// One way the map's values accumulate at domain points: through a piece
// whose elements crowd below every point of `region`. The approach either
// settles on one value, climbs along a translate, or runs inside single
// blocks of a blocks piece.
struct Approach {
  OrdSet region;
  enum Kind { Value, Translate, Blocky } kind;
  bool increasing;
  Ordinal value;
  int label;
  Ordinal anchor;
  Ordinal delta;
  const Piece* blocks;
};

std::vector<Approach> piece_approaches(const StepMap& f, const Piece& p) {
  std::vector<Approach> out;
  OrdSet lim = ord_intersect(limit_points(p.set), f.domain());
  if (lim.is_empty()) return out;
  switch (p.kind) {
    case RuleKind::Const:
      out.push_back(Approach{lim, Approach::Value, false, p.value, p.label, Ordinal(),
                             Ordinal(), nullptr});
      break;
    case RuleKind::Shift:
      out.push_back(Approach{lim, Approach::Translate, true, Ordinal(), -1, p.set.min(),
                             p.value, nullptr});
      break;
    case RuleKind::Ladder:
      out.push_back(Approach{lim, Approach::Value, true, seq_limit(*p.out), -1, Ordinal(),
                             Ordinal(), nullptr});
      break;
    case RuleKind::Blocks: {
      SetAtom at = single_blocks_atom(p.set);
      OrdSet rest = lim;
      if (!at.count) {
        Ordinal top = seq_limit(AffineSeq(at.a, at.step));
        if (ambient_contains(lim.ambient(), top)) {
          OrdSet single = OrdSet::singleton(lim.ambient(), top);
          OrdSet tail = ord_intersect(lim, single);
          if (!tail.is_empty())
            out.push_back(Approach{tail, Approach::Value, true, seq_limit(*p.out), -1,
                                   Ordinal(), Ordinal(), nullptr});
          rest = ord_diff(lim, single);
        }
      }
      if (!rest.is_empty())
        out.push_back(Approach{rest, Approach::Blocky, false, Ordinal(), -1, Ordinal(),
                               Ordinal(), &p});
      break;
    }
  }
  return out;
}

// First element of x other than pt, if any.
std::optional<Ordinal> first_except(const OrdSet& x, const Ordinal& pt) {
  if (x.is_empty()) return std::nullopt;
  if (x.min() != pt) return x.min();
  if (x.order_type() == Ordinal::nat(1)) return std::nullopt;
  return x.point_at(Ordinal::nat(1));
}

// First index whose sign the predicate rejects, per the pattern layout.
template <typename Bad>
std::optional<mpz_class> first_bad_sign(const SignPattern& pat, Bad bad,
                                        const std::optional<mpz_class>& count) {
  auto live = [&](const mpz_class& n) { return !count || n < *count; };
  if (live(0) && bad(pat.at0)) return mpz_class(0);
  if (pat.flip > 1 && live(1) && bad(pat.before)) return mpz_class(1);
  if (pat.flip >= 1 && live(pat.flip) && bad(pat.at)) return pat.flip;
  if (live(pat.flip + 1) && bad(pat.after)) return pat.flip + 1;
  return std::nullopt;
}

// Whether the block index of pts(i), affine as m_at0 + stride*i, matches
// the block that actually holds pts(i), for every live i at once. `strict`
// asks for the block strictly below the point instead of the one containing
// it. Returns the first failing point.
std::optional<Ordinal> block_alignment_mismatch(const AffineSeq& lo, const AffineSeq& pts,
                                                const std::optional<mpz_class>& count,
                                                const mpz_class& m_at0,
                                                const mpz_class& stride, bool strict) {
  AffineSeq lo_here(lo.at(m_at0), mul_nat(lo.step(), stride));
  AffineSeq lo_next(lo.at(m_at0 + 1), mul_nat(lo.step(), stride));
  SignPattern lower = affine_compare(lo_here, pts);
  SignPattern upper = affine_compare(pts, lo_next);
  std::optional<mpz_class> bad;
  if (strict) {
    bad = first_bad_sign(lower, [](int s) { return s >= 0; }, count);
    auto b2 = first_bad_sign(upper, [](int s) { return s > 0; }, count);
    if (b2 && (!bad || *b2 < *bad)) bad = b2;
  } else {
    bad = first_bad_sign(lower, [](int s) { return s > 0; }, count);
    auto b2 = first_bad_sign(upper, [](int s) { return s >= 0; }, count);
    if (b2 && (!bad || *b2 < *bad)) bad = b2;
  }
  if (!bad) return std::nullopt;
  return pts.at(*bad);
}

// The approach through `ap` reaches every point of x, and x lies inside
// piece q. Returns a point of x where the approach limit disagrees with the
// map's value there. Regions hold limit ordinals only, so x decomposes into
// points and ladders.
std::optional<Ordinal> mismatch_point(const StepMap& f, const Approach& ap, const Piece& q,
                                      OrdSet x) {
  const Codomain& cod = f.codomain();
  if (cod.kind == Codomain::Kind::Finite) {
    std::uint32_t need = cod.finite->min_open(q.label);
    if (need & (1u << ap.label)) return std::nullopt;
    return x.min();
  }
  const Ambient& cs = cod.space;
  bool dircod = cs.topology == Topology::Directed;
  std::optional<Ordinal> outside;

  if (ap.kind == Approach::Value) {
    if (!ambient_contains(cs, ap.value)) return x.min();
    if (dircod && ap.increasing && ap.value != cs.bound) return x.min();
    const Ordinal& v = ap.value;
    switch (q.kind) {
      case RuleKind::Const:
        if (v == q.value) return std::nullopt;
        return x.min();
      case RuleKind::Shift: {
        std::optional<Ordinal> star = solve_translate(q.set.min(), q.value, v);
        if (!star) return x.min();
        return first_except(x, *star);
      }
      case RuleKind::Ladder: {
        std::optional<mpz_class> n = affine_index_of(*q.out, v);
        if (!n) return x.min();
        Ordinal pos = Ordinal::nat(*n);
        if (pos >= q.set.order_type()) return x.min();
        return first_except(x, q.set.point_at(pos));
      }
      case RuleKind::Blocks: {
        SetAtom at = single_blocks_atom(q.set);
        std::optional<mpz_class> m = affine_index_of(*q.out, v);
        if (!m || (at.count && *m >= *at.count)) return x.min();
        Ordinal base = AffineSeq(at.a, at.step).at(*m);
        OrdSet blk = clamped_interval(x.ambient(), base, add(base, at.b));
        OrdSet off = ord_diff(x, blk);
        if (off.is_empty()) return std::nullopt;
        return off.min();
      }
    }
    throw std::logic_error("unhandled rule kind");
  }

  if (ap.kind == Approach::Translate) {
    // trim the part of x whose limit value would leave the codomain
    std::optional<Ordinal> p0 = solve_translate(ap.anchor, ap.delta, cs.bound);
    if (p0) {
      const Ambient& da = x.ambient();
      int rel = compare(*p0, da.bound);
      OrdSet inside =
          rel > 0 || (rel == 0 && (cs.closed || !da.closed))
              ? OrdSet::full(da)
              : OrdSet::interval(da, Ordinal(), *p0, cs.closed);
      OrdSet out_part = ord_diff(x, inside);
      if (!out_part.is_empty()) {
        outside = out_part.min();
        x = ord_intersect(x, inside);
        if (x.is_empty()) return outside;
      }
    }
    if (dircod && ap.increasing) {
      std::optional<Ordinal> star = solve_translate(ap.anchor, ap.delta, cs.bound);
      if (!star) return x.min();
      std::optional<Ordinal> other = first_except(x, *star);
      if (other) return pick_min(other, outside);
      // x is the single point star; the value check below finishes the job
    }
    std::optional<Ordinal> found;
    switch (q.kind) {
      case RuleKind::Const: {
        std::optional<Ordinal> star = solve_translate(ap.anchor, ap.delta, q.value);
        found = star ? first_except(x, *star) : std::optional<Ordinal>(x.min());
        break;
      }
      case RuleKind::Shift: {
        Ordinal mine = translate_at(ap.anchor, ap.delta, x.min());
        Ordinal theirs = translate_at(q.set.min(), q.value, x.min());
        if (mine != theirs) found = x.min();
        break;
      }
      case RuleKind::Ladder: {
        OrdSet w = transport(cs, ap.anchor, ap.delta, x);
        std::optional<mpz_class> qcnt = ladder_count(q.set.order_type());
        OrdSet rng = OrdSet::ladder_points(cs, *q.out, qcnt);
        OrdSet extra = ord_diff(w, rng);
        if (!extra.is_empty()) {
          found = add(ap.anchor, left_sub(ap.delta, extra.min()));
          break;
        }
        IntSet ns = affine_index_set(*q.out, qcnt, w);
        IntSet rk = subset_ranks(q.set, x);
        if (!int_equal(ns, rk)) {
          IntSet sym = int_union(int_diff(ns, rk), int_diff(rk, ns));
          mpz_class j = int_count_below(rk, sym.min());
          found = x.point_at(Ordinal::nat(j));
        }
        break;
      }
      case RuleKind::Blocks: {
        SetAtom at = single_blocks_atom(q.set);
        AffineSeq lo(at.a, at.step);
        for (const SetAtom& xa : extract_atoms(x)) {
          if (xa.kind == SetAtom::Kind::Point) {
            mpz_class m = affine_floor(lo, xa.a);
            if (translate_at(ap.anchor, ap.delta, xa.a) != q.out->at(m)) {
              found = xa.a;
              break;
            }
            continue;
          }
          if (xa.kind != SetAtom::Kind::LadderPoints)
            throw std::logic_error("limit region with consecutive points");
          AffineSeq pts(xa.a, xa.step);
          mpz_class m0 = affine_floor(lo, pts.at(0));
          if (translate_at(ap.anchor, ap.delta, pts.at(0)) != q.out->at(m0)) {
            found = pts.at(0);
            break;
          }
          if (xa.count && *xa.count == 1) continue;
          Ordinal v1 = translate_at(ap.anchor, ap.delta, pts.at(1));
          std::optional<mpz_class> m1 = affine_index_of(*q.out, v1);
          if (!m1) {
            found = pts.at(1);
            break;
          }
          if (xa.count && *xa.count == 2) {
            if (affine_floor(lo, pts.at(1)) != *m1) found = pts.at(1);
            if (found) break;
            continue;
          }
          Ordinal v2 = translate_at(ap.anchor, ap.delta, pts.at(2));
          std::optional<mpz_class> m2 = affine_index_of(*q.out, v2);
          if (!m2) {
            found = pts.at(2);
            break;
          }
          std::optional<mpz_class> tail_count;
          if (xa.count) tail_count = *xa.count - 1;
          found = block_alignment_mismatch(lo, AffineSeq(pts.at(1), xa.step), tail_count,
                                           *m1, *m2 - *m1, false);
          if (found) break;
        }
        break;
      }
    }
    return pick_min(found, outside);
  }

  // Blocky: values settle on the block just below each region point
  const Piece& bp = *ap.blocks;
  SetAtom bat = single_blocks_atom(bp.set);
  AffineSeq blo(bat.a, bat.step);
  switch (q.kind) {
    case RuleKind::Const: {
      std::optional<mpz_class> m = affine_index_of(*bp.out, q.value);
      if (!m || (bat.count && *m >= *bat.count)) return x.min();
      Ordinal base = blo.at(*m);
      Ordinal top = add(base, bat.b);
      bool closed_hi = x.ambient().closed || compare(top, x.ambient().bound) < 0;
      OrdSet reach = OrdSet::interval(x.ambient(), successor(base), top, closed_hi);
      OrdSet off = ord_diff(x, reach);
      if (off.is_empty()) return std::nullopt;
      return off.min();
    }
    case RuleKind::Shift: {
      for (const SetAtom& xa : extract_atoms(x)) {
        if (xa.kind == SetAtom::Kind::Point) {
          mpz_class m = strict_block_floor(blo, xa.a);
          if (bp.out->at(m) != translate_at(q.set.min(), q.value, xa.a)) return xa.a;
          continue;
        }
        if (xa.kind != SetAtom::Kind::LadderPoints)
          throw std::logic_error("limit region with consecutive points");
        AffineSeq pts(xa.a, xa.step);
        mpz_class m0 = strict_block_floor(blo, pts.at(0));
        if (bp.out->at(m0) != translate_at(q.set.min(), q.value, pts.at(0)))
          return pts.at(0);
        if (xa.count && *xa.count == 1) continue;
        Ordinal v1 = translate_at(q.set.min(), q.value, pts.at(1));
        std::optional<mpz_class> m1 = affine_index_of(*bp.out, v1);
        if (!m1) return pts.at(1);
        if (xa.count && *xa.count == 2) {
          if (strict_block_floor(blo, pts.at(1)) != *m1) return pts.at(1);
          continue;
        }
        Ordinal v2 = translate_at(q.set.min(), q.value, pts.at(2));
        std::optional<mpz_class> m2 = affine_index_of(*bp.out, v2);
        if (!m2) return pts.at(2);
        std::optional<mpz_class> tail_count;
        if (xa.count) tail_count = *xa.count - 1;
        std::optional<Ordinal> found = block_alignment_mismatch(
            blo, AffineSeq(pts.at(1), xa.step), tail_count, *m1, *m2 - *m1, true);
        if (found) return found;
      }
      return std::nullopt;
    }
    case RuleKind::Ladder:
    case RuleKind::Blocks: {
      if (q.kind == RuleKind::Blocks && &q == ap.blocks) return std::nullopt;
      Ordinal t = x.order_type();
      if (!t.is_nat() || t.nat_value() > 128)
        throw NotRepresentable("block accumulation against this rule has no finite check");
      for (mpz_class j = 0; j < t.nat_value(); ++j) {
        Ordinal pt = x.point_at(Ordinal::nat(j));
        mpz_class m = strict_block_floor(blo, pt);
        if (bp.out->at(m) != f.eval(pt).x) return pt;
      }
      return std::nullopt;
    }
  }
  throw std::logic_error("unhandled rule kind");
}

}  // namespace

std::optional<Ordinal> continuity_violation(const StepMap& f) {
  const Codomain& c = f.codomain();
  if (c.kind == Codomain::Kind::Product) {
    std::optional<Ordinal> a = continuity_violation(f.first());
    std::optional<Ordinal> b = continuity_violation(f.second());
    return pick_min(a, b);
  }
  std::optional<Ordinal> best;
  for (const Piece& p : f.pieces()) {
    for (const Approach& ap : piece_approaches(f, p)) {
      for (const Piece& q : f.pieces()) {
        OrdSet x = ord_intersect(ap.region, q.set);
        if (x.is_empty()) continue;
        best = pick_min(best, mismatch_point(f, ap, q, std::move(x)));
      }
    }
  }
  return best;
}

std::optional<Ordinal> continuity_violation_directed(const StepMap& f) {
  const Codomain& c = f.codomain();
  if (c.kind == Codomain::Kind::Product) {
    std::optional<Ordinal> a = continuity_violation_directed(f.first());
    std::optional<Ordinal> b = continuity_violation_directed(f.second());
    return pick_min(a, b);
  }
  const Ambient& da = f.domain().ambient();
  Ambient nd{da.bound, da.closed, Topology::Directed};
  validate_ambient(nd);
  auto lift = [&](const OrdSet& s) { return OrdSet::from_lset(nd, s.lset()); };
  std::vector<StepMap::Piece> pieces;
  for (const Piece& p : f.pieces())
    pieces.push_back(Piece{lift(p.set), p.kind, p.value, p.label, p.out});
  StepMap g = c.kind == Codomain::Kind::Finite
                  ? StepMap::to_finite(c.finite, lift(f.domain()), std::move(pieces))
                  : StepMap::to_space(c.space, lift(f.domain()), std::move(pieces));
  return continuity_violation(g);
}

bool is_continuous(const StepMap& f) { return !continuity_violation(f).has_value(); }

bool is_continuous_directed(const StepMap& f) {
  return !continuity_violation_directed(f).has_value();
}

namespace {

// Whether part reaches arbitrarily high in whole.
bool cofinal_within(const OrdSet& whole, const OrdSet& part) {
  if (part.is_empty()) return false;
  if (compare(part.sup(), whole.sup()) != 0) return false;
  if (whole.sup_attained()) return part.sup_attained();
  return true;
}

// Values whose fiber could reach the domain's top: constant values, a top
// block's value, and the value at the domain's maximum.
void collect_candidates(const StepMap& f, std::vector<Ordinal>& vals) {
  for (const Piece& p : f.pieces()) {
    if (p.kind == RuleKind::Const) vals.push_back(p.value);
    if (p.kind == RuleKind::Blocks) {
      SetAtom at = single_blocks_atom(p.set);
      if (at.count) vals.push_back(p.out->at(*at.count - 1));
    }
  }
  const OrdSet& d = f.domain();
  if (!d.is_empty() && d.sup_attained()) vals.push_back(f.eval(d.sup()).x);
}

}  // namespace

bool fibers_bounded(const StepMap& f) {
  const Codomain& c = f.codomain();
  const OrdSet& d = f.domain();
  if (d.is_empty()) return true;
  if (c.kind == Codomain::Kind::Finite) {
    for (const Piece& p : f.pieces())
      if (cofinal_within(d, map_preimage_label(f, p.label))) return false;
    return true;
  }
  if (c.kind == Codomain::Kind::Product) {
    if (fibers_bounded(f.first()) || fibers_bounded(f.second())) return true;
    // a cofinal pair fiber needs both component fibers cofinal
    std::vector<Ordinal> lv, rv;
    collect_candidates(f.first(), lv);
    collect_candidates(f.second(), rv);
    for (const Ordinal& a : lv) {
      OrdSet fa = map_preimage(f.first(), OrdSet::singleton(f.first().codomain().space, a));
      if (!cofinal_within(d, fa)) continue;
      for (const Ordinal& b : rv) {
        OrdSet fb =
            map_preimage(f.second(), OrdSet::singleton(f.second().codomain().space, b));
        if (cofinal_within(d, ord_intersect(fa, fb))) return false;
      }
    }
    return true;
  }
  std::vector<Ordinal> vals;
  collect_candidates(f, vals);
  for (const Ordinal& v : vals) {
    OrdSet fiber = map_preimage(f, OrdSet::singleton(c.space, v));
    if (cofinal_within(d, fiber)) return false;
  }
  // every other fiber is a single point or a single block capped by a later
  // piece element
  return true;
}

namespace {

void append_restricted_ladder(const Piece& p, const OrdSet& ps, std::vector<Piece>& out) {
  IntSet ranks = subset_ranks(p.set, ps).normalized();
  for (const IntRun& run : ranks.runs()) {
    OrdSet part = select_by_rank(p.set, IntSet::of({run}));
    if (run.count && *run.count == 1) {
      out.push_back(StepMap::const_piece(std::move(part), p.out->at(run.start)));
      continue;
    }
    AffineSeq seq(p.out->at(run.start), mul_nat(p.out->step(), run.stride));
    out.push_back(StepMap::ladder_piece(std::move(part), std::move(seq)));
  }
}

void append_restricted_blocks(const Piece& p, const OrdSet& ps, std::vector<Piece>& out) {
  SetAtom at = single_blocks_atom(p.set);
  AffineSeq lo(at.a, at.step);
  const Ambient& amb = ps.ambient();
  for (const SetAtom& xa : extract_atoms(ps)) {
    switch (xa.kind) {
      case SetAtom::Kind::Point:
        out.push_back(StepMap::const_piece(OrdSet::singleton(amb, xa.a),
                                           p.out->at(affine_floor(lo, xa.a))));
        break;
      case SetAtom::Kind::Interval:
        // gaps between blocks keep an interval inside one block
        out.push_back(StepMap::const_piece(OrdSet::interval(amb, xa.a, xa.b, false),
                                           p.out->at(affine_floor(lo, xa.a))));
        break;
      case SetAtom::Kind::LadderPoints:
      case SetAtom::Kind::LadderBlocks: {
        bool sub_blocks = xa.kind == SetAtom::Kind::LadderBlocks;
        AffineSeq u(xa.a, xa.step);
        auto atom_subset = [&](unsigned long cls, unsigned long period) {
          AffineSeq seq(u.at(cls), mul_nat(u.step(), period));
          std::optional<mpz_class> cnt;
          if (xa.count) cnt = per_class_count(*xa.count, cls, period);
          return sub_blocks ? OrdSet::ladder_blocks(amb, seq, xa.b, cnt)
                            : OrdSet::ladder_points(amb, seq, cnt);
        };
        if (xa.count && *xa.count <= 8) {
          for (mpz_class i = 0; i < *xa.count; ++i) {
            OrdSet one = sub_blocks ? clamped_interval(amb, u.at(i), add(u.at(i), xa.b))
                                    : OrdSet::singleton(amb, u.at(i));
            out.push_back(
                StepMap::const_piece(std::move(one), p.out->at(affine_floor(lo, u.at(i)))));
          }
          break;
        }
        bool done = false;
        for (unsigned long period : {1ul, 2ul, 4ul}) {
          std::vector<Piece> trial;
          bool ok = true;
          for (unsigned long cls = 0; cls < period && ok; ++cls) {
            std::optional<mpz_class> cnt;
            if (xa.count) cnt = per_class_count(*xa.count, cls, period);
            if (cnt && *cnt == 0) continue;
            mpz_class m0 = affine_floor(lo, u.at(cls));
            mpz_class m1 = affine_floor(lo, u.at(cls + period));
            mpz_class stride = m1 - m0;
            AffineSeq pts(u.at(cls), mul_nat(u.step(), period));
            if (stride == 0) {
              // the whole class must stay inside one block
              OrdSet cls_set = atom_subset(cls, period);
              Ordinal base = lo.at(m0);
              OrdSet blk = clamped_interval(amb, base, add(base, at.b));
              if (!ord_subset(cls_set, blk)) {
                ok = false;
                break;
              }
              trial.push_back(StepMap::const_piece(std::move(cls_set), p.out->at(m0)));
              continue;
            }
            if (block_alignment_mismatch(lo, pts, cnt, m0, stride, false)) {
              ok = false;
              break;
            }
            AffineSeq seq(p.out->at(m0), mul_nat(p.out->step(), stride));
            OrdSet cls_set = atom_subset(cls, period);
            trial.push_back(sub_blocks
                                ? StepMap::blocks_piece(std::move(cls_set), std::move(seq))
                                : StepMap::ladder_piece(std::move(cls_set), std::move(seq)));
          }
          if (ok) {
            for (Piece& t : trial) out.push_back(std::move(t));
            done = true;
            break;
          }
        }
        if (!done) throw NotRepresentable("restriction drifts across blocks");
        break;
      }
    }
  }
}

}  // namespace

StepMap map_restrict(const StepMap& f, const OrdSet& s) {
  const Codomain& c = f.codomain();
  if (c.kind == Codomain::Kind::Product)
    return StepMap::to_product(map_restrict(f.first(), s), map_restrict(f.second(), s));
  OrdSet nd = ord_intersect(f.domain(), s);
  std::vector<Piece> pieces;
  for (const Piece& p : f.pieces()) {
    OrdSet ps = ord_intersect(p.set, s);
    if (ps.is_empty()) continue;
    switch (p.kind) {
      case RuleKind::Const:
        pieces.push_back(c.kind == Codomain::Kind::Finite
                             ? StepMap::label_piece(std::move(ps), p.label)
                             : StepMap::const_piece(std::move(ps), p.value));
        break;
      case RuleKind::Shift: {
        Ordinal delta = translate_at(p.set.min(), p.value, ps.min());
        pieces.push_back(StepMap::shift_piece(std::move(ps), std::move(delta)));
        break;
      }
      case RuleKind::Ladder:
        append_restricted_ladder(p, ps, pieces);
        break;
      case RuleKind::Blocks:
        append_restricted_blocks(p, ps, pieces);
        break;
    }
  }
  if (c.kind == Codomain::Kind::Finite)
    return StepMap::to_finite(c.finite, std::move(nd), std::move(pieces));
  return StepMap::to_space(c.space, std::move(nd), std::move(pieces));
}

}  // namespace ordtop
