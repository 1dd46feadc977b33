#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ordtop/errors.hpp"
#include "ordtop/prodset.hpp"
#include "ordtop/set_text.hpp"

using namespace ordtop;

namespace {

Ordinal O(const std::string& s) { return parse_ordinal(s); }

Ambient amb(const std::string& bound, bool closed = true,
            Topology t = Topology::Order) {
  return Ambient{O(bound), closed, t};
}

OrdSet S(const std::string& text, const Ambient& a) { return parse_set(text, a); }

ProdAmbient pamb(const std::string& bx, const std::string& by) {
  return ProdAmbient{amb(bx), amb(by)};
}

PairSeq mk_pairs(const std::string& bx, const std::string& sx, const std::string& by,
                 const std::string& sy,
                 std::optional<mpz_class> count = std::nullopt) {
  return PairSeq{AffineSeq(O(bx), O(sx)), AffineSeq(O(by), O(sy)), count};
}

struct Rng {
  std::mt19937_64 g;
  explicit Rng(unsigned long seed) : g(seed) {}
  unsigned long below(unsigned long n) { return g() % n; }
  bool coin() { return g() % 2 == 0; }
};

bool in_interval(const Ordinal& p, const std::optional<Ordinal>& lo_excl,
                 const Ordinal& hi) {
  if (lo_excl && compare(p, *lo_excl) <= 0) return false;
  return compare(p, hi) <= 0;
}

// Does the basic neighborhood (a, x] times (b, y] meet s in a point other
// than (x, y)? Lower cuts are exclusive; absent means the factor reaches
// down to 0. Works atom by atom, independently of the limit machinery.
bool nbhd_hit(const ProdSet& s, const Ordinal& x, const Ordinal& y,
              const std::optional<Ordinal>& a, const std::optional<Ordinal>& b) {
  const Ambient& ax = s.ambient().x;
  const Ambient& ay = s.ambient().y;
  OrdSet nx = OrdSet::interval(ax, a ? successor(*a) : Ordinal(), x, true);
  OrdSet ny = OrdSet::interval(ay, b ? successor(*b) : Ordinal(), y, true);
  for (const auto& r : s.rects()) {
    OrdSet ix = ord_intersect(r.x, nx);
    OrdSet iy = ord_intersect(r.y, ny);
    if (ix.is_empty() || iy.is_empty()) continue;
    bool only_x = ord_equal(ix, OrdSet::singleton(ax, x));
    bool only_y = ord_equal(iy, OrdSet::singleton(ay, y));
    if (!(only_x && only_y)) return true;
  }
  for (const auto& p : s.pair_atoms()) {
    mpz_class n = 0;
    std::optional<mpz_class> cap = p.count;
    for (; !cap || n < *cap; ++n) {
      Ordinal px = p.x.at(n);
      if (compare(px, x) > 0) break;
      Ordinal py = p.y.at(n);
      if (compare(py, y) > 0) break;
      if (in_interval(px, a, x) && in_interval(py, b, y) &&
          !(compare(px, x) == 0 && compare(py, y) == 0))
        return true;
      if (n > 4000) break;
    }
  }
  return false;
}

std::vector<Ordinal> pool_below(const Ambient& a, const std::vector<std::string>& texts) {
  std::vector<Ordinal> out;
  for (const auto& t : texts) {
    Ordinal p = O(t);
    int rel = compare(p, a.bound);
    if (rel < 0 || (rel == 0 && a.closed)) out.push_back(p);
  }
  return out;
}

const std::vector<std::string> kPool = {
    "0",   "1",     "2",   "3",     "5",     "17",    "w",     "w+1",
    "w*2", "w*2+3", "w*3", "w*7",   "w*20",  "w^2",   "w^2+1", "w^2+w",
    "w^2*2", "w^2*3"};

// Candidate and cut points for one axis: the shared pool plus samples of
// every pair atom along that axis, so cuts can isolate ladder points.
std::vector<Ordinal> grid_for(const ProdSet& s, bool xaxis) {
  const Ambient& a = xaxis ? s.ambient().x : s.ambient().y;
  std::vector<Ordinal> out = pool_below(a, kPool);
  for (const auto& p : s.pair_atoms()) {
    const AffineSeq& q = xaxis ? p.x : p.y;
    for (unsigned long n = 0; n <= 45; ++n) {
      if (p.count && mpz_class(n) >= *p.count) break;
      Ordinal v = q.at(mpz_class(n));
      int rel = compare(v, a.bound);
      if (rel < 0 || (rel == 0 && a.closed)) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Ordinal& l, const Ordinal& r) { return compare(l, r) < 0; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Ordinal& l, const Ordinal& r) {
                          return compare(l, r) == 0;
                        }),
            out.end());
  return out;
}

// Tightest sampled cut below p: its predecessor when it has one, else the
// largest grid point below it.
std::optional<Ordinal> max_cut_below(const Ordinal& p, const std::vector<Ordinal>& grid) {
  if (kind(p) == OrdinalKind::Successor) return predecessor(p);
  std::optional<Ordinal> best;
  for (const auto& q : grid)
    if (compare(q, p) < 0 && (!best || compare(q, *best) > 0)) best = q;
  return best;
}

// Neighborhood hits shrink with the cuts, so the tightest sampled
// neighborhood decides the whole sampled family: its verdict must agree
// with the library on every grid point.
void check_limits_on_grid(const ProdSet& s) {
  std::vector<Ordinal> gx = grid_for(s, true);
  std::vector<Ordinal> gy = grid_for(s, false);
  for (const auto& x : gx)
    for (const auto& y : gy) {
      bool lib = prod_is_limit_point(s, x, y);
      bool hit = nbhd_hit(s, x, y, max_cut_below(x, gx), max_cut_below(y, gy));
      CHECK_MESSAGE(lib == hit, "limit verdict " << lib
                                                 << " vs tightest neighborhood "
                                                 << hit << " at ("
                                                 << format_ordinal(x) << ","
                                                 << format_ordinal(y) << ")");
    }
}

}  // namespace

TEST_CASE("product ambient and atom validation") {
  ProdAmbient bad{amb("w^2"), Ambient{O("w^2"), true, Topology::Directed}};
  CHECK_THROWS_AS(ProdSet::empty(bad), Error);

  ProdAmbient a = pamb("w^2", "w^2");
  CHECK_THROWS_AS(ProdSet::rect(a, S("[0,w)", amb("w^3")), S("{0}", amb("w^2"))), Error);
  CHECK_THROWS_AS(ProdSet::pairs(a, mk_pairs("0", "w^2", "0", "1")), Error);
  CHECK_THROWS_AS(ProdSet::pairs(a, mk_pairs("w^2", "1", "0", "1", mpz_class(2))), Error);
  CHECK(ProdSet::pairs(a, mk_pairs("w^2", "1", "0", "1", mpz_class(1))).is_empty() == false);
  CHECK(ProdSet::pairs(a, mk_pairs("0", "1", "0", "1", mpz_class(0))).is_empty());

  ProdAmbient b = pamb("w^2", "w");
  CHECK_THROWS_AS(prod_union(ProdSet::empty(a), ProdSet::empty(b)), Error);
}

TEST_CASE("membership follows rectangles and pair ladders") {
  ProdAmbient a = pamb("w^2", "w^2");
  ProdSet r = ProdSet::rect(a, S("[0,w)", a.x), S("{w}", a.y));
  CHECK(r.member(O("3"), O("w")));
  CHECK(!r.member(O("w"), O("w")));
  CHECK(!r.member(O("3"), O("w+1")));

  ProdSet p = ProdSet::pairs(a, mk_pairs("w", "w", "0", "1"));
  CHECK(p.member(O("w*4"), O("3")));
  CHECK(!p.member(O("w*4"), O("4")));
  CHECK(!p.member(O("w*4+1"), O("3")));
  CHECK(!p.member(O("w^2"), O("w")));

  ProdSet pc = ProdSet::pairs(a, mk_pairs("w", "w", "0", "1", mpz_class(4)));
  CHECK(pc.member(O("w*4"), O("3")));
  CHECK(!pc.member(O("w*5"), O("4")));

  ProdSet u = prod_union(r, p);
  CHECK(u.member(O("3"), O("w")));
  CHECK(u.member(O("w*4"), O("3")));
  CHECK(u.member(O("w"), O("0")));
  CHECK(!u.member(O("w"), O("1")));
}

TEST_CASE("slices collect rectangle rows and pair points") {
  ProdAmbient a = pamb("w^2", "w^2");
  ProdSet s = prod_union(
      prod_union(ProdSet::rect(a, S("[0,w)", a.x), S("[w,w*2]", a.y)),
                 ProdSet::rect(a, S("[5,w]", a.x), S("{0}", a.y))),
      ProdSet::pairs(a, mk_pairs("w", "w", "0", "1")));

  CHECK(ord_equal(vertical_slice(s, O("2")), S("[w,w*2]", a.y)));
  CHECK(ord_equal(vertical_slice(s, O("7")), S("{0};[w,w*2]", a.y)));
  CHECK(ord_equal(vertical_slice(s, O("w")), S("{0}", a.y)));
  CHECK(ord_equal(vertical_slice(s, O("w*3")), S("{2}", a.y)));
  CHECK(vertical_slice(s, O("w+1")).is_empty());

  CHECK(ord_equal(horizontal_slice(s, O("0")), S("[5,w]", a.x)));
  CHECK(ord_equal(horizontal_slice(s, O("w")), S("[0,w)", a.x)));
  CHECK(ord_equal(horizontal_slice(s, O("2")), S("{w*3}", a.x)));
  CHECK(horizontal_slice(s, O("w^2")).is_empty());
}

TEST_CASE("slice classes partition the axis and match direct slices") {
  ProdAmbient a = pamb("w^2", "w^2");
  Rng rng(20260822u);
  const std::vector<std::string> xs_pool = {"[0,w)", "{w}",        "[w,w*2]",
                                            "ladder(w,w,10)", "{0};{5};{w^2}", "[w*3,w^2)"};
  const std::vector<std::string> ys_pool = {"[0,w)", "{0}",  "[w,w*2)",
                                            "ladder(0,2)", "{w^2}", "[0,w^2]"};
  for (int inst = 0; inst < 12; ++inst) {
    ProdSet s = ProdSet::empty(a);
    unsigned long nr = 1 + rng.below(3);
    for (unsigned long i = 0; i < nr; ++i)
      s = prod_union(s, ProdSet::rect(a, S(xs_pool[rng.below(xs_pool.size())], a.x),
                                      S(ys_pool[rng.below(ys_pool.size())], a.y)));
    if (rng.coin())
      s = prod_union(s, ProdSet::pairs(a, mk_pairs("w", "w", "0", "1")));

    std::vector<SliceClass> classes = vertical_slice_classes(s);
    OrdSet seen = OrdSet::empty(a.x);
    for (const auto& c : classes) {
      CHECK(ord_intersect(seen, c.xs).is_empty());
      seen = ord_union(seen, c.xs);
    }
    CHECK(ord_equal(seen, OrdSet::full(a.x)));

    std::vector<Ordinal> probes = pool_below(a.x, kPool);
    for (const auto& x : probes) {
      const SliceClass* home = nullptr;
      for (const auto& c : classes)
        if (c.xs.member(x)) {
          home = &c;
          break;
        }
      REQUIRE(home != nullptr);
      OrdSet expect = home->slice;
      for (const auto& p : s.pair_atoms()) {
        std::optional<mpz_class> n = affine_index_of(p.x, x);
        if (n && (!p.count || *n < *p.count))
          expect = ord_union(expect, OrdSet::singleton(a.y, p.y.at(*n)));
      }
      CHECK(ord_equal(vertical_slice(s, x), expect));
    }
  }
}

TEST_CASE("limit points of a rectangle combine factor limits") {
  ProdAmbient a = pamb("w^2", "w^2");
  ProdSet s = ProdSet::rect(a, S("ladder(0,1)", a.x), S("[0,w)", a.y));
  CHECK(prod_is_limit_point(s, O("w"), O("3")));
  CHECK(prod_is_limit_point(s, O("w"), O("w")));
  CHECK(prod_is_limit_point(s, O("5"), O("w")));
  CHECK(prod_is_limit_point(s, O("w"), O("0")));
  CHECK(!prod_is_limit_point(s, O("5"), O("3")));
  CHECK(!prod_is_limit_point(s, O("w+1"), O("w")));
  CHECK(!prod_is_limit_point(s, O("w*2"), O("2")));

  check_limits_on_grid(s);
}

TEST_CASE("pair ladder accumulates only at its corner") {
  ProdAmbient a = pamb("w^2", "w");
  ProdSet s = ProdSet::pairs(a, mk_pairs("w", "w", "0", "1"));
  CHECK(prod_is_limit_point(s, O("w^2"), O("w")));
  CHECK(!prod_is_limit_point(s, O("w^2"), O("5")));
  CHECK(!prod_is_limit_point(s, O("w*3"), O("2")));
  CHECK(!prod_is_limit_point(s, O("w*3"), O("w")));

  ProdSet bounded = ProdSet::pairs(a, mk_pairs("w", "w", "0", "1", mpz_class(5)));
  CHECK(!prod_is_limit_point(bounded, O("w^2"), O("w")));
  CHECK(prod_is_closed(bounded));

  check_limits_on_grid(s);
  check_limits_on_grid(bounded);
}

TEST_CASE("closure closes every factor and adds pair corners") {
  ProdAmbient a = pamb("w^2", "w^2");
  ProdSet s = prod_union(ProdSet::rect(a, S("[0,w)", a.x), S("ladder(0,2)", a.y)),
                         ProdSet::pairs(a, mk_pairs("w", "w", "0", "1")));
  ProdSet cl = prod_closure(s);
  CHECK(cl.member(O("w"), O("w")));
  CHECK(cl.member(O("3"), O("w")));
  CHECK(cl.member(O("w"), O("4")));
  CHECK(cl.member(O("w^2"), O("w")));
  CHECK(!cl.member(O("w"), O("3")));
  CHECK(!cl.member(O("w^2"), O("w+1")));
  CHECK(prod_is_closed(cl));

  Rng rng(7u);
  const std::vector<std::string> xs_pool = {"[0,w)", "ladder(0,3)", "[w,w*2)", "{w*5}"};
  for (int i = 0; i < 8; ++i) {
    ProdSet t = ProdSet::rect(a, S(xs_pool[rng.below(xs_pool.size())], a.x),
                              S(xs_pool[rng.below(xs_pool.size())], a.y));
    if (rng.coin())
      t = prod_union(t, ProdSet::pairs(a, mk_pairs("w*2", "w", "1", "2")));
    ProdSet ct = prod_closure(t);
    CHECK(prod_is_closed(ct));
    std::vector<Ordinal> grid = pool_below(a.x, kPool);
    for (const auto& x : grid)
      for (const auto& y : grid) {
        if (t.member(x, y)) CHECK(ct.member(x, y));
        if (ct.member(x, y) && !t.member(x, y)) CHECK(prod_is_limit_point(t, x, y));
      }
  }
}

TEST_CASE("first outside limit walks lexicographically") {
  ProdAmbient a{amb("w"), amb("w")};
  ProdSet s1 = ProdSet::rect(a, S("[0,w)", a.x), S("{0}", a.y));
  std::optional<ProdPoint> w1 = first_outside_limit(s1);
  REQUIRE(w1.has_value());
  CHECK(compare(w1->x, O("w")) == 0);
  CHECK(compare(w1->y, O("0")) == 0);

  ProdAmbient b = pamb("w^2", "w");
  ProdSet s2 = ProdSet::pairs(b, mk_pairs("w", "w", "0", "1"));
  std::optional<ProdPoint> w2 = first_outside_limit(s2);
  REQUIRE(w2.has_value());
  CHECK(compare(w2->x, O("w^2")) == 0);
  CHECK(compare(w2->y, O("w")) == 0);

  ProdSet s3 = prod_union(ProdSet::rect(a, S("[0,w)", a.x), S("{5}", a.y)),
                          ProdSet::rect(a, S("[0,w)", a.x), S("{3}", a.y)));
  std::optional<ProdPoint> w3 = first_outside_limit(s3);
  REQUIRE(w3.has_value());
  CHECK(compare(w3->x, O("w")) == 0);
  CHECK(compare(w3->y, O("3")) == 0);

  ProdSet s4 = ProdSet::rect(a, S("{5}", a.x), S("[0,w)", a.y));
  std::optional<ProdPoint> w4 = first_outside_limit(s4);
  REQUIRE(w4.has_value());
  CHECK(compare(w4->x, O("5")) == 0);
  CHECK(compare(w4->y, O("w")) == 0);

  CHECK(prod_is_closed(ProdSet::rect(a, OrdSet::full(a.x), OrdSet::full(a.y))));
  CHECK(prod_is_closed(ProdSet::rect(a, S("{1};{2};{3}", a.x), S("{0};{w}", a.y))));
  CHECK(prod_is_closed(ProdSet::empty(a)));
}

TEST_CASE("pair patches can close holes and shift the first defect") {
  ProdAmbient a{amb("w"), amb("w")};
  ProdSet holes = prod_union(ProdSet::rect(a, S("[0,w)", a.x), S("{5}", a.y)),
                             ProdSet::rect(a, S("[0,w)", a.x), S("{3}", a.y)));

  ProdSet patch3 = prod_union(
      holes, ProdSet::pairs(a, mk_pairs("w", "1", "3", "1", mpz_class(1))));
  std::optional<ProdPoint> w = first_outside_limit(patch3);
  REQUIRE(w.has_value());
  CHECK(compare(w->x, O("w")) == 0);
  CHECK(compare(w->y, O("5")) == 0);

  ProdSet patched = prod_union(
      patch3, ProdSet::pairs(a, mk_pairs("w", "1", "5", "1", mpz_class(1))));
  CHECK(prod_is_closed(patched));

  ProdSet corner = ProdSet::pairs(pamb("w^2", "w"), mk_pairs("w", "w", "0", "1"));
  ProdSet fixed = prod_union(
      corner, ProdSet::pairs(pamb("w^2", "w"),
                             mk_pairs("w^2", "1", "w", "1", mpz_class(1))));
  CHECK(prod_is_closed(fixed));
}

TEST_CASE("outside limit minimality matches truncation closedness") {
  ProdAmbient a = pamb("w^2", "w^2");
  Rng rng(41u);
  const std::vector<std::string> xs_pool = {"[0,w)", "ladder(0,1)", "[w,w*2)",
                                            "ladder(w,w,8)", "{w*3}"};
  int witnessed = 0;
  for (int i = 0; i < 14; ++i) {
    ProdSet s = ProdSet::rect(a, S(xs_pool[rng.below(xs_pool.size())], a.x),
                              S(xs_pool[rng.below(xs_pool.size())], a.y));
    if (rng.coin())
      s = prod_union(s, ProdSet::pairs(a, mk_pairs("w", "w", "0", "1")));
    std::optional<ProdPoint> fw = first_outside_limit(s);
    if (!fw) continue;
    ++witnessed;
    for (const auto& mp : pool_below(a.x, kPool)) {
      if (compare(mp, fw->x) >= 0) continue;
      ProdSet trunc = prod_restrict(s, OrdSet::interval(a.x, Ordinal(), mp, true),
                                    OrdSet::full(a.y));
      CHECK(prod_is_closed(trunc));
    }
    ProdSet at_m = prod_restrict(s, OrdSet::interval(a.x, Ordinal(), fw->x, true),
                                 OrdSet::full(a.y));
    for (const auto& mq : pool_below(a.y, kPool)) {
      if (compare(mq, fw->y) >= 0) continue;
      ProdSet cut = prod_restrict(at_m, OrdSet::full(a.x),
                                  OrdSet::interval(a.y, Ordinal(), mq, true));
      CHECK(prod_is_closed(cut));
    }
    ProdSet core = prod_restrict(at_m, OrdSet::full(a.x),
                                 OrdSet::interval(a.y, Ordinal(), fw->y, true));
    std::optional<ProdPoint> cw = first_outside_limit(core);
    REQUIRE(cw.has_value());
    CHECK(compare(cw->x, fw->x) == 0);
    CHECK(compare(cw->y, fw->y) == 0);
  }
  CHECK(witnessed >= 5);
}

TEST_CASE("slice violations find column approaches only") {
  ProdAmbient a{amb("w"), amb("w")};
  ProdSet sq = ProdSet::rect(a, S("[0,w)", a.x), S("[0,w)", a.y));
  std::optional<ProdPoint> v = first_vertical_slice_violation(sq);
  REQUIRE(v.has_value());
  CHECK(compare(v->x, O("0")) == 0);
  CHECK(compare(v->y, O("w")) == 0);
  std::optional<ProdPoint> h = first_horizontal_slice_violation(sq);
  REQUIRE(h.has_value());
  CHECK(compare(h->x, O("w")) == 0);
  CHECK(compare(h->y, O("0")) == 0);

  ProdAmbient b = pamb("w^2", "w");
  ProdSet diag = ProdSet::pairs(b, mk_pairs("w", "w", "0", "1"));
  CHECK(!first_vertical_slice_violation(diag).has_value());
  CHECK(!first_horizontal_slice_violation(diag).has_value());
  REQUIRE(first_outside_limit(diag).has_value());

  ProdSet col = ProdSet::rect(b, S("{3}", b.x), S("ladder(0,1)", b.y));
  std::optional<ProdPoint> cv = first_vertical_slice_violation(col);
  REQUIRE(cv.has_value());
  CHECK(compare(cv->x, O("3")) == 0);
  CHECK(compare(cv->y, O("w")) == 0);
  ProdSet colfix = prod_union(
      col, ProdSet::pairs(b, mk_pairs("3", "1", "w", "1", mpz_class(1))));
  CHECK(!first_vertical_slice_violation(colfix).has_value());
}

TEST_CASE("restriction clips rectangles and reindexes pairs") {
  ProdAmbient a = pamb("w^2", "w");
  ProdSet p = ProdSet::pairs(a, mk_pairs("w", "w", "0", "1"));

  ProdSet r1 = prod_restrict(p, S("[w*3,w*10]", a.x), OrdSet::full(a.y));
  CHECK(r1.member(O("w*3"), O("2")));
  CHECK(r1.member(O("w*10"), O("9")));
  CHECK(!r1.member(O("w*2"), O("1")));
  CHECK(!r1.member(O("w*11"), O("10")));
  REQUIRE(r1.pair_atoms().size() == 1);
  REQUIRE(r1.pair_atoms()[0].count.has_value());
  CHECK(*r1.pair_atoms()[0].count == 8);

  ProdSet r2 = prod_restrict(p, OrdSet::full(a.x), S("ladder(0,2)", a.y));
  CHECK(r2.member(O("w"), O("0")));
  CHECK(r2.member(O("w*3"), O("2")));
  CHECK(!r2.member(O("w*2"), O("1")));

  ProdSet rect = ProdSet::rect(a, S("[0,w]", a.x), S("[0,5]", a.y));
  ProdSet r3 = prod_restrict(rect, S("[3,w)", a.x), S("[4,w)", a.y));
  CHECK(r3.member(O("3"), O("4")));
  CHECK(r3.member(O("17"), O("5")));
  CHECK(!r3.member(O("w"), O("4")));
  CHECK(!r3.member(O("3"), O("6")));

  ProdSet r4 = prod_restrict(p, S("ladder(0,1)", a.x), OrdSet::full(a.y));
  CHECK(r4.is_empty());
}

TEST_CASE("transpose swaps factors everywhere") {
  ProdAmbient a = pamb("w^2", "w");
  ProdSet s = prod_union(ProdSet::rect(a, S("[0,w)", a.x), S("{3}", a.y)),
                         ProdSet::pairs(a, mk_pairs("w", "w", "0", "1")));
  ProdSet t = prod_transpose(s);
  CHECK(t.ambient().x == a.y);
  std::vector<Ordinal> gx = pool_below(a.x, kPool);
  std::vector<Ordinal> gy = pool_below(a.y, kPool);
  for (const auto& x : gx)
    for (const auto& y : gy) {
      CHECK(s.member(x, y) == t.member(y, x));
      CHECK(prod_is_limit_point(s, x, y) == prod_is_limit_point(t, y, x));
    }
  for (const auto& x : gx)
    CHECK(ord_equal(vertical_slice(s, x), horizontal_slice(t, x)));
}

TEST_CASE("next slice abscissa scans classes and ladders") {
  ProdAmbient a = pamb("w^2", "w");
  ProdSet p = ProdSet::pairs(a, mk_pairs("w", "w", "0", "1"));

  std::optional<Ordinal> n0 = next_slice_abscissa(p, std::nullopt, std::nullopt);
  REQUIRE(n0.has_value());
  CHECK(compare(*n0, O("w")) == 0);

  std::optional<Ordinal> n1 = next_slice_abscissa(p, O("w"), O("0"));
  REQUIRE(n1.has_value());
  CHECK(compare(*n1, O("w*2")) == 0);

  std::optional<Ordinal> n2 = next_slice_abscissa(p, O("w*2"), O("5"));
  REQUIRE(n2.has_value());
  CHECK(compare(*n2, O("w*7")) == 0);

  ProdSet mixed = prod_union(p, ProdSet::rect(a, S("[w*3,w*4]", a.x), S("{w}", a.y)));
  std::optional<Ordinal> n3 = next_slice_abscissa(mixed, O("w*2"), O("5"));
  REQUIRE(n3.has_value());
  CHECK(compare(*n3, O("w*3")) == 0);

  CHECK(!next_slice_abscissa(mixed, std::nullopt, O("w")).has_value());
  CHECK(!next_slice_abscissa(p, O("w^2"), std::nullopt).has_value());

  std::optional<Ordinal> n4 = next_slice_abscissa(mixed, O("w*4"), O("5"));
  REQUIRE(n4.has_value());
  CHECK(compare(*n4, O("w*7")) == 0);
}

TEST_CASE("worked ladder satisfies the staircase hypothesis shape") {
  ProdAmbient a = pamb("w^2", "w");
  ProdSet b = ProdSet::pairs(a, mk_pairs("w", "w", "0", "1"));

  std::optional<ProdPoint> fw = first_outside_limit(b);
  REQUIRE(fw.has_value());
  CHECK(compare(fw->x, O("w^2")) == 0);
  CHECK(compare(fw->y, O("w")) == 0);

  CHECK(horizontal_slice(b, O("w")).is_empty());
  CHECK(vertical_slice(b, O("w^2")).is_empty());
  CHECK(prod_is_limit_point(b, O("w^2"), O("w")));

  OrdSet sl = vertical_slice(b, O("w*4"));
  CHECK(sl.sup_attained());
  CHECK(compare(sl.sup(), O("3")) == 0);
}
