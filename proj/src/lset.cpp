#include "ordtop/lset.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "ordtop/errors.hpp"

namespace ordtop {

namespace {

constexpr std::size_t kPartBudget = 512;
constexpr std::size_t kChunkBudget = 20000;
constexpr unsigned long kPeriodBudget = 100000;

Ordinal nat_exp(int level) { return Ordinal::nat(static_cast<unsigned long>(level)); }

// Chunk indices drawn from several disjoint index sets, each index carrying
// the order type of its chunk.  Rank arithmetic walks runs of indices in
// order, collapsing periodic stretches instead of enumerating them.
struct ChunkFamily {
  std::vector<const IntSet*> sets;
  std::vector<Ordinal> types;
};

struct ChunkAt {
  mpz_class chunk;
  std::size_t owner;
};

struct Location {
  mpz_class chunk;
  std::size_t owner;
  Ordinal rank;
};

std::size_t family_owner(const ChunkFamily& f, const mpz_class& k) {
  for (std::size_t i = 0; i < f.sets.size(); ++i) {
    if (f.sets[i]->member(k)) return i;
  }
  throw std::logic_error("chunk index without an owning group");
}

std::vector<ChunkAt> family_window(const ChunkFamily& f, const mpz_class& b,
                                   const mpz_class& e) {
  std::vector<ChunkAt> out;
  mpz_class cur = b;
  while (cur < e) {
    std::optional<mpz_class> best;
    for (const auto* s : f.sets) {
      auto c = s->first_ge(cur);
      if (c && (!best || *c < *best)) best = *c;
    }
    if (!best || *best >= e) break;
    out.push_back({*best, family_owner(f, *best)});
    if (out.size() > kChunkBudget) throw BudgetExceeded("index enumeration too long");
    cur = *best + 1;
  }
  return out;
}

Ordinal window_sum(const ChunkFamily& f, const std::vector<ChunkAt>& w) {
  Ordinal acc;
  for (const auto& c : w) acc = add(acc, f.types[c.owner]);
  return acc;
}

// Least common period of the runs covering the whole segment starting at b;
// an absent end means the segment is unbounded.
mpz_class segment_period(const ChunkFamily& f, const mpz_class& b,
                         const std::optional<mpz_class>& e) {
  mpz_class p = 1;
  for (const auto* s : f.sets) {
    for (const auto& r : s->runs()) {
      if (r.start > b) continue;
      if (r.count && (!e || r.last() + 1 < *e)) continue;
      mpz_class g = gcd(p, r.stride);
      p = p / g * r.stride;
      if (p > kPeriodBudget) throw BudgetExceeded("chunk period too large");
    }
  }
  return p;
}

// Run starts and ends; between consecutive breakpoints the active runs are
// constant, so chunk content repeats with the segment period.
std::vector<mpz_class> family_breakpoints(const ChunkFamily& f, bool& unbounded) {
  std::vector<mpz_class> bps;
  unbounded = false;
  for (const auto* s : f.sets) {
    for (const auto& r : s->runs()) {
      bps.push_back(r.start);
      if (r.count) {
        bps.push_back(r.last() + 1);
      } else {
        unbounded = true;
      }
    }
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  return bps;
}

// A stretch of chunk indices whose occupied pattern repeats every p
// indices. Bounded stretches repeat the window n times; an absent n means
// the pattern continues forever.
struct Segment {
  mpz_class b;                  // first chunk index
  mpz_class p;                  // pattern period in chunk indices
  std::optional<mpz_class> n;   // number of windows, absent when unbounded
  std::vector<ChunkAt> window;  // occupied chunks in [b, b+p)
  Ordinal ws;                   // order type of one window
  Ordinal acc;                  // rank of the segment start
};

Ordinal segment_rank_end(const Segment& g) {
  if (g.n) return add(g.acc, mul_nat(g.ws, *g.n));
  return add(g.acc, Ordinal::omega_power(successor(g.ws.lead_exp())));
}

std::vector<Segment> family_segments(const ChunkFamily& f) {
  bool unbounded = false;
  auto bps = family_breakpoints(f, unbounded);
  std::vector<Segment> out;
  Ordinal acc;
  auto push = [&](const mpz_class& b, const mpz_class& p,
                  std::optional<mpz_class> n, std::vector<ChunkAt> w) {
    if (w.empty()) return;
    Ordinal ws = window_sum(f, w);
    Segment g{b, p, std::move(n), std::move(w), std::move(ws), acc};
    acc = segment_rank_end(g);
    out.push_back(std::move(g));
  };
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    const mpz_class& b = bps[i];
    const mpz_class& e = bps[i + 1];
    mpz_class p = segment_period(f, b, e);
    mpz_class len = e - b;
    if (len <= p) {
      push(b, len, mpz_class(1), family_window(f, b, e));
      continue;
    }
    mpz_class n = len / p;
    mpz_class rem = len % p;
    push(b, p, n, family_window(f, b, b + p));
    if (rem > 0) push(b + n * p, rem, mpz_class(1), family_window(f, b + n * p, e));
  }
  if (unbounded) {
    mpz_class h = bps.back();
    mpz_class p = segment_period(f, h, std::nullopt);
    push(h, p, std::nullopt, family_window(f, h, h + p));
  }
  return out;
}

Ordinal family_type(const ChunkFamily& f) {
  auto segs = family_segments(f);
  if (segs.empty()) return Ordinal();
  return segment_rank_end(segs.back());
}

std::optional<Location> locate_in_window(const ChunkFamily& f,
                                         const std::vector<ChunkAt>& w,
                                         Ordinal& acc, const Ordinal& alpha) {
  for (const auto& c : w) {
    Ordinal nxt = add(acc, f.types[c.owner]);
    if (compare(alpha, nxt) < 0) {
      return Location{c.chunk, c.owner, left_sub(acc, alpha)};
    }
    acc = nxt;
  }
  return std::nullopt;
}

// Chunk holding the alpha-th element together with the rank inside it;
// requires alpha below the family type.
Location family_locate(const ChunkFamily& f, const Ordinal& alpha) {
  for (const Segment& g : family_segments(f)) {
    if (compare(alpha, segment_rank_end(g)) >= 0) continue;
    auto [q, r] = div_nat(left_sub(g.acc, alpha), g.ws);
    Ordinal inner;
    auto loc = locate_in_window(f, g.window, inner, r);
    if (!loc) throw std::logic_error("rank missing from a window");
    return Location{loc->chunk + g.p * q, loc->owner, loc->rank};
  }
  throw OutOfDomain("rank at or beyond the order type");
}

}  // namespace

LSet::LSet() = default;
LSet::LSet(const LSet&) = default;
LSet::LSet(LSet&&) noexcept = default;
LSet& LSet::operator=(const LSet&) = default;
LSet& LSet::operator=(LSet&&) noexcept = default;
LSet::~LSet() = default;

std::pair<mpz_class, Ordinal> chunk_split(const Ordinal& x, int level) {
  Ordinal lv = nat_exp(level);
  mpz_class k = 0;
  std::vector<OrdTerm> rest;
  for (const auto& t : x.terms()) {
    int c = compare(t.exp, lv);
    if (c > 0) throw std::logic_error("chunk_split above the level range");
    if (c == 0) {
      k = t.coeff;
    } else {
      rest.push_back(t);
    }
  }
  return {k, Ordinal::from_terms(rest)};
}

Ordinal chunk_join(int level, const mpz_class& k, const Ordinal& rest) {
  if (k == 0) return rest;
  return add(Ordinal::single(nat_exp(level), k), rest);
}

LSet LSet::empty(int level) {
  LSet s;
  s.level_ = level;
  return s;
}

LSet LSet::from_base(IntSet base) {
  LSet s;
  s.level_ = 0;
  s.base_ = std::move(base);
  return s;
}

LSet LSet::make(int level, std::vector<Part> parts) {
  if (level < 1) throw std::logic_error("make requires level >= 1");
  LSet s;
  s.level_ = level;
  for (auto& p : parts) {
    if (p.ks.is_empty() || p.child.is_empty()) continue;
    if (p.child.level() != level - 1) throw std::logic_error("child level mismatch");
    s.parts_.push_back(std::move(p));
  }
  if (s.parts_.size() > kPartBudget) throw NotRepresentable("set needs too many chunk groups");
  return s;
}

LSet LSet::full(int level) {
  if (level == 0) return from_base(IntSet::all());
  return make(level, {Part{IntSet::all(), full(level - 1)}});
}

LSet LSet::below(int level, const Ordinal& b) {
  if (b.is_zero()) return empty(level);
  if (b == Ordinal::omega_power(nat_exp(level + 1))) return full(level);
  if (level == 0) {
    if (!b.is_nat()) throw std::logic_error("below: bound exceeds the level range");
    return from_base(IntSet::range(0, b.nat_value()));
  }
  auto [k, rest] = chunk_split(b, level);
  std::vector<Part> parts;
  if (k >= 1) parts.push_back(Part{IntSet::range(0, k), full(level - 1)});
  if (!rest.is_zero()) parts.push_back(Part{IntSet::single(k), below(level - 1, rest)});
  return make(level, std::move(parts));
}

LSet LSet::point(int level, const Ordinal& x) {
  if (level == 0) {
    if (!x.is_nat()) throw std::logic_error("point: value exceeds the level range");
    return from_base(IntSet::single(x.nat_value()));
  }
  auto [k, rest] = chunk_split(x, level);
  return make(level, {Part{IntSet::single(k), point(level - 1, rest)}});
}

namespace {

LSet interval_lset(int level, const Ordinal& lo, const Ordinal& hi) {
  if (hi <= lo) return LSet::empty(level);
  return ls_diff(LSet::below(level, hi), LSet::below(level, lo));
}

}  // namespace

LSet LSet::ladder(int level, const AffineSeq& s, const std::optional<mpz_class>& count) {
  if (count && *count <= 0) return empty(level);
  if (count && *count == 1) return point(level, s.base());
  if (level == 0) {
    if (!s.base().is_nat() || !s.step().is_nat())
      throw std::logic_error("ladder exceeds the level range");
    return from_base(IntSet::of({IntRun{s.base().nat_value(), s.step().nat_value(), count}}));
  }
  UniformForm uf = uniform_form(s);
  int c = compare(uf.sigma, nat_exp(level));
  if (c > 0) throw std::logic_error("ladder exceeds the level range");
  if (c < 0) {
    auto [k, rest] = chunk_split(s.base(), level);
    LSet child = ladder(level - 1, AffineSeq(rest, s.step()), count);
    return make(level, {Part{IntSet::single(k), std::move(child)}});
  }
  if (!uf.high.is_zero()) throw std::logic_error("ladder exceeds the level range");
  std::optional<mpz_class> tail_count;
  if (count) tail_count = *count - 1;
  IntSet tail_ks = IntSet::of({IntRun{uf.a0 + uf.c, uf.c, tail_count}});
  LSet tail = make(level, {Part{std::move(tail_ks), point(level - 1, uf.low)}});
  return ls_union(point(level, s.base()), tail);
}

LSet LSet::ladder_blocks(int level, const AffineSeq& s, const Ordinal& width,
                         const std::optional<mpz_class>& count) {
  if (width.is_zero()) return empty(level);
  if (count && *count <= 0) return empty(level);
  if (count && *count == 1) return interval_lset(level, s.base(), add(s.base(), width));
  if (level == 0) {
    if (!s.base().is_nat() || !s.step().is_nat() || !width.is_nat())
      throw std::logic_error("ladder blocks exceed the level range");
    mpz_class w = width.nat_value();
    if (w > 4096) throw NotRepresentable("block width needs too many runs");
    std::vector<IntRun> runs;
    for (mpz_class off = 0; off < w; ++off)
      runs.push_back(IntRun{s.base().nat_value() + off, s.step().nat_value(), count});
    return from_base(IntSet::of(std::move(runs)));
  }
  UniformForm uf = uniform_form(s);
  int c = compare(uf.sigma, nat_exp(level));
  if (c > 0) throw std::logic_error("ladder blocks exceed the level range");
  if (c < 0) {
    auto [k, rest] = chunk_split(s.base(), level);
    LSet child = ladder_blocks(level - 1, AffineSeq(rest, s.step()), width, count);
    return make(level, {Part{IntSet::single(k), std::move(child)}});
  }
  if (!uf.high.is_zero()) throw std::logic_error("ladder blocks exceed the level range");
  std::optional<mpz_class> tail_count;
  if (count) tail_count = *count - 1;
  IntSet tail_ks = IntSet::of({IntRun{uf.a0 + uf.c, uf.c, tail_count}});
  auto [delta, rho] = chunk_split(add(uf.low, width), level);
  LSet acc = interval_lset(level, s.base(), add(s.base(), width));
  if (delta == 0) {
    LSet child = interval_lset(level - 1, uf.low, rho);
    acc = ls_union(acc, make(level, {Part{tail_ks, std::move(child)}}));
    return acc;
  }
  LSet head = ls_diff(full(level - 1), below(level - 1, uf.low));
  acc = ls_union(acc, make(level, {Part{tail_ks, std::move(head)}}));
  for (mpz_class j = 1; j < delta; ++j) {
    acc = ls_union(acc, make(level, {Part{int_shift_up(tail_ks, j), full(level - 1)}}));
  }
  if (!rho.is_zero()) {
    acc = ls_union(acc,
                   make(level, {Part{int_shift_up(tail_ks, delta), below(level - 1, rho)}}));
  }
  return acc;
}

LSet LSet::lifted(int level) const {
  LSet cur = *this;
  while (cur.level_ < level) {
    int next = cur.level_ + 1;
    cur = cur.is_empty() ? empty(next) : make(next, {Part{IntSet::single(0), std::move(cur)}});
  }
  return cur;
}

bool LSet::is_empty() const {
  if (level_ == 0) return base_.is_empty();
  return parts_.empty();
}

bool LSet::member(const Ordinal& x) const {
  if (level_ == 0) {
    if (!x.is_nat()) return false;
    return base_.member(x.nat_value());
  }
  if (!x.is_zero() && compare(x.lead_exp(), nat_exp(level_)) > 0) return false;
  auto [k, rest] = chunk_split(x, level_);
  for (const auto& p : parts_) {
    if (p.ks.member(k)) return p.child.member(rest);
  }
  return false;
}

Ordinal LSet::min() const {
  if (is_empty()) throw std::logic_error("min of an empty layered set");
  if (level_ == 0) return Ordinal::nat(base_.min());
  const Part* best = nullptr;
  mpz_class k0;
  for (const auto& p : parts_) {
    mpz_class k = p.ks.min();
    if (!best || k < k0) {
      best = &p;
      k0 = k;
    }
  }
  return chunk_join(level_, k0, best->child.min());
}

LSet::Sup LSet::sup() const {
  if (is_empty()) throw std::logic_error("sup of an empty layered set");
  if (level_ == 0) {
    if (base_.unbounded()) return {Ordinal::omega(), false};
    return {Ordinal::nat(base_.max()), true};
  }
  for (const auto& p : parts_) {
    if (p.ks.unbounded()) return {Ordinal::omega_power(nat_exp(level_ + 1)), false};
  }
  const Part* best = nullptr;
  mpz_class k1;
  for (const auto& p : parts_) {
    mpz_class k = p.ks.max();
    if (!best || k > k1) {
      best = &p;
      k1 = k;
    }
  }
  Sup inner = best->child.sup();
  return {chunk_join(level_, k1, inner.value), inner.attained};
}

bool LSet::cofinal() const {
  if (level_ == 0) return base_.unbounded();
  for (const auto& p : parts_) {
    if (p.ks.unbounded()) return true;
  }
  return false;
}

Ordinal LSet::order_type() const {
  if (level_ == 0) {
    if (base_.is_empty()) return Ordinal();
    ChunkFamily f{{&base_}, {Ordinal::nat(1ul)}};
    return family_type(f);
  }
  if (parts_.empty()) return Ordinal();
  ChunkFamily f;
  for (const auto& p : parts_) {
    f.sets.push_back(&p.ks);
    f.types.push_back(p.child.order_type());
  }
  return family_type(f);
}

Ordinal LSet::position_of(const Ordinal& x) const {
  if (!member(x)) throw OutOfDomain("position of a point outside the set");
  return ls_intersect(*this, below(level_, x)).order_type();
}

Ordinal LSet::point_at(const Ordinal& alpha) const {
  if (compare(alpha, order_type()) >= 0) {
    throw OutOfDomain("rank at or beyond the order type");
  }
  if (level_ == 0) {
    ChunkFamily f{{&base_}, {Ordinal::nat(1ul)}};
    return Ordinal::nat(family_locate(f, alpha).chunk);
  }
  ChunkFamily f;
  for (const auto& p : parts_) {
    f.sets.push_back(&p.ks);
    f.types.push_back(p.child.order_type());
  }
  Location loc = family_locate(f, alpha);
  return chunk_join(level_, loc.chunk, parts_[loc.owner].child.point_at(loc.rank));
}

LSet ls_union(const LSet& a, const LSet& b) {
  if (a.level() != b.level()) throw std::logic_error("level mismatch");
  if (a.level() == 0) return LSet::from_base(int_union(a.base(), b.base()));
  IntSet a_all, b_all;
  for (const auto& p : a.parts()) a_all = int_union(a_all, p.ks);
  for (const auto& p : b.parts()) b_all = int_union(b_all, p.ks);
  std::vector<LSet::Part> out;
  for (const auto& pa : a.parts()) {
    for (const auto& pb : b.parts()) {
      IntSet both = int_intersect(pa.ks, pb.ks);
      if (!both.is_empty()) out.push_back({std::move(both), ls_union(pa.child, pb.child)});
    }
    out.push_back({int_diff(pa.ks, b_all), pa.child});
  }
  for (const auto& pb : b.parts()) {
    out.push_back({int_diff(pb.ks, a_all), pb.child});
  }
  return LSet::make(a.level(), std::move(out));
}

LSet ls_intersect(const LSet& a, const LSet& b) {
  if (a.level() != b.level()) throw std::logic_error("level mismatch");
  if (a.level() == 0) return LSet::from_base(int_intersect(a.base(), b.base()));
  std::vector<LSet::Part> out;
  for (const auto& pa : a.parts()) {
    for (const auto& pb : b.parts()) {
      IntSet both = int_intersect(pa.ks, pb.ks);
      if (!both.is_empty()) out.push_back({std::move(both), ls_intersect(pa.child, pb.child)});
    }
  }
  return LSet::make(a.level(), std::move(out));
}

LSet ls_diff(const LSet& a, const LSet& b) {
  if (a.level() != b.level()) throw std::logic_error("level mismatch");
  if (a.level() == 0) return LSet::from_base(int_diff(a.base(), b.base()));
  IntSet b_all;
  for (const auto& p : b.parts()) b_all = int_union(b_all, p.ks);
  std::vector<LSet::Part> out;
  for (const auto& pa : a.parts()) {
    for (const auto& pb : b.parts()) {
      IntSet both = int_intersect(pa.ks, pb.ks);
      if (!both.is_empty()) out.push_back({std::move(both), ls_diff(pa.child, pb.child)});
    }
    out.push_back({int_diff(pa.ks, b_all), pa.child});
  }
  return LSet::make(a.level(), std::move(out));
}

LSet ls_complement(const LSet& a) {
  if (a.level() == 0) return LSet::from_base(int_complement(a.base()));
  IntSet a_all;
  std::vector<LSet::Part> out;
  for (const auto& p : a.parts()) {
    a_all = int_union(a_all, p.ks);
    out.push_back({p.ks, ls_complement(p.child)});
  }
  out.push_back({int_complement(a_all), LSet::full(a.level() - 1)});
  return LSet::make(a.level(), std::move(out));
}

bool ls_subset(const LSet& a, const LSet& b) { return ls_diff(a, b).is_empty(); }

bool ls_equal(const LSet& a, const LSet& b) {
  return ls_subset(a, b) && ls_subset(b, a);
}

LSet ls_limit_points(const LSet& a) {
  if (a.level() == 0) return LSet::empty(0);
  std::vector<LSet::Part> within;
  IntSet cof;
  for (const auto& p : a.parts()) {
    within.push_back({p.ks, ls_limit_points(p.child)});
    if (p.child.cofinal()) cof = int_union(cof, p.ks);
  }
  LSet inner = LSet::make(a.level(), std::move(within));
  if (cof.is_empty()) return inner;
  LSet boundary = LSet::make(
      a.level(), {LSet::Part{int_shift_up(cof, 1), LSet::point(a.level() - 1, Ordinal())}});
  return ls_union(inner, boundary);
}

namespace {

constexpr std::size_t kTransportBudget = 4096;

struct TransportBudget {
  std::size_t spent = 0;
  void charge() {
    if (++spent > kTransportBudget) {
      throw BudgetExceeded("rank transport too long");
    }
  }
};

ChunkFamily family_over(const LSet& s) {
  ChunkFamily f;
  if (s.level() == 0) {
    f.sets.push_back(&s.base());
    f.types.push_back(Ordinal::nat(1ul));
    return f;
  }
  for (const auto& p : s.parts()) {
    f.sets.push_back(&p.ks);
    f.types.push_back(p.child.order_type());
  }
  return f;
}

// Elements whose rank falls in [lo, hi), both ends clipped to the type.
LSet rank_interval(const LSet& s, const Ordinal& type, const Ordinal& lo,
                   const Ordinal& hi_raw) {
  if (compare(lo, type) >= 0 || s.is_empty()) return LSet::empty(s.level());
  const Ordinal& hi = compare(hi_raw, type) < 0 ? hi_raw : type;
  if (compare(lo, hi) >= 0) return LSet::empty(s.level());
  LSet above =
      compare(lo, Ordinal()) == 0
          ? s
          : ls_intersect(s, ls_complement(LSet::below(s.level(), s.point_at(lo))));
  if (compare(hi, type) >= 0) return above;
  return ls_intersect(above, LSet::below(s.level(), s.point_at(hi)));
}

// First n with base + step*n at or past the target; the callers only ask
// when some n works.
mpz_class steps_to_reach(const Ordinal& base, const Ordinal& step,
                         const Ordinal& target) {
  if (compare(base, target) >= 0) return 0;
  auto [q, r] = div_nat(left_sub(base, target), step);
  return compare(r, Ordinal()) > 0 ? mpz_class(q + 1) : q;
}

LSet rank_select_rec(const LSet& s, const Ordinal& type, const Ordinal& base,
                     const Ordinal& step, const Ordinal& width,
                     const std::optional<mpz_class>& count,
                     TransportBudget& budget) {
  int level = s.level();
  if (compare(base, type) >= 0 || s.is_empty()) return LSet::empty(level);
  if (count) {
    LSet out = LSet::empty(level);
    for (mpz_class i = 0; i < *count; ++i) {
      Ordinal lo = add(base, mul_nat(step, i));
      if (compare(lo, type) >= 0) break;
      budget.charge();
      out = ls_union(out, rank_interval(s, type, lo, add(lo, width)));
    }
    return out;
  }
  Ordinal sigma = add(base, Ordinal::omega_power(successor(step.lead_exp())));
  if (compare(width, step) >= 0) {
    // Consecutive blocks overlap, covering every rank up to the supremum.
    return rank_interval(s, type, base, sigma);
  }
  if (compare(sigma, type) > 0) {
    mpz_class nmax = steps_to_reach(base, step, type);
    return rank_select_rec(s, type, base, step, width, nmax, budget);
  }
  ChunkFamily f = family_over(s);
  auto segs = family_segments(f);
  const Segment* tail = nullptr;
  for (const auto& g : segs) {
    if (compare(segment_rank_end(g), sigma) >= 0) {
      tail = &g;
      break;
    }
  }
  if (!tail) throw std::logic_error("ladder supremum past the order type");
  const Segment& g = *tail;
  LSet out = LSet::empty(level);
  mpz_class n0 = steps_to_reach(base, step, g.acc);
  if (n0 > 0) out = rank_select_rec(s, type, base, step, width, n0, budget);
  Ordinal lo0 = add(base, mul_nat(step, n0));
  Ordinal delta0 = left_sub(g.acc, lo0);
  if (compare(step.lead_exp(), g.ws.lead_exp()) < 0) {
    // The window quotient stabilizes; all but finitely many blocks land in
    // one chunk, so descend into its child.
    Ordinal delta_sigma = left_sub(g.acc, sigma);
    auto [qs, rs] = div_nat(delta_sigma, g.ws);
    mpz_class qstar = qs;
    Ordinal rho_sigma = rs;
    if (compare(rs, Ordinal()) == 0) {
      qstar = qs - 1;
      rho_sigma = g.ws;
    }
    Ordinal wq = mul_nat(g.ws, qstar);
    mpz_class m1 = steps_to_reach(delta0, step, wq);
    for (mpz_class m = 0; m < m1; ++m) {
      budget.charge();
      Ordinal lo = add(lo0, mul_nat(step, m));
      out = ls_union(out, rank_interval(s, type, lo, add(lo, width)));
    }
    Ordinal rho1 = left_sub(wq, add(delta0, mul_nat(step, m1)));
    Ordinal u;
    const ChunkAt* home = nullptr;
    Ordinal uhome;
    for (const auto& entry : g.window) {
      Ordinal nxt = add(u, f.types[entry.owner]);
      if (compare(u, rho_sigma) < 0 && compare(rho_sigma, nxt) <= 0) {
        home = &entry;
        uhome = u;
        break;
      }
      u = nxt;
    }
    if (!home) throw std::logic_error("tail chunk missing from its window");
    mpz_class m2 = steps_to_reach(rho1, step, uhome);
    for (mpz_class m = 0; m < m2; ++m) {
      budget.charge();
      Ordinal lo = add(lo0, mul_nat(step, m1 + m));
      out = ls_union(out, rank_interval(s, type, lo, add(lo, width)));
    }
    if (level == 0) throw std::logic_error("rank descent below level zero");
    Ordinal cbase = left_sub(uhome, add(rho1, mul_nat(step, m2)));
    const LSet& child = s.parts()[home->owner].child;
    LSet sub = rank_select_rec(child, f.types[home->owner], cbase, step, width,
                               std::nullopt, budget);
    if (!sub.is_empty()) {
      mpz_class chome = home->chunk + g.p * qstar;
      out = ls_union(out,
                     LSet::make(level, {LSet::Part{
                                    IntSet::of({IntRun{chome, 1, mpz_class(1)}}),
                                    std::move(sub)}}));
    }
    return out;
  }
  // Equal lead exponents: the window residual walks a finite state space,
  // so the block pattern repeats once the residual repeats.
  if (g.n) throw std::logic_error("periodic rank regime in a bounded stretch");
  auto [q0, rho0] = div_nat(delta0, g.ws);
  std::vector<std::pair<Ordinal, mpz_class>> trail;
  std::map<std::string, std::size_t> seen;
  Ordinal rho = rho0;
  mpz_class q = q0;
  std::size_t cycle_start = 0;
  while (true) {
    std::string key = format_ordinal(rho);
    auto it = seen.find(key);
    if (it != seen.end()) {
      cycle_start = it->second;
      break;
    }
    budget.charge();
    seen.emplace(std::move(key), trail.size());
    trail.push_back({rho, q});
    auto [dq, rho_next] = div_nat(add(rho, step), g.ws);
    rho = rho_next;
    q += dq;
  }
  std::size_t period = trail.size() - cycle_start;
  mpz_class qgain = q - trail[cycle_start].second;
  if (qgain <= 0) throw std::logic_error("cycle without window progress");
  for (std::size_t m = 0; m < cycle_start; ++m) {
    budget.charge();
    Ordinal lo = add(lo0, mul_nat(step, mpz_class(static_cast<unsigned long>(m))));
    out = ls_union(out, rank_interval(s, type, lo, add(lo, width)));
  }
  mpz_class stride = g.p * qgain;
  auto emit_slice = [&](const Ordinal& x, const Ordinal& y, const mpz_class& wnd) {
    Ordinal u;
    for (const auto& entry : g.window) {
      Ordinal t = f.types[entry.owner];
      Ordinal nxt = add(u, t);
      if (compare(y, u) > 0 && compare(x, nxt) < 0) {
        budget.charge();
        IntSet ks = IntSet::of({IntRun{entry.chunk + g.p * wnd, stride, std::nullopt}});
        if (level == 0) {
          out = ls_union(out, LSet::from_base(std::move(ks)));
        } else {
          const Ordinal& olo = compare(x, u) > 0 ? x : u;
          const Ordinal& ohi = compare(y, nxt) < 0 ? y : nxt;
          const LSet& child = s.parts()[entry.owner].child;
          LSet piece =
              (compare(olo, u) == 0 && compare(ohi, nxt) == 0)
                  ? child
                  : rank_interval(child, t, left_sub(u, olo), left_sub(u, ohi));
          if (!piece.is_empty()) {
            out = ls_union(out, LSet::make(level, {LSet::Part{std::move(ks),
                                                              std::move(piece)}}));
          }
        }
      }
      u = nxt;
    }
  };
  for (std::size_t i = 0; i < period; ++i) {
    const Ordinal& rho_i = trail[cycle_start + i].first;
    const mpz_class& q_i = trail[cycle_start + i].second;
    auto [kfull, rem] = div_nat(add(rho_i, width), g.ws);
    if (kfull == 0) {
      emit_slice(rho_i, rem, q_i);
      continue;
    }
    emit_slice(rho_i, g.ws, q_i);
    for (mpz_class k = 1; k < kfull; ++k) emit_slice(Ordinal(), g.ws, q_i + k);
    if (compare(rem, Ordinal()) > 0) emit_slice(Ordinal(), rem, q_i + kfull);
  }
  return out;
}

}  // namespace

LSet ls_rank_prefix(const LSet& s, const Ordinal& r) {
  Ordinal type = s.order_type();
  if (compare(r, type) >= 0) return s;
  if (compare(r, Ordinal()) == 0) return LSet::empty(s.level());
  return ls_intersect(s, LSet::below(s.level(), s.point_at(r)));
}

LSet ls_rank_select(const LSet& s, const Ordinal& base, const Ordinal& step,
                    const Ordinal& width, const std::optional<mpz_class>& count) {
  if (compare(step, Ordinal()) == 0) throw ZeroStep();
  if (compare(width, Ordinal()) == 0) {
    throw Error(Error::Kind::Input, "rank block width must be positive");
  }
  TransportBudget budget;
  return rank_select_rec(s, s.order_type(), base, step, width, count, budget);
}

}  // namespace ordtop
