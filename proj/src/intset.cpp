#include "ordtop/intset.hpp"

#include <algorithm>
#include <stdexcept>

#include "ordtop/errors.hpp"

namespace ordtop {

namespace {

constexpr unsigned long kStrideBudget = 1000000;
constexpr std::size_t kRunBudget = 4096;

void check_run_budget(std::size_t n) {
  if (n > kRunBudget) throw NotRepresentable("index set needs too many runs");
}

mpz_class ceil_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (r != 0) ++q;
  return q;
}

}  // namespace

mpz_class IntRun::last() const {
  if (!count) throw std::logic_error("last of an unbounded run");
  return start + stride * (*count - 1);
}

bool IntRun::member(const mpz_class& k) const {
  if (k < start) return false;
  mpz_class d = k - start;
  if (d % stride != 0) return false;
  if (count && d / stride >= *count) return false;
  return true;
}

IntSet IntSet::of(std::vector<IntRun> runs) {
  IntSet s;
  for (auto& r : runs) {
    if (r.count && *r.count <= 0) continue;
    if (r.start < 0 || r.stride < 1) throw std::logic_error("malformed run");
    if (r.count && *r.count == 1) r.stride = 1;
    s.runs_.push_back(std::move(r));
  }
  check_run_budget(s.runs_.size());
  return s;
}

IntSet IntSet::single(const mpz_class& k) {
  return of({IntRun{k, 1, mpz_class(1)}});
}

IntSet IntSet::range(const mpz_class& lo, const mpz_class& width) {
  if (width <= 0) return {};
  return of({IntRun{lo, 1, width}});
}

IntSet IntSet::upward(const mpz_class& lo) { return of({IntRun{lo, 1, std::nullopt}}); }

IntSet IntSet::all() { return upward(0); }

bool IntSet::unbounded() const {
  for (const auto& r : runs_) {
    if (!r.count) return true;
  }
  return false;
}

bool IntSet::member(const mpz_class& k) const {
  for (const auto& r : runs_) {
    if (r.member(k)) return true;
  }
  return false;
}

mpz_class IntSet::min() const {
  if (runs_.empty()) throw std::logic_error("min of empty IntSet");
  mpz_class m = runs_.front().start;
  for (const auto& r : runs_) m = std::min(m, r.start);
  return m;
}

mpz_class IntSet::max() const {
  if (runs_.empty()) throw std::logic_error("max of empty IntSet");
  mpz_class m = -1;
  for (const auto& r : runs_) {
    if (!r.count) throw std::logic_error("max of unbounded IntSet");
    m = std::max(m, r.last());
  }
  return m;
}

std::optional<mpz_class> IntSet::first_ge(const mpz_class& k) const {
  std::optional<mpz_class> best;
  for (const auto& r : runs_) {
    mpz_class c;
    if (k <= r.start) {
      c = r.start;
    } else {
      mpz_class steps = ceil_div(k - r.start, r.stride);
      if (r.count && steps >= *r.count) continue;
      c = r.start + r.stride * steps;
    }
    if (!best || c < *best) best = c;
  }
  return best;
}

std::vector<mpz_class> IntSet::enumerate_below(const mpz_class& bound,
                                               std::size_t budget) const {
  std::vector<mpz_class> out;
  mpz_class k = 0;
  while (true) {
    auto n = first_ge(k);
    if (!n || *n >= bound) break;
    out.push_back(*n);
    if (out.size() > budget) throw BudgetExceeded("index enumeration too long");
    k = *n + 1;
  }
  return out;
}

namespace {

// x fully inside y, decided without enumeration
bool run_contained(const IntRun& x, const IntRun& y) {
  if (!y.member(x.start)) return false;
  if (x.count && *x.count == 1) return true;
  if (!y.member(x.start + x.stride)) return false;
  if (!x.count) return !y.count;
  if (y.count && x.last() > y.last()) return false;
  return true;
}

// merge of two same-residue or adjacent runs into one run when exact
std::optional<IntRun> run_merge(const IntRun& x, const IntRun& y) {
  auto xc = x.count, yc = y.count;
  bool xs = xc && *xc == 1, ys = yc && *yc == 1;
  if (xs && ys) {
    if (x.start == y.start) return x;
    const IntRun& lo = x.start < y.start ? x : y;
    const IntRun& hi = x.start < y.start ? y : x;
    return IntRun{lo.start, hi.start - lo.start, mpz_class(2)};
  }
  if (xs) return run_merge(y, x);
  if (ys) {
    // y is a single point against a proper run x
    if (y.start + x.stride == x.start) {
      std::optional<mpz_class> c;
      if (xc) c = *xc + 1;
      return IntRun{y.start, x.stride, c};
    }
    if (xc && y.start == x.last() + x.stride) return IntRun{x.start, x.stride, *xc + 1};
    return std::nullopt;
  }
  if (x.stride != y.stride) return std::nullopt;
  if ((y.start - x.start) % x.stride != 0) return std::nullopt;
  const IntRun& lo = x.start <= y.start ? x : y;
  const IntRun& hi = x.start <= y.start ? y : x;
  if (lo.count && hi.start > lo.last() + lo.stride) return std::nullopt;
  if (!lo.count) return lo;
  if (!hi.count) return IntRun{lo.start, lo.stride, std::nullopt};
  mpz_class top = std::max(lo.last(), hi.last());
  return IntRun{lo.start, lo.stride, (top - lo.start) / lo.stride + 1};
}

}  // namespace

IntSet IntSet::normalized() const {
  std::vector<IntRun> rs = runs_;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rs.size() && !changed; ++i) {
      for (std::size_t j = 0; j < rs.size() && !changed; ++j) {
        if (i == j) continue;
        if (run_contained(rs[i], rs[j])) {
          rs.erase(rs.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
          break;
        }
        if (auto m = run_merge(rs[i], rs[j])) {
          rs[std::min(i, j)] = *m;
          rs.erase(rs.begin() + static_cast<std::ptrdiff_t>(std::max(i, j)));
          changed = true;
          break;
        }
      }
    }
  }
  std::sort(rs.begin(), rs.end(), [](const IntRun& a, const IntRun& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.stride < b.stride;
  });
  return IntSet::of(std::move(rs));
}

IntSet int_union(const IntSet& a, const IntSet& b) {
  std::vector<IntRun> runs = a.runs();
  runs.insert(runs.end(), b.runs().begin(), b.runs().end());
  return IntSet::of(std::move(runs));
}

namespace {

// intersection of two runs by the Chinese remainder theorem
std::optional<IntRun> run_intersect(const IntRun& x, const IntRun& y) {
  mpz_class g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.stride.get_mpz_t(),
             y.stride.get_mpz_t());
  mpz_class diff = y.start - x.start;
  if (diff % g != 0) return std::nullopt;
  mpz_class l = x.stride / g * y.stride;
  mpz_class m = y.stride / g;
  mpz_class t0 = (diff / g * s) % m;
  if (t0 < 0) t0 += m;
  mpz_class z0 = x.start + x.stride * t0;
  mpz_class lo = std::max(x.start, y.start);
  if (z0 < lo) z0 += l * ceil_div(lo - z0, l);
  std::optional<mpz_class> hi;
  if (x.count) hi = x.last();
  if (y.count) hi = hi ? std::min(*hi, y.last()) : y.last();
  if (hi) {
    if (z0 > *hi) return std::nullopt;
    mpz_class cnt = (*hi - z0) / l + 1;
    return IntRun{z0, l, cnt};
  }
  return IntRun{z0, l, std::nullopt};
}

}  // namespace

IntSet int_intersect(const IntSet& a, const IntSet& b) {
  std::vector<IntRun> out;
  for (const auto& x : a.runs()) {
    for (const auto& y : b.runs()) {
      if (auto r = run_intersect(x, y)) out.push_back(*r);
    }
  }
  return IntSet::of(std::move(out));
}

IntSet int_complement(const IntSet& a) {
  IntSet acc = IntSet::all();
  for (const auto& r : a.runs()) {
    if (r.stride > kStrideBudget) throw NotRepresentable("index stride too large");
    std::vector<IntRun> comp;
    if (r.start > 0) comp.push_back(IntRun{0, 1, r.start});
    for (mpz_class off = 1; off < r.stride; ++off) {
      std::optional<mpz_class> cnt;
      if (r.count) cnt = *r.count - 1;
      comp.push_back(IntRun{r.start + off, r.stride, cnt});
    }
    if (r.count) comp.push_back(IntRun{r.last() + 1, 1, std::nullopt});
    acc = int_intersect(acc, IntSet::of(std::move(comp)));
  }
  return acc;
}

IntSet int_diff(const IntSet& a, const IntSet& b) {
  if (b.is_empty()) return a;
  return int_intersect(a, int_complement(b));
}

bool int_subset(const IntSet& a, const IntSet& b) { return int_diff(a, b).is_empty(); }

bool int_equal(const IntSet& a, const IntSet& b) {
  return int_subset(a, b) && int_subset(b, a);
}

IntSet int_shift_up(const IntSet& a, const mpz_class& d) {
  std::vector<IntRun> out = a.runs();
  for (auto& r : out) r.start += d;
  return IntSet::of(std::move(out));
}

IntSet int_shift_down(const IntSet& a, const mpz_class& d) {
  std::vector<IntRun> out;
  for (const auto& r : a.runs()) {
    if (r.start >= d) {
      out.push_back(IntRun{r.start - d, r.stride, r.count});
      continue;
    }
    mpz_class steps = ceil_div(d - r.start, r.stride);
    if (r.count && steps >= *r.count) continue;
    std::optional<mpz_class> cnt;
    if (r.count) cnt = *r.count - steps;
    out.push_back(IntRun{r.start + r.stride * steps - d, r.stride, cnt});
  }
  return IntSet::of(std::move(out));
}

}  // namespace ordtop
