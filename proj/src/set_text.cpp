#include "ordtop/set_text.hpp"

#include <algorithm>
#include <cctype>

#include "ordtop/errors.hpp"

namespace ordtop {

namespace {

constexpr std::size_t kAtomBudget = 4096;

SetAtom point_atom(Ordinal p) {
  SetAtom a;
  a.kind = SetAtom::Kind::Point;
  a.a = std::move(p);
  return a;
}

SetAtom interval_atom(Ordinal lo, Ordinal hi) {
  SetAtom a;
  a.kind = SetAtom::Kind::Interval;
  a.a = std::move(lo);
  a.b = std::move(hi);
  return a;
}

SetAtom ladder_points_atom(Ordinal base, Ordinal step,
                           std::optional<mpz_class> count) {
  SetAtom a;
  a.kind = SetAtom::Kind::LadderPoints;
  a.a = std::move(base);
  a.step = std::move(step);
  a.count = std::move(count);
  return a;
}

SetAtom ladder_blocks_atom(Ordinal base, Ordinal width, Ordinal step,
                           std::optional<mpz_class> count) {
  SetAtom a;
  a.kind = SetAtom::Kind::LadderBlocks;
  a.a = std::move(base);
  a.b = std::move(width);
  a.step = std::move(step);
  a.count = std::move(count);
  return a;
}

std::vector<SetAtom> atoms_of(const LSet& s) {
  std::vector<SetAtom> out;
  if (s.level() == 0) {
    IntSet norm = s.base().normalized();
    for (const auto& r : norm.runs()) {
      if (r.stride == 1) {
        if (!r.count) {
          out.push_back(interval_atom(Ordinal::nat(r.start), Ordinal::omega()));
        } else if (*r.count == 1) {
          out.push_back(point_atom(Ordinal::nat(r.start)));
        } else {
          out.push_back(interval_atom(Ordinal::nat(r.start),
                                      Ordinal::nat(r.start + *r.count)));
        }
      } else {
        out.push_back(ladder_points_atom(Ordinal::nat(r.start),
                                         Ordinal::nat(r.stride), r.count));
      }
    }
    return out;
  }
  int d = s.level();
  Ordinal chunk = Ordinal::omega_power(Ordinal::nat(static_cast<unsigned long>(d)));
  LSet full_child = LSet::full(d - 1);
  // Groups holding equal children fuse so one ladder covers all of them.
  std::vector<LSet::Part> groups;
  for (const auto& p : s.parts()) {
    bool joined = false;
    for (auto& g : groups) {
      if (ls_equal(g.child, p.child)) {
        g.ks = int_union(g.ks, p.ks);
        joined = true;
        break;
      }
    }
    if (!joined) groups.push_back(p);
  }
  for (const auto& p : groups) {
    bool child_full = ls_equal(p.child, full_child);
    std::vector<SetAtom> inner;
    if (!child_full) inner = atoms_of(p.child);
    IntSet norm = p.ks.normalized();
    for (const auto& r : norm.runs()) {
      bool single = r.count && *r.count == 1;
      Ordinal base = mul_nat(chunk, r.start);
      if (single) {
        if (child_full) {
          out.push_back(interval_atom(base, mul_nat(chunk, r.start + 1)));
          continue;
        }
        for (const auto& ca : inner) {
          SetAtom lifted = ca;
          lifted.a = add(base, ca.a);
          if (ca.kind == SetAtom::Kind::Interval) lifted.b = add(base, ca.b);
          out.push_back(std::move(lifted));
        }
        continue;
      }
      Ordinal step = mul_nat(chunk, r.stride);
      if (child_full) {
        if (r.stride == 1) {
          Ordinal hi = r.count
                           ? mul_nat(chunk, r.start + *r.count)
                           : Ordinal::omega_power(
                                 Ordinal::nat(static_cast<unsigned long>(d + 1)));
          out.push_back(interval_atom(base, hi));
        } else {
          out.push_back(ladder_blocks_atom(base, chunk, step, r.count));
        }
        continue;
      }
      for (const auto& ca : inner) {
        // A chunk offset x re-anchors: the points base + step*n + x form
        // the affine ladder with base base+x and step left_sub(x, step+x).
        bool anchored = compare(ca.a, Ordinal()) == 0;
        Ordinal lifted_base = add(base, ca.a);
        Ordinal lifted_step =
            anchored ? step : left_sub(ca.a, add(step, ca.a));
        switch (ca.kind) {
          case SetAtom::Kind::Point:
            out.push_back(ladder_points_atom(lifted_base, lifted_step, r.count));
            break;
          case SetAtom::Kind::Interval:
            out.push_back(ladder_blocks_atom(
                lifted_base, anchored ? ca.b : left_sub(ca.a, ca.b),
                lifted_step, r.count));
            break;
          default:
            throw NotRepresentable("a ladder of ladders has no text form");
        }
      }
    }
    if (out.size() > kAtomBudget) throw NotRepresentable("too many atoms");
  }
  return out;
}

struct SetParser {
  const std::string& text;
  std::size_t pos = 0;
  const Ambient& ambient;

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  void expect(char c) {
    if (peek() != c) {
      throw SyntaxError(std::string("expected '") + c + "'", pos);
    }
    ++pos;
  }

  bool ordinal_char(char c, int depth) const {
    if (std::isdigit(static_cast<unsigned char>(c))) return true;
    if (c == 'w' || c == '+' || c == '*' || c == '^' || c == '(') return true;
    if (c == ')') return depth > 0;
    return false;
  }

  Ordinal scan_ordinal() {
    std::size_t start = pos;
    int depth = 0;
    while (pos < text.size() && ordinal_char(text[pos], depth)) {
      if (text[pos] == '(') ++depth;
      if (text[pos] == ')') --depth;
      ++pos;
    }
    if (pos == start) throw SyntaxError("expected an ordinal", pos);
    try {
      return parse_ordinal(text.substr(start, pos - start));
    } catch (const SyntaxError& e) {
      throw SyntaxError(std::string("bad ordinal: ") + e.what(), start);
    }
  }

  mpz_class scan_count() {
    std::size_t start = pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    if (pos == start) throw SyntaxError("expected a ladder length", pos);
    mpz_class n(text.substr(start, pos - start));
    if (n < 1) throw SyntaxError("ladder length must be positive", start);
    return n;
  }

  OrdSet parse_atom() {
    if (peek() == '{') {
      ++pos;
      if (peek() == '}') {
        ++pos;
        return OrdSet::empty(ambient);
      }
      Ordinal p = scan_ordinal();
      expect('}');
      return OrdSet::singleton(ambient, p);
    }
    if (peek() == '[') {
      ++pos;
      Ordinal lo = scan_ordinal();
      expect(',');
      Ordinal hi = scan_ordinal();
      if (peek() == ')') {
        ++pos;
        return OrdSet::interval(ambient, lo, hi, false);
      }
      expect(']');
      return OrdSet::interval(ambient, lo, hi, true);
    }
    if (text.compare(pos, 7, "ladder(") == 0) {
      pos += 7;
      if (peek() == '[') {
        ++pos;
        Ordinal base = scan_ordinal();
        expect(',');
        Ordinal width = scan_ordinal();
        expect(')');
        expect(',');
        Ordinal step = scan_ordinal();
        std::optional<mpz_class> count;
        if (peek() == ',') {
          ++pos;
          count = scan_count();
        }
        expect(')');
        return OrdSet::ladder_blocks(ambient, AffineSeq(base, step), width,
                                     count);
      }
      Ordinal base = scan_ordinal();
      expect(',');
      Ordinal step = scan_ordinal();
      std::optional<mpz_class> count;
      if (peek() == ',') {
        ++pos;
        count = scan_count();
      }
      expect(')');
      return OrdSet::ladder_points(ambient, AffineSeq(base, step), count);
    }
    throw SyntaxError("expected a set atom", pos);
  }

  OrdSet parse_all() {
    OrdSet acc = parse_atom();
    while (peek() == ';') {
      ++pos;
      acc = ord_union(acc, parse_atom());
    }
    if (pos != text.size()) throw SyntaxError("trailing input after set", pos);
    return acc;
  }
};

std::string format_count(const std::optional<mpz_class>& c) {
  if (!c) return "";
  return "," + c->get_str();
}

}  // namespace

namespace {

bool segment_atom(const SetAtom& a) {
  return a.kind == SetAtom::Kind::Point || a.kind == SetAtom::Kind::Interval;
}

Ordinal segment_end(const SetAtom& a) {
  return a.kind == SetAtom::Kind::Point ? successor(a.a) : a.b;
}

}  // namespace

std::vector<SetAtom> extract_atoms(const OrdSet& s) {
  auto atoms = atoms_of(s.lset());
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const SetAtom& x, const SetAtom& y) {
                     return compare(x.a, y.a) < 0;
                   });
  std::vector<SetAtom> out;
  for (auto& a : atoms) {
    if (!out.empty() && segment_atom(out.back()) && segment_atom(a) &&
        compare(segment_end(out.back()), a.a) == 0) {
      out.back().b = segment_end(a);
      out.back().kind = SetAtom::Kind::Interval;
      continue;
    }
    out.push_back(std::move(a));
  }
  if (out.size() > kAtomBudget) throw NotRepresentable("too many atoms");
  return out;
}

Ambient parse_ambient(const std::string& text, Topology topology) {
  if (text.compare(0, 3, "[0,") != 0) {
    throw SyntaxError("ambient must start with \"[0,\"", 0);
  }
  SetParser p{text, 3, Ambient{Ordinal(), true, Topology::Order}};
  Ordinal bound = p.scan_ordinal();
  bool closed;
  if (p.peek() == ']') {
    closed = true;
  } else if (p.peek() == ')') {
    closed = false;
  } else {
    throw SyntaxError("ambient must end with ']' or ')'", p.pos);
  }
  ++p.pos;
  if (p.pos != text.size()) throw SyntaxError("trailing input after ambient", p.pos);
  Ambient a{bound, closed, topology};
  validate_ambient(a);
  return a;
}

std::string format_ambient(const Ambient& a) {
  return "[0," + format_ordinal(a.bound) + (a.closed ? "]" : ")");
}

OrdSet parse_set(const std::string& text, const Ambient& ambient) {
  validate_ambient(ambient);
  SetParser p{text, 0, ambient};
  return p.parse_all();
}

OrdSet iso_image(const Compactification& h, const OrdSet& l) {
  if (l.ambient() != h.domain) {
    throw Error(Error::Kind::Input, "the set lives outside the map's domain");
  }
  OrdSet t = h.image();
  const Ambient& target = t.ambient();
  const LSet& ts = t.lset();
  OrdSet out = OrdSet::empty(target);
  for (const SetAtom& a : extract_atoms(l)) {
    switch (a.kind) {
      case SetAtom::Kind::Point:
        out = ord_union(out, OrdSet::singleton(target, h.eval(a.a)));
        break;
      case SetAtom::Kind::Interval: {
        LSet piece = ls_diff(ls_rank_prefix(ts, a.b), ls_rank_prefix(ts, a.a));
        out = ord_union(out, OrdSet::from_lset(target, std::move(piece)));
        break;
      }
      case SetAtom::Kind::LadderPoints: {
        LSet piece = ls_rank_select(ts, a.a, a.step, Ordinal::nat(1ul), a.count);
        out = ord_union(out, OrdSet::from_lset(target, std::move(piece)));
        break;
      }
      case SetAtom::Kind::LadderBlocks: {
        LSet piece = ls_rank_select(ts, a.a, a.step, a.b, a.count);
        out = ord_union(out, OrdSet::from_lset(target, std::move(piece)));
        break;
      }
    }
  }
  return out;
}

std::string format_set(const OrdSet& s) {
  auto atoms = extract_atoms(s);
  if (atoms.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) out += ";";
    const SetAtom& a = atoms[i];
    switch (a.kind) {
      case SetAtom::Kind::Point:
        out += "{" + format_ordinal(a.a) + "}";
        break;
      case SetAtom::Kind::Interval:
        out += "[" + format_ordinal(a.a) + "," + format_ordinal(a.b) + ")";
        break;
      case SetAtom::Kind::LadderPoints:
        out += "ladder(" + format_ordinal(a.a) + "," + format_ordinal(a.step) +
               format_count(a.count) + ")";
        break;
      case SetAtom::Kind::LadderBlocks:
        out += "ladder([" + format_ordinal(a.a) + "," + format_ordinal(a.b) +
               ")," + format_ordinal(a.step) + format_count(a.count) + ")";
        break;
    }
  }
  return out;
}

}  // namespace ordtop
