#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ordtop/ordset.hpp"

namespace ordtop {

// One building block of a set expression.  Interval ends are exclusive;
// closed interval text parses into the successor end.
struct SetAtom {
  enum class Kind { Point, Interval, LadderPoints, LadderBlocks };
  Kind kind = Kind::Point;
  Ordinal a;                      // point value, interval low end, ladder base
  Ordinal b;                      // interval high end, block width
  Ordinal step;                   // ladder step
  std::optional<mpz_class> count; // bounded ladder length
};

// Decomposes the set into atoms; throws NotRepresentable when the structure
// has no atom form (a ladder whose rungs are themselves ladders).
std::vector<SetAtom> extract_atoms(const OrdSet& s);

Ambient parse_ambient(const std::string& text,
                      Topology topology = Topology::Order);
std::string format_ambient(const Ambient& a);

// set := atom (";" atom)* with atoms [o,o) [o,o] {o} ladder(o,o[,n])
// ladder([o,o),o[,n]); "{}" denotes the empty set
OrdSet parse_set(const std::string& text, const Ambient& ambient);
std::string format_set(const OrdSet& s);

}  // namespace ordtop
