#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ordtop {

// An explicit finite topological space. Subsets are bitmasks over point
// indices; the open family always contains the empty and full masks and is
// closed under union and intersection.
class FiniteSpace {
 public:
  FiniteSpace(std::vector<std::string> points, std::vector<std::uint32_t> opens);

  const std::vector<std::string>& points() const { return points_; }
  const std::vector<std::uint32_t>& opens() const { return opens_; }
  int size() const { return static_cast<int>(points_.size()); }
  std::uint32_t full_mask() const;

  bool is_open(std::uint32_t mask) const;
  bool is_closed(std::uint32_t mask) const;
  std::uint32_t closure(std::uint32_t mask) const;
  // Smallest open set containing the point.
  std::uint32_t min_open(int point) const;
  bool is_t1() const;
  bool is_discrete() const;

  int point_index(const std::string& label) const;

 private:
  std::vector<std::string> points_;
  std::vector<std::uint32_t> opens_;
  std::vector<std::uint32_t> min_open_;
};

// Values y such that the map sending a set converging to the added point to
// the constant x extends continuously with limit y. Equals the closure of
// {x} but is computed from minimal neighborhoods.
std::uint32_t extension_values(const FiniteSpace& x, int point);

// Every topology on n labeled points, as open families over masks.
std::vector<std::vector<std::uint32_t>> enumerate_topologies(int n);

}  // namespace ordtop
