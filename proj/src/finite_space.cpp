#include "ordtop/finite_space.hpp"

#include <algorithm>

#include "ordtop/errors.hpp"

namespace ordtop {

FiniteSpace::FiniteSpace(std::vector<std::string> points,
                         std::vector<std::uint32_t> opens)
    : points_(std::move(points)), opens_(std::move(opens)) {
  if (points_.size() > 16) {
    throw Error(Error::Kind::Input, "finite space too large");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if (points_[i] == points_[j]) {
        throw Error(Error::Kind::Input, "duplicate point label");
      }
    }
  }
  std::uint32_t full = full_mask();
  std::sort(opens_.begin(), opens_.end());
  opens_.erase(std::unique(opens_.begin(), opens_.end()), opens_.end());
  bool has_empty = false;
  bool has_full = false;
  for (std::uint32_t u : opens_) {
    if (u == 0) has_empty = true;
    if (u == full) has_full = true;
    if ((u & ~full) != 0) {
      throw Error(Error::Kind::Input, "open set outside the point set");
    }
  }
  if (!has_empty || !has_full) {
    throw Error(Error::Kind::Input, "opens must include the empty and full sets");
  }
  for (std::uint32_t u : opens_) {
    for (std::uint32_t v : opens_) {
      if (!is_open(u | v) || !is_open(u & v)) {
        throw Error(Error::Kind::Input, "opens not closed under union and intersection");
      }
    }
  }
  min_open_.assign(points_.size(), full);
  for (std::size_t p = 0; p < points_.size(); ++p) {
    for (std::uint32_t u : opens_) {
      if (u & (1u << p)) min_open_[p] &= u;
    }
    if (!is_open(min_open_[p])) {
      throw Error(Error::Kind::Input, "minimal neighborhood is not open");
    }
  }
}

std::uint32_t FiniteSpace::full_mask() const {
  if (points_.empty()) return 0;
  return (points_.size() >= 32) ? ~0u : ((1u << points_.size()) - 1);
}

bool FiniteSpace::is_open(std::uint32_t mask) const {
  return std::binary_search(opens_.begin(), opens_.end(), mask);
}

bool FiniteSpace::is_closed(std::uint32_t mask) const {
  return is_open(full_mask() & ~mask);
}

std::uint32_t FiniteSpace::closure(std::uint32_t mask) const {
  std::uint32_t full = full_mask();
  std::uint32_t acc = full;
  for (std::uint32_t u : opens_) {
    std::uint32_t closed = full & ~u;
    if ((closed & mask) == mask) acc &= closed;
  }
  return acc;
}

std::uint32_t FiniteSpace::min_open(int point) const {
  return min_open_[static_cast<std::size_t>(point)];
}

bool FiniteSpace::is_t1() const {
  for (int p = 0; p < size(); ++p) {
    if (closure(1u << p) != (1u << p)) return false;
  }
  return true;
}

bool FiniteSpace::is_discrete() const {
  return opens_.size() == (1u << points_.size());
}

int FiniteSpace::point_index(const std::string& label) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] == label) return static_cast<int>(i);
  }
  throw Error(Error::Kind::Input, "unknown point label: " + label);
}

std::uint32_t extension_values(const FiniteSpace& x, int point) {
  // The constant map at the point extends with limit y exactly when every
  // open set around y already contains the point, so the tail stays inside.
  std::uint32_t out = 0;
  for (int y = 0; y < x.size(); ++y) {
    if (x.min_open(y) & (1u << point)) out |= 1u << y;
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> enumerate_topologies(int n) {
  if (n < 0 || n > 4) {
    throw Error(Error::Kind::Input, "topology enumeration supports at most 4 points");
  }
  std::uint32_t subsets = 1u << n;
  std::uint32_t full = subsets - 1;
  std::vector<std::vector<std::uint32_t>> out;
  // A family is a set of subset-masks, itself encoded as a bitset over the
  // 2^n possible subsets.
  std::uint64_t families = 1ull << subsets;
  for (std::uint64_t fam = 0; fam < families; ++fam) {
    if (!(fam & 1ull) || !(fam & (1ull << full))) continue;
    std::vector<std::uint32_t> opens;
    for (std::uint32_t m = 0; m < subsets; ++m) {
      if (fam & (1ull << m)) opens.push_back(m);
    }
    bool ok = true;
    for (std::size_t i = 0; i < opens.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < opens.size() && ok; ++j) {
        if (!(fam & (1ull << (opens[i] | opens[j])))) ok = false;
        if (!(fam & (1ull << (opens[i] & opens[j])))) ok = false;
      }
    }
    if (ok) out.push_back(std::move(opens));
  }
  return out;
}

}  // namespace ordtop
