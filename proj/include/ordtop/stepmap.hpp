#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ordtop/finite_space.hpp"
#include "ordtop/ordset.hpp"

namespace ordtop {

// Where a map sends its points: an ordinal interval, an explicit finite
// space, or a product of two ordinal intervals.
struct Codomain {
  enum class Kind { Space, Finite, Product };
  Kind kind = Kind::Space;
  Ambient space{Ordinal(), true, Topology::Order};
  std::shared_ptr<const FiniteSpace> finite;
  Ambient left{Ordinal(), true, Topology::Order};
  Ambient right{Ordinal(), true, Topology::Order};
};

// A point of some codomain; which fields are meaningful depends on the
// codomain kind.
struct MapValue {
  Ordinal x;
  Ordinal y;
  int label = -1;
};

// Finitely presented piecewise map. Pieces partition the domain; each piece
// carries one rule:
//   Const   every point of the piece maps to one value.
//   Shift   the piece is re-based: its minimum a and each a+r map to delta+r.
//   Ladder  the piece has order type at most omega; its n-th element maps
//           to out(n).
//   Blocks  the piece is a single run of uniform blocks; every point of
//           block n maps to out(n).
// Maps into a product hold one component map per factor instead of pieces.
class StepMap {
 public:
  enum class RuleKind { Const, Shift, Ladder, Blocks };

  struct Piece {
    OrdSet set;
    RuleKind kind;
    Ordinal value;
    int label = -1;
    std::optional<AffineSeq> out;
  };

  static Piece const_piece(OrdSet set, Ordinal value);
  static Piece label_piece(OrdSet set, int label);
  static Piece shift_piece(OrdSet set, Ordinal delta);
  static Piece ladder_piece(OrdSet set, AffineSeq out);
  static Piece blocks_piece(OrdSet set, AffineSeq out);

  static StepMap to_space(Ambient cod, OrdSet domain, std::vector<Piece> pieces);
  static StepMap to_finite(std::shared_ptr<const FiniteSpace> cod, OrdSet domain,
                           std::vector<Piece> pieces);
  static StepMap to_product(StepMap first, StepMap second);

  const OrdSet& domain() const { return domain_; }
  const Codomain& codomain() const { return cod_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const StepMap& first() const { return *first_; }
  const StepMap& second() const { return *second_; }

  MapValue eval(const Ordinal& p) const;

 private:
  StepMap(OrdSet domain, Codomain cod, std::vector<Piece> pieces);
  OrdSet domain_;
  Codomain cod_;
  std::vector<Piece> pieces_;
  std::shared_ptr<const StepMap> first_;
  std::shared_ptr<const StepMap> second_;
};

bool ambient_contains(const Ambient& a, const Ordinal& p);

// Exact image and preimage. Space codomain only for the OrdSet versions;
// finite codomains use the mask and label forms.
OrdSet map_image(const StepMap& f);
std::uint32_t map_image_mask(const StepMap& f);
OrdSet map_preimage(const StepMap& f, const OrdSet& target);
OrdSet map_preimage_label(const StepMap& f, int label);

// First domain point where the map fails to be continuous, if any. The
// directed variant gives the domain the directed topology, so only the
// domain's maximum needs checking.
std::optional<Ordinal> continuity_violation(const StepMap& f);
std::optional<Ordinal> continuity_violation_directed(const StepMap& f);
bool is_continuous(const StepMap& f);
bool is_continuous_directed(const StepMap& f);

// Every fiber fails to be cofinal in the domain.
bool fibers_bounded(const StepMap& f);

// The map restricted to domain() intersect s.
StepMap map_restrict(const StepMap& f, const OrdSet& s);

// Indices n < count with seq(n) in target, as an integer set. The target
// must be a subset of the sequence's range for ladder-shaped targets.
IntSet affine_index_set(const AffineSeq& seq, const std::optional<mpz_class>& count,
                        const OrdSet& target);

}  // namespace ordtop
