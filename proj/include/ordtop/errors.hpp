#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ordtop {

// Failure classes shared across the library. The CLI maps Input to exit
// code 2 and Resource (representability and budget failures) to exit code 3.
class Error : public std::runtime_error {
 public:
  enum class Kind { Input, Resource };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind error_kind() const { return kind_; }

 private:
  Kind kind_;
};

struct SyntaxError : Error {
  SyntaxError(const std::string& what, std::size_t position)
      : Error(Kind::Input, what + " at position " + std::to_string(position)),
        position(position) {}
  std::size_t position;
};

struct NotASuccessor : Error {
  NotASuccessor() : Error(Kind::Input, "predecessor requires a successor ordinal") {}
};

struct ZeroStep : Error {
  ZeroStep() : Error(Kind::Input, "affine sequence requires a nonzero step") {}
};

struct EmptySet : Error {
  explicit EmptySet(const std::string& op) : Error(Kind::Input, op + " is undefined on the empty set") {}
};

struct NotRepresentable : Error {
  explicit NotRepresentable(const std::string& what) : Error(Kind::Resource, what) {}
};

struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& what) : Error(Kind::Resource, what) {}
};

struct NotAlmostClosed : Error {
  explicit NotAlmostClosed(const std::string& what) : Error(Kind::Input, what) {}
};

struct OutOfDomain : Error {
  explicit OutOfDomain(const std::string& what) : Error(Kind::Input, what) {}
};

struct EmptyC : Error {
  EmptyC() : Error(Kind::Input, "retraction requires a nonempty closed target") {}
};

struct NotClosed : Error {
  explicit NotClosed(const std::string& what) : Error(Kind::Input, what) {}
};

struct AlreadyClosed : Error {
  AlreadyClosed() : Error(Kind::Input, "the set is already closed; no witness exists") {}
};

struct FibersUnbounded : Error {
  explicit FibersUnbounded(const std::string& what) : Error(Kind::Input, what) {}
};

struct HypothesisFailed : Error {
  explicit HypothesisFailed(const std::string& which)
      : Error(Kind::Input, "hypothesis violated: " + which), which(which) {}
  std::string which;
};

}  // namespace ordtop
