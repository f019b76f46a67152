#pragma once

#include <stdexcept>
#include <string>

namespace bunkbed {

/// Malformed user input: bad probability literal, unknown vertex, broken graph file.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its documented domain.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Exhaustive enumeration would exceed the configured edge cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::size_t free_edges, std::size_t cap)
      : std::runtime_error(what), free_edges_(free_edges), cap_(cap) {}
  std::size_t free_edges() const noexcept { return free_edges_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t free_edges_;
  std::size_t cap_;
};

/// A theorem hypothesis required by a verifier does not hold for the instance.
class HypothesisFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Attach probabilities are not symmetric in v and w, so the perfect-square
/// rewriting of d_{K,L} is not available.
class SymmetryViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bunkbed
