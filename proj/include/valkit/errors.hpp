#ifndef VALKIT_ERRORS_HPP
#define VALKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace valkit {

// Structural misuse: mismatched ranks, unknown names, malformed input.
struct structural_error : std::runtime_error {
  explicit structural_error(const std::string& what) : std::runtime_error(what) {}
};

// Exact-arithmetic failures (division by zero and friends).
struct arithmetic_error : std::runtime_error {
  explicit arithmetic_error(const std::string& what) : std::runtime_error(what) {}
};

// An operation ran into the O(cutoff) tail of a truncated series.
struct precision_exhausted : std::runtime_error {
  explicit precision_exhausted(const std::string& what) : std::runtime_error(what) {}
};

// residue() of an element with negative valuation.
struct not_in_valuation_ring : std::runtime_error {
  explicit not_in_valuation_ring(const std::string& what) : std::runtime_error(what) {}
};

// A declared precondition (hypothesis set, declared fix flags) failed.
struct hypothesis_violation : std::runtime_error {
  explicit hypothesis_violation(const std::string& what) : std::runtime_error(what) {}
};

// Power-coset model asked for something it does not classify.
struct unsupported_model : std::runtime_error {
  explicit unsupported_model(const std::string& what) : std::runtime_error(what) {}
};

// Internal invariant failed; indicates a bug, not bad input.
struct internal_inconsistency : std::logic_error {
  explicit internal_inconsistency(const std::string& what) : std::logic_error(what) {}
};

}  // namespace valkit

#endif
