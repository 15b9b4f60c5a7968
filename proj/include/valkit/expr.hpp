#ifndef VALKIT_EXPR_HPP
#define VALKIT_EXPR_HPP

#include <string>

#include "valkit/hahn.hpp"

namespace valkit {

// Parses a series expression: rational-function coefficients times monomials
// in the universe's axes with rational exponents, e.g.
//   "(x1+2*x2)/(1-x1) * t1^(1/2) + 3*t2 + O(t1^4)".
// Division falls back to a truncated inverse at the universe's precision cap
// when the divisor is not a single exact term.
HahnSeries parse_series(const std::string& text, const Universe& u);

// Parses a residue-field element (no axes allowed).
ResElement parse_res_element(const std::string& text, const Universe& u);

}  // namespace valkit

#endif
