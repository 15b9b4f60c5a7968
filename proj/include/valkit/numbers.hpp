#ifndef VALKIT_NUMBERS_HPP
#define VALKIT_NUMBERS_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "valkit/errors.hpp"

namespace valkit {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p", "-p", "p/q".
Rat rat_from_string(const std::string& text);

// Prints "p" or "p/q" with canonical sign.
std::string rat_to_string(const Rat& q);

inline int sign(const Rat& q) { return sgn(q); }

// lcm of denominators of a rational list; always positive.
Int common_denominator(const std::vector<Rat>& values);

}  // namespace valkit

#endif
