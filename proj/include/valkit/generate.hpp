#ifndef VALKIT_GENERATE_HPP
#define VALKIT_GENERATE_HPP

#include "valkit/hahn.hpp"
#include "valkit/rng.hpp"

namespace valkit {

struct SeriesGenOptions {
  int max_terms = 4;
  long exp_bound = 4;        // |numerator| bound per axis coordinate
  long exp_den_bound = 2;    // denominator bound per axis coordinate
  bool nonneg_exponents = false;
  bool allow_vars = true;    // residue transcendentals in coefficients
  long coeff_bound = 5;
  bool ensure_nonzero = true;
};

// Deterministic random series driven by the shared splitmix64 stream.
HahnSeries random_series(const Universe& u, Rng& rng, const SeriesGenOptions& opts = {});

}  // namespace valkit

#endif
