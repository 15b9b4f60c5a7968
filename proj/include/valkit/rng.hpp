#ifndef VALKIT_RNG_HPP
#define VALKIT_RNG_HPP

#include <cstdint>

#include "valkit/numbers.hpp"

namespace valkit {

/// splitmix64; the single documented generator behind every randomized
/// check, so a 64-bit seed reproduces a run byte for byte.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  // Uniform in [lo, hi] inclusive.
  long range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(unsigned percent) { return below(100) < percent; }

  // Small rational with |num| <= num_bound, 1 <= den <= den_bound.
  Rat small_rat(long num_bound, long den_bound) {
    long n = range(-num_bound, num_bound);
    long d = range(1, den_bound);
    return rat(n, d);
  }

  // Like small_rat but never zero.
  Rat small_rat_nonzero(long num_bound, long den_bound) {
    Rat q = small_rat(num_bound, den_bound);
    if (q == 0) q = rat(1);
    return q;
  }

  // Deterministic substream: child generators let independent checks share
  // one task seed without consuming each other's draws.
  Rng fork(std::uint64_t stream) const {
    Rng child(state_ ^ (0xA0761D6478BD642Full * (stream + 1)));
    child.next();
    return child;
  }

 private:
  std::uint64_t state_;
};

}  // namespace valkit

#endif
