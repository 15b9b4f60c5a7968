#include <doctest.h>

#include "oracles.hpp"
#include "valkit/lattice.hpp"
#include "valkit/rng.hpp"

using namespace valkit;

namespace {
GammaElement g2(long a, long b) { return GammaElement({rat(a), rat(b)}); }
GammaElement g1(const Rat& a) { return GammaElement({a}); }
}  // namespace

TEST_CASE("lex_compare basic") {
  CHECK(lex_compare(g2(0, 0), g2(0, 0)) == Ordering::equal);
  CHECK(lex_compare(g2(1, -5), g2(1, 0)) == Ordering::less);
  CHECK(lex_compare(g2(2, 0), g2(1, 7)) == Ordering::greater);
  CHECK_THROWS_AS(lex_compare(g1(rat(1)), g2(1, 0)), structural_error);
}

TEST_CASE("infinitesimal axes sit below every main axis") {
  // delta = pure infinitesimal unit, gamma = pure main unit: n*delta < gamma
  GammaElement delta = GammaElement::inf_unit(1, 1, 0);
  GammaElement gamma = GammaElement::axis_unit(1, 0, 1);
  for (long n = 1; n <= 1000; ++n)
    CHECK(lex_compare(delta.scaled(rat(n)), gamma) == Ordering::less);
}

TEST_CASE("lex order is total and compatible with addition") {
  Rng rng(0xBEEF);
  for (int i = 0; i < 10000; ++i) {
    GammaElement a({rng.small_rat(6, 3), rng.small_rat(6, 3)});
    GammaElement b({rng.small_rat(6, 3), rng.small_rat(6, 3)});
    GammaElement c({rng.small_rat(6, 3), rng.small_rat(6, 3)});
    Ordering ab = lex_compare(a, b);
    Ordering ba = lex_compare(b, a);
    // antisymmetry
    if (ab == Ordering::less) CHECK(ba == Ordering::greater);
    if (ab == Ordering::equal) CHECK(a == b);
    // translation invariance
    CHECK(lex_compare(a + c, b + c) == ab);
    // transitivity on a sorted triple
    if (ab != Ordering::greater && lex_compare(b, c) != Ordering::greater)
      CHECK(lex_compare(a, c) != Ordering::greater);
  }
}

TEST_CASE("convexity of the infinitesimal block") {
  // elements with zero main block bracket only zero-main elements
  Rng rng(0x5EED);
  for (int i = 0; i < 200; ++i) {
    GammaElement lo(std::vector<Rat>{rat(0)}, std::vector<Rat>{rng.small_rat(5, 2)});
    GammaElement hi(std::vector<Rat>{rat(0)}, std::vector<Rat>{rng.small_rat(5, 2)});
    if (!lex_less(lo, hi)) continue;
    GammaElement mid(std::vector<Rat>{rng.small_rat(3, 1)}, std::vector<Rat>{rng.small_rat(5, 2)});
    if (lex_less(lo, mid) && lex_less(mid, hi)) CHECK(mid.main_block_zero());
  }
}

TEST_CASE("subgroup_contains examples") {
  GammaSubgroup g(2, 0, {g2(1, 0), g2(0, 2)});
  CHECK(g.contains(g2(3, 4)));
  CHECK_FALSE(g.contains(g2(0, 1)));

  // Z does not contain 1/2: {1, sqrt t} is good over Q((t))
  GammaSubgroup z(1, 0, {g1(rat(1))});
  CHECK_FALSE(z.contains(g1(rat(1, 2))));
  CHECK(z.contains(g1(rat(-3))));
}

TEST_CASE("subgroup_contains agrees with brute force on rank <= 3") {
  Rng rng(0xC0FFEE);
  for (int iter = 0; iter < 120; ++iter) {
    int rank = 1 + static_cast<int>(rng.below(3));
    std::vector<GammaElement> gens;
    int ngens = 1 + static_cast<int>(rng.below(3));
    for (int i = 0; i < ngens; ++i) {
      std::vector<Rat> coords;
      for (int c = 0; c < rank; ++c) coords.push_back(rat(rng.range(-2, 2), rng.range(1, 2)));
      gens.push_back(GammaElement(coords));
    }
    std::vector<Rat> coords;
    for (int c = 0; c < rank; ++c) coords.push_back(rat(rng.range(-3, 3), rng.range(1, 2)));
    GammaElement target(coords);

    GammaSubgroup g(rank, 0, gens);
    CHECK(g.contains(target) == oracle::brute_force_membership(gens, target));
  }
}

TEST_CASE("q_basis_mod greedy scan") {
  GammaSubgroup c(2, 0, {g2(1, 0)});
  auto picked = q_basis_mod({g2(1, 0), g2(0, 1)}, c);
  REQUIRE(picked.size() == 1);
  CHECK(picked[0] == 1);

  GammaSubgroup z(1, 0, {g1(rat(1))});
  CHECK(q_basis_mod({g1(rat(1, 2))}, z).empty());

  GammaSubgroup trivial = GammaSubgroup::trivial(1, 0);
  auto all = q_basis_mod({g1(rat(1))}, trivial);
  CHECK(all == std::vector<size_t>{0});
}

TEST_CASE("torsion_free_quotient") {
  GammaSubgroup z(1, 0, {g1(rat(1))});
  CHECK_FALSE(torsion_free_quotient({g1(rat(1, 2))}, z));  // 2*(1/2) lands in Z

  GammaSubgroup c(2, 0, {g2(1, 0)});
  CHECK(torsion_free_quotient({g2(0, 1)}, c));

  GammaSubgroup trivial = GammaSubgroup::trivial(1, 0);
  CHECK(torsion_free_quotient({g1(rat(1))}, trivial));
}

TEST_CASE("lattice intersection and equality") {
  GammaSubgroup a(2, 0, {g2(1, 1), g2(0, 1)});
  GammaSubgroup b(2, 0, {g2(1, 0), g2(0, 1)});
  CHECK(a.equals(b));

  GammaSubgroup halves(1, 0, {g1(rat(1, 2))});
  GammaSubgroup thirds(1, 0, {g1(rat(1, 3))});
  GammaSubgroup meet = lattice_intersection(halves, thirds);
  // Z/2 meet Z/3 = Z
  CHECK(meet.equals(GammaSubgroup(1, 0, {g1(rat(1))})));

  GammaSubgroup even(2, 0, {g2(2, 0)});
  GammaSubgroup diag(2, 0, {g2(1, 1)});
  CHECK(lattice_intersection(even, diag).is_trivial());
}
