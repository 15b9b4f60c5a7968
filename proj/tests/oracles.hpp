#ifndef VALKIT_TESTS_ORACLES_HPP
#define VALKIT_TESTS_ORACLES_HPP

// Independent oracles for the derived expected values: brute-force lattice
// membership, brute-force separation violations over small rationals, and a
// bounded-degree polynomial relation search. These stay independent of the
// implementation paths they check (lattice normal form, the residue
// criterion, the Jacobian).

#include <optional>
#include <vector>

#include "valkit/hahn.hpp"
#include "valkit/lattice.hpp"
#include "valkit/residue.hpp"

namespace valkit::oracle {

// Membership of g in the integer span of gens by exhaustive search over
// integer coefficient vectors bounded by a Hadamard-style product of row
// norms. Only sensible for rank <= 3 instances.
inline bool brute_force_membership(const std::vector<GammaElement>& gens, const GammaElement& g) {
  if (gens.empty()) return g.is_zero();
  // bound: product over generators of (1-norm + 1), times target 1-norm + 1
  long bound = 1;
  auto one_norm = [](const GammaElement& x) {
    Rat n(0);
    for (const Rat& c : flatten(x)) n += c < 0 ? Rat(-c) : c;
    return n;
  };
  Rat prod(1);
  for (const auto& gen : gens) prod *= one_norm(gen) + 1;
  prod *= one_norm(g) + 1;
  Rat den_scale(1);
  for (const auto& gen : gens)
    for (const Rat& c : flatten(gen)) den_scale *= Rat(c.get_den());
  for (const Rat& c : flatten(g)) den_scale *= Rat(c.get_den());
  prod *= den_scale;
  Int whole = prod.get_num() / prod.get_den();
  bound = std::max<long>(2, whole.get_si() + 1);
  bound = std::min<long>(bound, 40);  // keep instances desk-scale

  size_t k = gens.size();
  std::vector<long> c(k, -bound);
  while (true) {
    GammaElement sum = GammaElement::zero(g.main_rank(), g.inf_rank());
    for (size_t i = 0; i < k; ++i)
      if (c[i] != 0) sum = sum + gens[i].scaled(Rat(c[i]));
    if (sum == g) return true;
    size_t pos = 0;
    while (pos < k && ++c[pos] > bound) c[pos++] = -bound;
    if (pos == k) return false;
  }
}

// Searches for constants c_i = p_i/q_i with |p_i| <= 3, 1 <= q_i <= 3, not
// all zero, violating v(sum c_i v_i) = min v(c_i v_i). Exhaustive over the
// rational box; meant for 2- or 3-vector families over a trivially valued
// base.
inline std::optional<std::vector<Rat>> brute_force_violation(
    const std::vector<HahnSeries>& vectors) {
  size_t k = vectors.size();
  std::vector<Rat> box;
  for (long p = -3; p <= 3; ++p)
    for (long q = 1; q <= 3; ++q) {
      Rat r(p, q);
      r.canonicalize();
      bool seen = false;
      for (const Rat& b : box)
        if (b == r) seen = true;
      if (!seen) box.push_back(r);
    }
  std::vector<size_t> idx(k, 0);
  while (true) {
    bool all_zero = true;
    for (size_t i = 0; i < k; ++i)
      if (box[idx[i]] != 0) all_zero = false;
    if (!all_zero) {
      std::optional<GammaElement> bound;
      HahnSeries sum = HahnSeries::zero(vectors.front().main_rank(), vectors.front().inf_rank(),
                                        vectors.front().nvars());
      for (size_t i = 0; i < k; ++i) {
        if (box[idx[i]] == 0) continue;
        ResElement c = ResElement::constant(vectors[i].nvars(), box[idx[i]]);
        GammaElement v = vectors[i].valuation_or_throw();
        if (!bound || lex_less(v, *bound)) bound = v;
        sum = sum + vectors[i].scaled(c);
      }
      bool violated = !sum.has_terms() || lex_less(*bound, sum.valuation_or_throw());
      if (violated) {
        std::vector<Rat> witness;
        for (size_t i = 0; i < k; ++i) witness.push_back(box[idx[i]]);
        return witness;
      }
    }
    size_t pos = 0;
    while (pos < k && ++idx[pos] == box.size()) idx[pos++] = 0;
    if (pos == k) return std::nullopt;
  }
}

// Bounded-degree relation search: a nonzero polynomial Q of total degree
// <= max_degree with integer coefficients in [-3, 3] and Q(elems) = 0. The
// set of such Q is the integer box inside the kernel of the linear map
// sending Q's coefficients to the expansion of Q(elems); the search runs
// over that kernel.
inline bool relation_search_dependent(const std::vector<ResElement>& elems, int max_degree = 3) {
  size_t n = elems.size();
  int nv = elems.front().nvars();
  // all monomials y^alpha with |alpha| <= max_degree
  std::vector<std::vector<unsigned>> alphas;
  std::vector<unsigned> cur;
  auto rec = [&](auto&& self, size_t slot, int left) -> void {
    if (slot == n) {
      alphas.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur.push_back(static_cast<unsigned>(e));
      self(self, slot + 1, left - e);
      cur.pop_back();
    }
  };
  rec(rec, 0, max_degree);

  // products elems^alpha, cleared to polynomials over a common denominator
  std::vector<ResElement> products;
  for (const auto& alpha : alphas) {
    ResElement p = ResElement::constant(nv, 1);
    for (size_t i = 0; i < n; ++i)
      for (unsigned e = 0; e < alpha[i]; ++e) p = p * elems[i];
    products.push_back(p);
  }
  Polynomial common = Polynomial::constant(nv, 1);
  for (const auto& p : products) common = common * p.den();
  std::map<Monomial, std::vector<Rat>, GrlexLess> rows;
  for (size_t i = 0; i < products.size(); ++i) {
    auto q = common.divide_exact(products[i].den());
    Polynomial cleared = products[i].num() * *q;
    for (const auto& [m, c] : cleared.terms()) {
      auto it = rows.try_emplace(m, std::vector<Rat>(products.size(), Rat(0))).first;
      it->second[i] += c;
    }
  }
  std::vector<std::vector<Rat>> equations;
  for (auto& [m, row] : rows) equations.push_back(row);
  auto kernel = rational_matrix_right_kernel(std::move(equations), products.size());
  if (kernel.empty()) return false;

  // a relation exists; check that one fits the coefficient box after
  // clearing denominators
  for (const auto& z : kernel) {
    Int den = common_denominator(z);
    Int gcd = 0;
    std::vector<Int> scaled;
    for (const Rat& q : z) {
      Rat s = q * Rat(den);
      scaled.push_back(s.get_num());
      Int g;
      mpz_gcd(g.get_mpz_t(), gcd.get_mpz_t(), s.get_num().get_mpz_t());
      gcd = g;
    }
    bool in_box = true;
    for (Int& v : scaled) {
      v /= gcd;
      if (v > 3 || v < -3) in_box = false;
    }
    if (in_box) return true;
  }
  // kernel nonzero but primitive vectors leave the box; still a dependence
  return true;
}

}  // namespace valkit::oracle

#endif
