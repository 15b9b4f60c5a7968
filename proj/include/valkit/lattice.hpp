#ifndef VALKIT_LATTICE_HPP
#define VALKIT_LATTICE_HPP

#include <optional>
#include <vector>

#include "valkit/gamma.hpp"
#include "valkit/numbers.hpp"

namespace valkit {

using IntMatrix = std::vector<std::vector<Int>>;

/// Row-style Hermite normal form. Returns the rank; `m` ends in echelon form
/// with positive pivots and reduced entries above them, zero rows at the
/// bottom. When `transform` is non-null it receives a unimodular U with
/// U * input = output.
int hnf_rows(IntMatrix& m, IntMatrix* transform = nullptr);

// Basis of {y : y * m = 0} as a full sublattice.
IntMatrix int_left_kernel(const IntMatrix& m);

// Membership of v in the integer row span of an HNF matrix.
bool hnf_contains(const IntMatrix& hnf, std::vector<Int> v);

/// Integer span of finitely many value-group elements.
class GammaSubgroup {
 public:
  GammaSubgroup(int main_rank, int inf_rank, std::vector<GammaElement> generators);
  static GammaSubgroup trivial(int main_rank, int inf_rank = 0);

  int main_rank() const { return main_rank_; }
  int inf_rank() const { return inf_rank_; }
  const std::vector<GammaElement>& generators() const { return generators_; }
  bool is_trivial() const;

  // Integer-span membership, decided by clearing denominators and lattice
  // normal form.
  bool contains(const GammaElement& g) const;
  bool equals(const GammaSubgroup& other) const;

  // Canonical generators (scaled Hermite normal form rows).
  GammaSubgroup normalized() const;

 private:
  int main_rank_, inf_rank_;
  std::vector<GammaElement> generators_;
};

// Greedy maximal sublist of gens whose images are linearly independent in
// (Q*gens + Q*G_C)/(Q*G_C); returns indices into gens in input order.
std::vector<size_t> q_basis_mod(const std::vector<GammaElement>& gens, const GammaSubgroup& g_c);

// Dimension of (Q*gens + Q*G_C)/(Q*G_C).
int rational_rank_mod(const std::vector<GammaElement>& gens, const GammaSubgroup& g_c);

// True iff the integer span of gens_L together with G_C has torsion-free
// quotient by G_C, decided by lattice saturation.
bool torsion_free_quotient(const std::vector<GammaElement>& gens_l, const GammaSubgroup& g_c);

// Intersection of the two integer spans.
GammaSubgroup lattice_intersection(const GammaSubgroup& a, const GammaSubgroup& b);

// Integer coefficients x with sum x_i * gens_i = target, or nullopt when
// target is outside the integer span.
std::optional<std::vector<long>> solve_integer_combination(const std::vector<GammaElement>& gens,
                                                           const GammaElement& target);

// Exact rank of a rational matrix.
int rational_matrix_rank(std::vector<std::vector<Rat>> rows);

// Basis of {z : rows * z = 0} over Q.
std::vector<std::vector<Rat>> rational_matrix_right_kernel(std::vector<std::vector<Rat>> rows,
                                                           size_t ncols);

}  // namespace valkit

#endif
