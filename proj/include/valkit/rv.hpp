#ifndef VALKIT_RV_HPP
#define VALKIT_RV_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valkit/hahn.hpp"
#include "valkit/presentation.hpp"

namespace valkit {

/// Leading datum of a nonzero series: valuation and leading coefficient.
struct RvElement {
  GammaElement gamma;
  ResElement coeff;

  RvElement() = default;
  RvElement(GammaElement g, ResElement c);

  RvElement operator*(const RvElement& o) const;
  RvElement inverse() const;
  RvElement pow(long e) const;
  bool operator==(const RvElement& o) const { return gamma == o.gamma && coeff == o.coeff; }

  std::string to_string(const Universe& u) const;
};

RvElement rv_of(const HahnSeries& s);

/// Partial addition of leading data: collision when the leading terms cancel
/// exactly, so the sum's rv is not determined by the summands'.
struct RvSum {
  bool collision = false;
  RvElement value;  // valid when !collision
};

RvSum rv_try_add(const RvElement& a, const RvElement& b);

enum class PowerModelKind { acf_residue, rcf_residue, explicit_table };

/// One coset of the n-th powers in an explicit table.
struct PowerCoset {
  std::string name;
  RvElement rep;
  bool k_rep = false;  // representative chosen in the residue field
};

/// Explicit finite-index data for one n: cosets with the full product table.
struct PowerTable {
  std::vector<PowerCoset> cosets;
  size_t identity = 0;                     // index of the P_n coset itself
  std::vector<std::vector<size_t>> product;  // product[i][j] = coset index
};

/// Power-coset structure of RV: the two built-in residue situations, or
/// user-supplied coset tables per n.
struct PowerModel {
  PowerModelKind kind = PowerModelKind::acf_residue;
  // rcf_residue: where rational-function signs are evaluated.
  std::vector<Rat> sample_point;
  // explicit_table: data per n.
  std::map<long, PowerTable> tables;

  static PowerModel acf();
  static PowerModel rcf(std::vector<Rat> sample_point);
};

struct CosetId {
  std::string id;
  bool in_pn = false;

  bool operator==(const CosetId& o) const { return id == o.id; }
};

// Coset of x among the n-th powers. Built-in models require integral gamma
// coordinates; the rcf model supports n = 2 only.
CosetId power_coset_of(const RvElement& x, long n, const PowerModel& model);

// Canonical representatives covering every coset the model distinguishes for
// elements with gamma coordinates in 0..n-1 (built-ins) or the listed cosets
// (tables).
std::vector<RvElement> coset_representatives(long n, const PowerModel& model, int main_rank,
                                             int inf_rank, int nvars);

struct LambdaCheckReport {
  bool ok = true;
  long checked = 0;
  std::string counterexample;
};

// Exhaustive verification, over the model's coset representatives, of
//   P_n(rho^-1 x y) <=> OR_{(lambda,mu)} P_n(lambda x) & P_n(mu y)
// with the pair set derived from the coset product structure, plus
// P_n multiplicativity.
LambdaCheckReport verify_lambda_tables(long n, const PowerModel& model, int main_rank,
                                       int inf_rank, int nvars);

struct RvIndependenceReport {
  bool independent = false;
  std::string diagnostic;  // first failing bullet or the dependence
  bool precondition_failed = false;
};

// RV-independence of L from M over C Gamma_L: checks that (v(a_i)) is a
// Q-basis of the Gamma_L shadow over Gamma_C, (res(b_j)) a transcendence
// basis of the residue shadow of L over k_C, v(a_i) = v(e_i), and decides
// algebraic independence of (res(a_i/e_i), res(b_j)) over the variables
// of M.
RvIndependenceReport rv_independent(const std::vector<HahnSeries>& a,
                                    const std::vector<HahnSeries>& b,
                                    const std::vector<HahnSeries>& e, const ValuedField& l,
                                    const ValuedField& m, const ValuedField& c);

}  // namespace valkit

#endif
