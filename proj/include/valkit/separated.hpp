#ifndef VALKIT_SEPARATED_HPP
#define VALKIT_SEPARATED_HPP

#include <optional>
#include <string>
#include <vector>

#include "valkit/presentation.hpp"
#include "valkit/rv.hpp"

namespace valkit {

/// Concrete failure of the separatedness identity: coefficients from the
/// base field whose combination has valuation strictly above the minimum of
/// the summands.
struct SeparationWitness {
  std::vector<HahnSeries> coefficients;   // one per input vector
  std::optional<GammaElement> achieved;   // nullopt: combination is exactly 0
  bool achieved_is_lower_bound = false;   // achieved known only as >= cutoff
  GammaElement bound;                     // min v(c_i v_i)
};

enum class BasisVerdict { separated_good, separated_not_good, not_separated, not_independent };

std::string to_string(BasisVerdict v);

/// Verdict of the separatedness criterion, with the partition of indices by
/// valuation class modulo Gamma_C and a witness when not separated.
struct BasisReport {
  BasisVerdict verdict = BasisVerdict::not_independent;
  std::vector<std::vector<size_t>> coset_partition;
  std::optional<SeparationWitness> witness;
  std::string detail;
};

// The separatedness criterion: partition by valuation modulo the Gamma_C
// shadow, normalize each class to a common valuation with C-monomial
// multipliers, and test the normalized leading coefficients for linear
// independence over k_C. Good means within-class valuations are exactly
// equal. Dependences that certify linear dependence over C give verdict
// not_independent.
BasisReport check_separated(const Universe& u, const std::vector<HahnSeries>& vectors,
                            const ValuedField& c);

enum class ConstructionStatus { ok, not_independent, precision_exhausted };

/// Output of the construction algorithms: a separated-good basis with the
/// change of basis over C recorded in both directions.
struct SeparationResult {
  ConstructionStatus status = ConstructionStatus::ok;
  std::vector<HahnSeries> basis;
  // basis[i] = sum_j change[i][j] * input[j]
  std::vector<std::vector<HahnSeries>> change;
  // input[j] = sum_i inverse_change[j][i] * basis[i]
  std::vector<std::vector<HahnSeries>> inverse_change;
  std::string message;
};

// Construction over a trivially valued base: keep a separated prefix; a new
// vector either lands on a fresh leading datum or has its leading term
// cancelled by a residue-field solve and recurses on the remainder.
SeparationResult make_separated_trivial(const Universe& u,
                                        const std::vector<HahnSeries>& vectors,
                                        const ValuedField& c);

// Ultrametric Gram-Schmidt against the truncated maximal field: repeatedly
// cancel the residual's leading term by a C-combination of the current basis
// until it is uncancellable, then rescale within classes by C-monomials so
// valuations match exactly (good-ification).
SeparationResult make_separated(const Universe& u, const std::vector<HahnSeries>& vectors,
                                const ValuedField& c, const Precision& target);

// Like make_separated, but inputs found dependent on the basis so far are
// skipped instead of failing; used to extract a basis of a spanning family.
SeparationResult make_separated_spanning(const Universe& u,
                                         const std::vector<HahnSeries>& vectors,
                                         const ValuedField& c, const Precision& target);

// Lifting check: verifies the hypotheses for (L, M, C) (L
// synthesized from the basis when not supplied), requires the basis to be
// separated-good over C, and re-runs the criterion with M as the coefficient
// field. Throws hypothesis_violation before any check runs.
BasisReport check_lift(const Universe& u, const std::vector<HahnSeries>& basis, FieldPtr c,
                       FieldPtr m, FieldPtr l = nullptr);

struct CompositumCounterexample {
  std::string what;
  std::string detail;
};

/// Valuation and residue decomposition of x = sum l_i m_i against direct
/// evaluation.
struct CompositumReport {
  bool ok = true;
  std::vector<CompositumCounterexample> counterexamples;
  std::optional<GammaElement> valuation;  // of the combination, when nonzero
};

CompositumReport compositum_check(const Universe& u, const std::vector<HahnSeries>& ell,
                                  const std::vector<HahnSeries>& m, const ValuedField& c);

// rv of a separated combination through the min-attaining partial sum
// formula, checked against rv_of of the directly evaluated series. Throws
// internal_inconsistency when the formula and direct route disagree or a
// collision contradicts separatedness.
RvElement rv_of_combination(const Universe& u, const std::vector<HahnSeries>& ell,
                            const std::vector<HahnSeries>& m);

}  // namespace valkit

#endif
