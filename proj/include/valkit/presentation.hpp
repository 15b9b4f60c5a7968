#ifndef VALKIT_PRESENTATION_HPP
#define VALKIT_PRESENTATION_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "valkit/hahn.hpp"
#include "valkit/lattice.hpp"
#include "valkit/rng.hpp"

namespace valkit {

/// Finitely presented valued subfield of the universe: generators over a
/// base presentation (or over trivially valued Q) with a degree bound. The
/// presented object is the degree-d shadow: rational expressions in the
/// generators of total degree at most d.
struct ValuedField {
  std::string name;
  std::shared_ptr<const ValuedField> base;  // null = trivially valued Q
  std::vector<HahnSeries> generators;       // own generators, nonzero-determinable
  int degree_bound = 4;
  int main_rank = 0;
  int inf_rank = 0;
  int nvars = 0;
};

using FieldPtr = std::shared_ptr<const ValuedField>;

// Validates generators (nonzero-determinable) and the degree bound.
FieldPtr make_field(const Universe& u, std::string name, FieldPtr base,
                    std::vector<HahnSeries> generators, int degree_bound);

// Own generators preceded by the base's closure.
std::vector<HahnSeries> closure_generators(const ValuedField& f);

bool is_trivially_valued(const ValuedField& f);
bool descends_from(const ValuedField& f, const ValuedField& ancestor);

// Residue transcendentals appearing syntactically in the closure generators.
std::set<int> res_var_set(const ValuedField& f);

// Residue-level transcendentals: variables reachable in residues of
// valuation-0 elements at the bound. A generator like x1*t1 uses x1
// syntactically but contributes nothing at the residue level.
std::set<int> k_shadow_vars(const ValuedField& f);
ResSubfield k_shadow_subfield(const ValuedField& f);

struct FieldMonomial {
  std::vector<unsigned> exponents;  // one per closure generator
  HahnSeries value;
};

// All monomials in the closure generators of total degree <= d, in graded
// lexicographic order of the exponent tuples (degree 0 first).
std::vector<FieldMonomial> enumerate_monomials(const ValuedField& f, int d);

// Monomials followed by a seeded sample of rational combinations of them.
std::vector<HahnSeries> enumerate_elements(const ValuedField& f, int d, std::uint64_t seed,
                                           int combination_count);

// Integer span of the valuations of all degree-<= d monomials; a lower bound
// for the value group of the presented field.
GammaSubgroup value_group_shadow(const ValuedField& f, int d);
GammaSubgroup value_group_shadow(const ValuedField& f);

/// Z-monomial in the closure generators (negative exponents allowed).
struct CMonomial {
  std::vector<long> exponents;
  GammaElement valuation;
  ResElement lead_coeff;
  HahnSeries value;  // truncated when a multi-term generator is inverted
};

// Smallest-L1 monomial with the given valuation, scanning L1 norms
// 0..l1_bound in deterministic order; nullopt when none exists at the bound.
// `inv_cutoff` bounds the precision of inverted multi-term generators.
std::optional<CMonomial> monomial_with_valuation(const ValuedField& f, const GammaElement& target,
                                                 int l1_bound, const GammaElement& inv_cutoff);

// Residues generated by the field at the bound: residues of valuation-0
// monomials and leading-coefficient ratios of equal-valuation monomial pairs.
std::vector<ResElement> residue_generators(const ValuedField& f, int d, size_t cap = 48);

// Transcendence degree of the residue shadow of `f` over the residue
// subfield of `c`, computed from residue_generators at degree d.
int residue_shadow_trdeg_over(const ValuedField& f, const ValuedField& c, int d);

enum class HypStatus { pass, bounded_pass, fail };

struct HypothesisItem {
  std::string name;
  HypStatus status;
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisItem> items;

  bool passed() const {
    for (const auto& i : items)
      if (i.status == HypStatus::fail) return false;
    return true;
  }
  std::string first_failure() const {
    for (const auto& i : items)
      if (i.status == HypStatus::fail) return i.name + ": " + i.detail;
    return "";
  }
};

// Standing assumptions for the lifting and extension results: common base,
// generator residue form, Gamma_L /\ Gamma_M = Gamma_C at the bound, residue
// linear disjointness (variable rule plus spot checks), torsion-freeness.
// Failures are report entries, not exceptions.
HypothesisReport check_hypotheses(const ValuedField& l, const ValuedField& m,
                                  const ValuedField& c);

}  // namespace valkit

#endif
