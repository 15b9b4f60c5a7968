#ifndef VALKIT_MORPHISMS_HPP
#define VALKIT_MORPHISMS_HPP

#include <optional>
#include <string>
#include <vector>

#include "valkit/separated.hpp"

namespace valkit {

/// Declared fixed sets of a valued-field isomorphism, verified on the
/// source generators before any use.
struct IsoFixes {
  bool c_pointwise = true;
  bool gamma_l = false;
  bool k_l = false;
  bool rv_l = false;
};

/// sigma: L -> L', given by one image per own generator of L; the base is
/// fixed pointwise.
struct FieldIso {
  FieldPtr source;
  std::vector<HahnSeries> images;
  IsoFixes fixes;
};

struct ExtendCounterexample {
  std::string check;
  std::string element;
  std::string expected;
  std::string got;
};

/// Verification sweep of the extension sigma(sum l_i m_i) = sum sigma(l_i) m_i
/// over the degree-d shadow of the compositum.
struct ExtendReport {
  bool ok = true;
  long elements_checked = 0;
  long valuation_checks = 0;
  long residue_checks = 0;
  long rv_checks = 0;
  long coset_checks = 0;
  long hom_checks = 0;
  long welldef_checks = 0;
  std::vector<ExtendCounterexample> counterexamples;
  // rv mismatches observed when RV_L was not declared fixed; informational
  std::vector<ExtendCounterexample> rv_flags;
  std::string basis_note;
};

ExtendReport extend_iso(const Universe& u, const FieldIso& sigma, FieldPtr l, FieldPtr m,
                        FieldPtr c, int degree, const PowerModel* model,
                        const std::vector<long>& power_ns, std::uint64_t seed,
                        int combination_count = 40);

enum class DeltaPlacement { below_main, above_main };

/// Valuation refinement v': residue transcendentals demoted to fresh
/// infinitesimal axes, with 0 < v'(a_1/e_1) << ... << v'(a_r/e_r) below every
/// main axis. The above_main placement is a diagnostic mode that breaks
/// convexity on purpose.
struct RefinedUniverse {
  Universe base;
  Universe refined;
  std::vector<int> demoted;  // base variable index per pair, delta_1 first
  DeltaPlacement placement = DeltaPlacement::below_main;
  std::vector<HahnSeries> a, e;  // the pairs that induced the demotion

  int r() const { return static_cast<int>(demoted.size()); }
  GammaElement embed(const GammaElement& base_gamma) const;
  GammaElement delta_unit(int pair) const;  // v'(a_{pair+1}/e_{pair+1})
  GammaElement drop_delta(const GammaElement& refined_gamma) const;
  bool in_delta_span(const GammaElement& refined_gamma) const;

  // Re-expansion into the refined universe: polynomial occurrences of
  // demoted variables become infinitesimal exponents; denominators involving
  // them are inverted up to the refined precision cap.
  HahnSeries reexpand(const HahnSeries& s) const;
  GammaElement vprime(const HahnSeries& s) const;
};

struct RefineOutcome {
  bool ok = false;
  bool unsupported = false;  // res(a_i/e_i) is not a scaled distinguished variable
  std::string diagnostic;
  RefinedUniverse universe;
};

RefineOutcome refine_valuation(const Universe& u, FieldPtr l, FieldPtr m, FieldPtr c,
                               const std::vector<HahnSeries>& a,
                               const std::vector<HahnSeries>& e,
                               const std::vector<HahnSeries>& b,
                               DeltaPlacement placement = DeltaPlacement::below_main);

struct RefinementItem {
  std::string name;
  bool ok = true;
  std::string witness;
};

struct RefinementReport {
  std::vector<RefinementItem> items;
  bool ok() const {
    for (const auto& i : items)
      if (!i.ok) return false;
    return true;
  }
};

// The four refinement assertions at degree d: the delta-drop quotient
// recovers v, the delta span is convex, the refined shadow intersection
// equals the refined Gamma_C, and the rv formula agrees on separated
// combinations in the refined universe.
RefinementReport verify_refinement(const RefinedUniverse& ru, FieldPtr l, FieldPtr m, FieldPtr c,
                                   int degree);

}  // namespace valkit

#endif
