#ifndef VALKIT_HAHN_HPP
#define VALKIT_HAHN_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "valkit/gamma.hpp"
#include "valkit/residue.hpp"

namespace valkit {

/// Either exact, or known strictly below a cutoff exponent with an unknown
/// O(cutoff) tail.
struct Precision {
  bool exact = true;
  GammaElement cutoff;

  static Precision make_exact() { return Precision{}; }
  static Precision truncated(GammaElement c) { return Precision{false, std::move(c)}; }

  bool operator==(const Precision& o) const {
    if (exact != o.exact) return false;
    return exact || cutoff == o.cutoff;
  }
};

/// Finite-support generalized power series: strictly increasing exponents,
/// nonzero residue-field coefficients, explicit O-tail when truncated.
class HahnSeries {
 public:
  HahnSeries() : main_rank_(0), inf_rank_(0), nvars_(0) {}
  HahnSeries(int main_rank, int inf_rank, int nvars)
      : main_rank_(main_rank), inf_rank_(inf_rank), nvars_(nvars) {}

  static HahnSeries zero(int main_rank, int inf_rank, int nvars);
  static HahnSeries monomial(GammaElement exponent, ResElement coeff, int inf_rank = -1);
  static HahnSeries one(int main_rank, int inf_rank, int nvars);

  int main_rank() const { return main_rank_; }
  int inf_rank() const { return inf_rank_; }
  int nvars() const { return nvars_; }

  const std::vector<std::pair<GammaElement, ResElement>>& terms() const { return terms_; }
  const Precision& precision() const { return prec_; }

  bool has_terms() const { return !terms_.empty(); }
  bool is_exact() const { return prec_.exact; }
  bool is_exact_zero() const { return prec_.exact && terms_.empty(); }
  // A nonzero leading term can be read off.
  bool nonzero_determinable() const { return has_terms(); }

  HahnSeries operator+(const HahnSeries& o) const;
  HahnSeries operator-(const HahnSeries& o) const;
  HahnSeries operator-() const;
  HahnSeries operator*(const HahnSeries& o) const;
  bool operator==(const HahnSeries& o) const;

  // Exact scalar multiple (coefficient-level).
  HahnSeries scaled(const ResElement& c) const;
  // Exact multiplication by a single term c * t^shift.
  HahnSeries mono_mul(const GammaElement& shift, const ResElement& c) const;
  HahnSeries pow(unsigned e) const;

  // Multiplicative inverse up to `target`; exact when the series is a single
  // exact term. Throws precision_exhausted on zero or indeterminate input.
  HahnSeries inverse(const Precision& target, long max_steps = 4096) const;
  HahnSeries divided_by(const HahnSeries& o, const Precision& target) const;

  // Least support exponent; nullopt for the exact zero series ("infinite
  // valuation"). Throws precision_exhausted for a truncated series with no
  // known terms.
  std::optional<GammaElement> valuation() const;
  // Valuation that must exist; throws structural_error when infinite.
  GammaElement valuation_or_throw() const;
  const ResElement& leading_coeff() const;

  // Coefficient at exponent zero; requires v >= 0.
  ResElement residue() const;
  // (valuation, leading coefficient).
  std::pair<GammaElement, ResElement> leading_data() const;

  HahnSeries truncated_to(const GammaElement& cutoff) const;
  ResElement coefficient_at(const GammaElement& exponent) const;

  std::string to_string(const Universe& u) const;

  // Restores invariants after direct term construction.
  static HahnSeries from_terms(int main_rank, int inf_rank, int nvars,
                               std::vector<std::pair<GammaElement, ResElement>> terms,
                               Precision prec);

 private:
  int main_rank_, inf_rank_, nvars_;
  std::vector<std::pair<GammaElement, ResElement>> terms_;
  Precision prec_ = Precision::make_exact();

  void normalize();
  void check_compatible(const HahnSeries& o) const;
};

// Universe-aware constructors.
HahnSeries series_one(const Universe& u);
HahnSeries series_zero(const Universe& u);
HahnSeries series_axis_power(const Universe& u, int axis, const Rat& exponent);
HahnSeries series_res_var(const Universe& u, int var);
HahnSeries series_rat(const Universe& u, const Rat& value);

// Default cutoff from the universe's precision cap: cap on the first main
// axis (all later coordinates zero).
GammaElement default_cutoff(const Universe& u);

}  // namespace valkit

#endif
