#include "valkit/hahn.hpp"

#include <algorithm>
#include <sstream>

#include "valkit/errors.hpp"

namespace valkit {

HahnSeries HahnSeries::zero(int main_rank, int inf_rank, int nvars) {
  return HahnSeries(main_rank, inf_rank, nvars);
}

HahnSeries HahnSeries::monomial(GammaElement exponent, ResElement coeff, int inf_rank) {
  if (inf_rank < 0) inf_rank = exponent.inf_rank();
  HahnSeries s(exponent.main_rank(), inf_rank, coeff.nvars());
  if (!coeff.is_zero()) s.terms_.emplace_back(std::move(exponent), std::move(coeff));
  s.normalize();
  return s;
}

HahnSeries HahnSeries::one(int main_rank, int inf_rank, int nvars) {
  return monomial(GammaElement::zero(main_rank, inf_rank), ResElement::constant(nvars, 1),
                  inf_rank);
}

HahnSeries HahnSeries::from_terms(int main_rank, int inf_rank, int nvars,
                                  std::vector<std::pair<GammaElement, ResElement>> terms,
                                  Precision prec) {
  HahnSeries s(main_rank, inf_rank, nvars);
  s.terms_ = std::move(terms);
  s.prec_ = std::move(prec);
  s.normalize();
  return s;
}

void HahnSeries::normalize() {
  for (auto& [g, c] : terms_) {
    if (g.main_rank() != main_rank_ || g.inf_rank() != inf_rank_)
      throw structural_error("series exponent rank mismatch");
    if (c.nvars() != nvars_) throw structural_error("series coefficient variable mismatch");
  }
  std::sort(terms_.begin(), terms_.end(), [](const auto& a, const auto& b) {
    return lex_compare(a.first, b.first) == Ordering::less;
  });
  std::vector<std::pair<GammaElement, ResElement>> merged;
  for (auto& [g, c] : terms_) {
    if (!merged.empty() && merged.back().first == g) {
      merged.back().second = merged.back().second + c;
    } else {
      merged.emplace_back(std::move(g), std::move(c));
    }
  }
  terms_.clear();
  for (auto& [g, c] : merged) {
    if (c.is_zero()) continue;
    if (!prec_.exact && !lex_less(g, prec_.cutoff)) continue;
    terms_.emplace_back(std::move(g), std::move(c));
  }
}

void HahnSeries::check_compatible(const HahnSeries& o) const {
  if (main_rank_ != o.main_rank_ || inf_rank_ != o.inf_rank_ || nvars_ != o.nvars_)
    throw structural_error("series from different universes");
}

HahnSeries HahnSeries::operator+(const HahnSeries& o) const {
  check_compatible(o);
  HahnSeries out(main_rank_, inf_rank_, nvars_);
  out.terms_ = terms_;
  out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
  if (prec_.exact && o.prec_.exact)
    out.prec_ = Precision::make_exact();
  else if (prec_.exact)
    out.prec_ = o.prec_;
  else if (o.prec_.exact)
    out.prec_ = prec_;
  else
    out.prec_ = Precision::truncated(lex_min(prec_.cutoff, o.prec_.cutoff));
  out.normalize();
  return out;
}

HahnSeries HahnSeries::operator-() const {
  HahnSeries out = *this;
  for (auto& [g, c] : out.terms_) c = -c;
  return out;
}

HahnSeries HahnSeries::operator-(const HahnSeries& o) const { return *this + (-o); }

HahnSeries HahnSeries::operator*(const HahnSeries& o) const {
  check_compatible(o);
  bool a_tr = !prec_.exact, b_tr = !o.prec_.exact;
  if (a_tr && b_tr && terms_.empty() && o.terms_.empty())
    throw precision_exhausted("product of two truncated zero series");
  if ((prec_.exact && terms_.empty()) || (o.prec_.exact && o.terms_.empty()))
    return zero(main_rank_, inf_rank_, nvars_);

  std::optional<GammaElement> cutoff;
  auto consider = [&](const GammaElement& g) {
    if (!cutoff || lex_less(g, *cutoff)) cutoff = g;
  };
  if (a_tr && !o.terms_.empty()) consider(prec_.cutoff + o.terms_.front().first);
  if (b_tr && !terms_.empty()) consider(o.prec_.cutoff + terms_.front().first);
  if (a_tr && b_tr) consider(prec_.cutoff + o.prec_.cutoff);

  HahnSeries out(main_rank_, inf_rank_, nvars_);
  for (const auto& [ga, ca] : terms_)
    for (const auto& [gb, cb] : o.terms_) out.terms_.emplace_back(ga + gb, ca * cb);
  out.prec_ = cutoff ? Precision::truncated(*cutoff) : Precision::make_exact();
  out.normalize();
  return out;
}

bool HahnSeries::operator==(const HahnSeries& o) const {
  return main_rank_ == o.main_rank_ && inf_rank_ == o.inf_rank_ && nvars_ == o.nvars_ &&
         terms_ == o.terms_ && prec_ == o.prec_;
}

HahnSeries HahnSeries::scaled(const ResElement& c) const {
  HahnSeries out = *this;
  if (c.is_zero()) {
    out.terms_.clear();
    return out;
  }
  for (auto& [g, coeff] : out.terms_) coeff = coeff * c;
  out.normalize();
  return out;
}

HahnSeries HahnSeries::mono_mul(const GammaElement& shift, const ResElement& c) const {
  HahnSeries out(main_rank_, inf_rank_, nvars_);
  if (!c.is_zero()) {
    for (const auto& [g, coeff] : terms_) out.terms_.emplace_back(g + shift, coeff * c);
  }
  out.prec_ = prec_.exact ? Precision::make_exact() : Precision::truncated(prec_.cutoff + shift);
  out.normalize();
  return out;
}

HahnSeries HahnSeries::pow(unsigned e) const {
  HahnSeries out = one(main_rank_, inf_rank_, nvars_);
  HahnSeries base = *this;
  while (e) {
    if (e & 1) out = out * base;
    base = e > 1 ? base * base : base;
    e >>= 1;
  }
  return out;
}

std::optional<GammaElement> HahnSeries::valuation() const {
  if (!terms_.empty()) return terms_.front().first;
  if (prec_.exact) return std::nullopt;
  throw precision_exhausted("valuation indeterminate: truncated series with no known terms");
}

GammaElement HahnSeries::valuation_or_throw() const {
  auto v = valuation();
  if (!v) throw structural_error("valuation of the exact zero series is infinite");
  return *v;
}

const ResElement& HahnSeries::leading_coeff() const {
  if (terms_.empty()) throw precision_exhausted("leading coefficient of a series with no terms");
  return terms_.front().second;
}

ResElement HahnSeries::residue() const {
  GammaElement origin = GammaElement::zero(main_rank_, inf_rank_);
  if (terms_.empty()) {
    if (prec_.exact) return ResElement(nvars_);
    if (lex_less(origin, prec_.cutoff)) return ResElement(nvars_);
    throw precision_exhausted("residue indeterminate at this precision");
  }
  const GammaElement& v = terms_.front().first;
  if (lex_less(v, origin)) throw not_in_valuation_ring("residue of an element with v < 0");
  if (!prec_.exact && !lex_less(origin, prec_.cutoff))
    throw precision_exhausted("residue indeterminate at this precision");
  for (const auto& [g, c] : terms_)
    if (g == origin) return c;
  return ResElement(nvars_);
}

std::pair<GammaElement, ResElement> HahnSeries::leading_data() const {
  if (terms_.empty()) {
    if (prec_.exact) throw structural_error("rv of the zero series is undefined");
    throw precision_exhausted("rv indeterminate: truncated series with no known terms");
  }
  return {terms_.front().first, terms_.front().second};
}

HahnSeries HahnSeries::truncated_to(const GammaElement& cutoff) const {
  HahnSeries out = *this;
  GammaElement c = cutoff;
  if (!prec_.exact) c = lex_min(c, prec_.cutoff);
  out.prec_ = Precision::truncated(c);
  out.normalize();
  return out;
}

ResElement HahnSeries::coefficient_at(const GammaElement& exponent) const {
  for (const auto& [g, c] : terms_)
    if (g == exponent) return c;
  return ResElement(nvars_);
}

HahnSeries HahnSeries::inverse(const Precision& target, long max_steps) const {
  if (terms_.empty()) {
    if (prec_.exact) throw precision_exhausted("inverse of the exact zero series");
    throw precision_exhausted("inverse of a valuation-indeterminate series");
  }
  const GammaElement& gamma = terms_.front().first;
  const ResElement& lead = terms_.front().second;

  if (terms_.size() == 1 && prec_.exact) {
    ResElement inv_c = ResElement::constant(nvars_, 1) / lead;
    return monomial(-gamma, inv_c, inf_rank_);
  }
  if (target.exact)
    throw precision_exhausted("inverse of a non-monomial series requires a finite target");

  // u = a / (lead * t^gamma) - 1 has positive valuation
  ResElement inv_lead = ResElement::constant(nvars_, 1) / lead;
  HahnSeries unit = mono_mul(-gamma, inv_lead);
  HahnSeries u = unit - one(main_rank_, inf_rank_, nvars_);

  GammaElement sum_cutoff = target.cutoff + gamma;
  HahnSeries sum = one(main_rank_, inf_rank_, nvars_);
  HahnSeries power = one(main_rank_, inf_rank_, nvars_);
  HahnSeries neg_u = -u;
  for (long step = 0; step < max_steps; ++step) {
    if (u.terms_.empty()) break;  // nothing more to cancel; only the O-tail remains
    power = power * neg_u;
    if (power.terms_.empty()) break;
    if (!lex_less(power.terms_.front().first, sum_cutoff)) break;
    sum = sum + power;
    if (step + 1 == max_steps)
      throw precision_exhausted("inverse did not reach the target cutoff");
  }
  HahnSeries result = sum.mono_mul(-gamma, inv_lead);
  if (!u.prec_.exact) result = result.truncated_to(u.prec_.cutoff - gamma);
  return result.truncated_to(target.cutoff);
}

HahnSeries HahnSeries::divided_by(const HahnSeries& o, const Precision& target) const {
  return *this * o.inverse(target);
}

std::string HahnSeries::to_string(const Universe& u) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [g, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string(u.res_vars) << ")";
    for (int i = 0; i < main_rank_; ++i) {
      const Rat& e = g.main()[i];
      if (e == 0) continue;
      os << "*" << u.axes[i];
      if (e != 1) os << "^(" << rat_to_string(e) << ")";
    }
    for (int i = 0; i < inf_rank_; ++i) {
      const Rat& e = g.inf()[i];
      if (e == 0) continue;
      os << "*d" << (i + 1);
      if (e != 1) os << "^(" << rat_to_string(e) << ")";
    }
  }
  if (first) os << "0";
  if (!prec_.exact) os << " + O(" << prec_.cutoff.to_string() << ")";
  return os.str();
}

HahnSeries series_one(const Universe& u) {
  return HahnSeries::one(u.main_rank(), u.inf_rank, u.var_count());
}

HahnSeries series_zero(const Universe& u) {
  return HahnSeries::zero(u.main_rank(), u.inf_rank, u.var_count());
}

HahnSeries series_axis_power(const Universe& u, int axis, const Rat& exponent) {
  GammaElement g = GammaElement::zero(u.main_rank(), u.inf_rank);
  std::vector<Rat> main = g.main();
  main.at(axis) = exponent;
  return HahnSeries::monomial(GammaElement(main, g.inf()),
                              ResElement::constant(u.var_count(), 1), u.inf_rank);
}

HahnSeries series_res_var(const Universe& u, int var) {
  return HahnSeries::monomial(GammaElement::zero(u.main_rank(), u.inf_rank),
                              ResElement::variable(u.var_count(), var), u.inf_rank);
}

HahnSeries series_rat(const Universe& u, const Rat& value) {
  return HahnSeries::monomial(GammaElement::zero(u.main_rank(), u.inf_rank),
                              ResElement::constant(u.var_count(), value), u.inf_rank);
}

GammaElement default_cutoff(const Universe& u) {
  GammaElement g = GammaElement::zero(u.main_rank(), u.inf_rank);
  std::vector<Rat> main = g.main();
  if (!main.empty()) main[0] = Rat(u.precision_cap);
  return GammaElement(main, g.inf());
}

}  // namespace valkit
