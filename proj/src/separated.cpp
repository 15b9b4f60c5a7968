#include "valkit/separated.hpp"

#include <algorithm>
#include <map>

#include "valkit/errors.hpp"

namespace valkit {

std::string to_string(BasisVerdict v) {
  switch (v) {
    case BasisVerdict::separated_good: return "separated-good";
    case BasisVerdict::separated_not_good: return "separated-not-good";
    case BasisVerdict::not_separated: return "not-separated";
    case BasisVerdict::not_independent: return "not-independent";
  }
  return "?";
}

namespace {

constexpr long kCascadeLimit = 20000;

void require_leading_terms(const std::vector<HahnSeries>& vectors) {
  for (const auto& v : vectors) {
    if (v.has_terms()) continue;
    if (!v.is_exact())
      throw precision_exhausted("cannot determine a leading term of a truncated zero vector");
  }
}

std::vector<std::vector<size_t>> partition_by_gamma_class(const std::vector<HahnSeries>& vectors,
                                                          const GammaSubgroup& gamma_c) {
  size_t k = vectors.size();
  std::vector<size_t> root(k);
  for (size_t i = 0; i < k; ++i) root[i] = i;
  auto find = [&](size_t i) {
    while (root[i] != i) i = root[i] = root[root[i]];
    return i;
  };
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      GammaElement diff = vectors[i].valuation_or_throw() - vectors[j].valuation_or_throw();
      if (gamma_c.contains(diff)) root[find(j)] = find(i);
    }
  }
  std::map<size_t, std::vector<size_t>> groups;
  for (size_t i = 0; i < k; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<size_t>> out;
  for (auto& [r, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

struct NormalizedMember {
  size_t index;
  CMonomial multiplier;  // v(multiplier * vector) equals the subclass valuation
};

// Splits a Gamma_C class into subclasses sharing an exact common valuation
// reachable with degree-bounded C-monomial multipliers.
std::vector<std::vector<NormalizedMember>> normalize_class(const Universe& u,
                                                           const std::vector<HahnSeries>& vectors,
                                                           const ValuedField& c,
                                                           std::vector<size_t> members) {
  GammaElement cutoff = default_cutoff(u);
  std::vector<std::vector<NormalizedMember>> out;
  while (!members.empty()) {
    size_t ref = members.front();
    GammaElement v_ref = vectors[ref].valuation_or_throw();
    std::vector<NormalizedMember> sub;
    std::vector<size_t> rest;
    for (size_t idx : members) {
      GammaElement diff = v_ref - vectors[idx].valuation_or_throw();
      auto mult = monomial_with_valuation(c, diff, c.degree_bound, cutoff);
      if (mult)
        sub.push_back(NormalizedMember{idx, std::move(*mult)});
      else
        rest.push_back(idx);
    }
    out.push_back(std::move(sub));
    members = std::move(rest);
  }
  return out;
}

}  // namespace

BasisReport check_separated(const Universe& u, const std::vector<HahnSeries>& vectors,
                            const ValuedField& c) {
  BasisReport report;
  if (vectors.empty()) {
    report.verdict = BasisVerdict::separated_good;
    report.detail = "empty family";
    return report;
  }
  require_leading_terms(vectors);
  for (const auto& v : vectors) {
    if (!v.has_terms()) {
      report.verdict = BasisVerdict::not_independent;
      report.detail = "zero vector";
      return report;
    }
  }
  for (size_t i = 0; i < vectors.size(); ++i)
    for (size_t j = i + 1; j < vectors.size(); ++j)
      if (vectors[i] == vectors[j]) {
        report.verdict = BasisVerdict::not_independent;
        report.detail = "repeated vector";
        return report;
      }

  GammaSubgroup gamma_c = value_group_shadow(c);
  ResSubfield k_c = k_shadow_subfield(c);
  report.coset_partition = partition_by_gamma_class(vectors, gamma_c);

  bool good = true;
  for (const auto& cls : report.coset_partition) {
    const GammaElement& first_v = vectors[cls.front()].valuation_or_throw();
    for (size_t idx : cls)
      if (!(vectors[idx].valuation_or_throw() == first_v)) good = false;
  }

  for (const auto& cls : report.coset_partition) {
    for (const auto& sub : normalize_class(u, vectors, c, cls)) {
      if (sub.size() <= 1) continue;
      std::vector<ResElement> residues;
      const auto& ref = sub.front();
      ResElement lead_ref = ref.multiplier.lead_coeff * vectors[ref.index].leading_coeff();
      for (const auto& member : sub) {
        ResElement lead = member.multiplier.lead_coeff * vectors[member.index].leading_coeff();
        residues.push_back(lead / lead_ref);
      }
      auto lin = linearly_independent_over(residues, k_c);
      if (lin.independent) continue;

      // normalize the dependence so its first nonzero coefficient is 1
      for (auto& alpha : lin.witness) {
        if (alpha.is_zero()) continue;
        ResElement lead = alpha;
        for (auto& beta : lin.witness) beta = beta / lead;
        break;
      }

      // lift the residue dependence to coefficients from C
      SeparationWitness witness;
      int nv = vectors.front().nvars();
      witness.coefficients.assign(vectors.size(),
                                  HahnSeries::zero(vectors.front().main_rank(),
                                                   vectors.front().inf_rank(), nv));
      HahnSeries combination = witness.coefficients.front();
      for (size_t s = 0; s < sub.size(); ++s) {
        const ResElement& alpha = lin.witness[s];
        if (alpha.is_zero()) continue;
        HahnSeries coeff = sub[s].multiplier.value.scaled(alpha);
        witness.coefficients[sub[s].index] = coeff;
        combination = combination + coeff * vectors[sub[s].index];
      }
      witness.bound = vectors[ref.index].valuation_or_throw();

      if (combination.is_exact_zero()) {
        report.verdict = BasisVerdict::not_independent;
        report.detail = "a C-combination with the witness coefficients vanishes exactly";
        return report;
      }
      if (combination.has_terms()) {
        witness.achieved = combination.valuation_or_throw();
      } else {
        witness.achieved = combination.precision().cutoff;
        witness.achieved_is_lower_bound = true;
      }
      report.verdict = BasisVerdict::not_separated;
      report.witness = std::move(witness);
      report.detail = "residue dependence within a valuation class";
      return report;
    }
  }

  report.verdict = good ? BasisVerdict::separated_good : BasisVerdict::separated_not_good;
  report.detail = good ? "separated; within-class valuations equal"
                       : "separated; a class mixes distinct valuations";
  return report;
}

namespace {

struct Builder {
  const Universe& u;
  const ValuedField& c;
  GammaElement cutoff;
  GammaSubgroup gamma_c;
  ResSubfield k_c;
  size_t input_count;
  int mr, ir, nv;

  std::vector<HahnSeries> basis;
  std::vector<std::vector<HahnSeries>> change;  // per basis row, over inputs
  std::vector<std::map<size_t, HahnSeries>> inverse_rows;  // per input, over basis

  Builder(const Universe& universe, const ValuedField& base, GammaElement cut, size_t count,
          int main_rank, int inf_rank, int nvars)
      : u(universe),
        c(base),
        cutoff(std::move(cut)),
        gamma_c(value_group_shadow(base)),
        k_c(k_shadow_subfield(base)),
        input_count(count),
        mr(main_rank),
        ir(inf_rank),
        nv(nvars) {}

  HahnSeries res_lift(const ResElement& alpha) const {
    return HahnSeries::monomial(GammaElement::zero(mr, ir), alpha, ir);
  }

  std::vector<HahnSeries> unit_row(size_t idx) const {
    std::vector<HahnSeries> row(input_count, HahnSeries::zero(mr, ir, nv));
    row[idx] = HahnSeries::one(mr, ir, nv);
    return row;
  }

  void subtract_from_row(std::vector<HahnSeries>& row, const HahnSeries& coeff, size_t b) const {
    for (size_t j = 0; j < input_count; ++j) row[j] = row[j] - coeff * change[b][j];
  }

  // Reduces one input vector against the current basis; returns the status.
  ConstructionStatus insert(size_t idx, const HahnSeries& input, bool trivial_base,
                            std::string* message) {
    HahnSeries r = input;
    std::vector<HahnSeries> combo = unit_row(idx);
    std::map<size_t, HahnSeries> srow;
    for (long round = 0; round < kCascadeLimit; ++round) {
      if (!r.has_terms()) {
        if (r.is_exact()) {
          *message = "input " + std::to_string(idx + 1) + " is C-dependent on the basis";
          return ConstructionStatus::not_independent;
        }
        *message = "cancellation for input " + std::to_string(idx + 1) +
                   " persists to the precision cutoff";
        return ConstructionStatus::precision_exhausted;
      }
      auto [gamma, lead] = r.leading_data();
      if (!lex_less(gamma, cutoff)) {
        *message = "cancellation for input " + std::to_string(idx + 1) +
                   " reached the target cutoff";
        return ConstructionStatus::precision_exhausted;
      }

      // candidates: basis members whose valuation matches gamma modulo
      // Gamma_C with a degree-bounded monomial multiplier
      std::vector<size_t> cand;
      std::vector<CMonomial> mult;
      for (size_t b = 0; b < basis.size(); ++b) {
        GammaElement diff = gamma - basis[b].valuation_or_throw();
        if (trivial_base) {
          if (diff.is_zero()) {
            cand.push_back(b);
            CMonomial unit;
            unit.exponents.assign(closure_generators(c).size(), 0);
            unit.valuation = diff;
            unit.lead_coeff = ResElement::constant(nv, 1);
            unit.value = HahnSeries::one(mr, ir, nv);
            mult.push_back(std::move(unit));
          }
          continue;
        }
        if (!gamma_c.contains(diff)) continue;
        auto m = monomial_with_valuation(c, diff, c.degree_bound, cutoff);
        if (m) {
          cand.push_back(b);
          mult.push_back(std::move(*m));
        }
      }

      std::optional<std::vector<ResElement>> alpha;
      if (!cand.empty()) {
        std::vector<ResElement> cols;
        for (size_t t = 0; t < cand.size(); ++t)
          cols.push_back(mult[t].lead_coeff * basis[cand[t]].leading_coeff());
        alpha = solve_linear_combination(lead, cols, k_c);
      }
      if (!alpha) {
        // uncancellable leading term: fresh class or residue-independent
        basis.push_back(r);
        change.push_back(combo);
        srow[basis.size() - 1] = HahnSeries::one(mr, ir, nv);
        inverse_rows[idx] = std::move(srow);
        return ConstructionStatus::ok;
      }
      for (size_t t = 0; t < cand.size(); ++t) {
        if ((*alpha)[t].is_zero()) continue;
        HahnSeries coeff = mult[t].value.scaled((*alpha)[t]);
        r = r - coeff * basis[cand[t]];
        subtract_from_row(combo, coeff, cand[t]);
        auto it = srow.find(cand[t]);
        if (it == srow.end())
          srow[cand[t]] = coeff;
        else
          it->second = it->second + coeff;
      }
    }
    throw internal_inconsistency("cancellation cascade did not terminate");
  }

  SeparationResult finish(ConstructionStatus status, std::string message) {
    SeparationResult out;
    out.status = status;
    out.message = std::move(message);
    if (status != ConstructionStatus::ok) return out;
    out.basis = basis;
    out.change = change;
    out.inverse_change.assign(input_count,
                              std::vector<HahnSeries>(basis.size(), HahnSeries::zero(mr, ir, nv)));
    for (size_t j = 0; j < input_count; ++j)
      for (const auto& [b, coeff] : inverse_rows[j]) out.inverse_change[j][b] = coeff;
    return out;
  }
};

SeparationResult run_construction(const Universe& u, const std::vector<HahnSeries>& vectors,
                                  const ValuedField& c, const GammaElement& cutoff,
                                  bool trivial_base, bool goodify, bool skip_dependent) {
  SeparationResult bad;
  if (vectors.empty()) return bad;
  require_leading_terms(vectors);
  for (const auto& v : vectors) {
    if (!v.has_terms()) {
      if (skip_dependent) continue;
      bad.status = ConstructionStatus::not_independent;
      bad.message = "zero vector";
      return bad;
    }
  }

  int mr = vectors.front().main_rank(), ir = vectors.front().inf_rank(),
      nv = vectors.front().nvars();
  Builder builder(u, c, cutoff, vectors.size(), mr, ir, nv);
  builder.inverse_rows.resize(vectors.size());
  for (size_t idx = 0; idx < vectors.size(); ++idx) {
    if (skip_dependent && !vectors[idx].has_terms()) continue;
    std::string message;
    ConstructionStatus status = builder.insert(idx, vectors[idx], trivial_base, &message);
    if (status == ConstructionStatus::not_independent && skip_dependent) continue;
    if (status != ConstructionStatus::ok) {
      bad.status = status;
      bad.message = message;
      return bad;
    }
  }

  if (goodify) {
    // rescale within classes so valuations match exactly
    auto classes = partition_by_gamma_class(builder.basis, builder.gamma_c);
    for (const auto& cls : classes) {
      GammaElement v_ref = builder.basis[cls.front()].valuation_or_throw();
      for (size_t pos = 1; pos < cls.size(); ++pos) {
        size_t b = cls[pos];
        GammaElement diff = v_ref - builder.basis[b].valuation_or_throw();
        if (diff.is_zero()) continue;
        auto mult = monomial_with_valuation(c, diff, c.degree_bound, cutoff);
        if (!mult) continue;  // class splits; goodness re-derived by the criterion
        HahnSeries scale = mult->value;
        HahnSeries inv_scale = scale.terms().size() == 1 && scale.is_exact()
                                   ? scale.inverse(Precision::make_exact())
                                   : scale.inverse(Precision::truncated(cutoff));
        builder.basis[b] = scale * builder.basis[b];
        for (auto& entry : builder.change[b]) entry = scale * entry;
        for (auto& row : builder.inverse_rows)
          if (auto it = row.find(b); it != row.end()) it->second = it->second * inv_scale;
      }
    }
  }

  return builder.finish(ConstructionStatus::ok, "");
}

}  // namespace

SeparationResult make_separated_trivial(const Universe& u, const std::vector<HahnSeries>& vectors,
                                        const ValuedField& c) {
  if (!is_trivially_valued(c))
    throw hypothesis_violation("make_separated_trivial needs a trivially valued base");
  return run_construction(u, vectors, c, default_cutoff(u), true, false, false);
}

SeparationResult make_separated(const Universe& u, const std::vector<HahnSeries>& vectors,
                                const ValuedField& c, const Precision& target) {
  GammaElement cutoff = target.exact ? default_cutoff(u) : target.cutoff;
  return run_construction(u, vectors, c, cutoff, false, true, false);
}

SeparationResult make_separated_spanning(const Universe& u,
                                         const std::vector<HahnSeries>& vectors,
                                         const ValuedField& c, const Precision& target) {
  GammaElement cutoff = target.exact ? default_cutoff(u) : target.cutoff;
  return run_construction(u, vectors, c, cutoff, false, true, true);
}

BasisReport check_lift(const Universe& u, const std::vector<HahnSeries>& basis, FieldPtr c,
                       FieldPtr m, FieldPtr l) {
  if (!c || !m) throw structural_error("check_lift needs base and lift fields");
  BasisReport over_c = check_separated(u, basis, *c);
  if (over_c.verdict != BasisVerdict::separated_good)
    throw hypothesis_violation("basis is not separated-good over " + c->name + ": " +
                               to_string(over_c.verdict));
  FieldPtr synthesized;
  if (!l) {
    synthesized = make_field(u, c->name + "(basis)", c, basis, c->degree_bound);
    l = synthesized;
  }
  HypothesisReport hyp = check_hypotheses(*l, *m, *c);
  if (!hyp.passed()) throw hypothesis_violation(hyp.first_failure());
  return check_separated(u, basis, *m);
}

CompositumReport compositum_check(const Universe& u, const std::vector<HahnSeries>& ell,
                                  const std::vector<HahnSeries>& m, const ValuedField& c) {
  (void)u;
  CompositumReport report;
  if (ell.size() != m.size()) throw structural_error("compositum_check needs matched lists");
  if (ell.empty()) return report;
  int mr = ell.front().main_rank(), ir = ell.front().inf_rank(), nv = ell.front().nvars();

  std::vector<size_t> live;
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i].has_terms()) {
      live.push_back(i);
    } else if (!m[i].is_exact()) {
      throw precision_exhausted("coefficient " + std::to_string(i + 1) +
                                " is a truncated zero");
    }
  }
  if (live.empty()) {
    report.counterexamples.push_back({"degenerate", "all coefficients vanish"});
    report.ok = false;
    return report;
  }

  std::optional<GammaElement> claimed;
  for (size_t i : live) {
    GammaElement v = ell[i].valuation_or_throw() + m[i].valuation_or_throw();
    if (!claimed || lex_less(v, *claimed)) claimed = v;
  }
  std::vector<size_t> attaining;
  for (size_t i : live)
    if (ell[i].valuation_or_throw() + m[i].valuation_or_throw() == *claimed) attaining.push_back(i);

  HahnSeries x = HahnSeries::zero(mr, ir, nv);
  for (size_t i : live) x = x + ell[i] * m[i];

  if (!x.has_terms()) {
    if (x.is_exact()) {
      report.ok = false;
      report.counterexamples.push_back(
          {"valuation", "combination vanishes exactly (inputs dependent over M)"});
      return report;
    }
    // truncated zero: v(x) is at least the cutoff
    if (lex_less(*claimed, x.precision().cutoff)) {
      report.ok = false;
      report.counterexamples.push_back(
          {"valuation", "v(x) >= " + x.precision().cutoff.to_string() +
                            " exceeds min v(l_i m_i) = " + claimed->to_string()});
      return report;
    }
    throw precision_exhausted("combination indeterminate at this precision");
  }
  GammaElement v_x = x.valuation_or_throw();
  report.valuation = v_x;
  if (!(v_x == *claimed)) {
    report.ok = false;
    report.counterexamples.push_back(
        {"valuation", "v(x) = " + v_x.to_string() + " but min v(l_i m_i) = " +
                          claimed->to_string() + " (no j attains it)"});
    return report;
  }

  if (claimed->is_zero()) {
    ResElement expected(nv);
    for (size_t i : attaining)
      expected = expected + ell[i].leading_coeff() * m[i].leading_coeff();
    ResElement actual = x.residue();
    if (!(expected == actual)) {
      report.ok = false;
      report.counterexamples.push_back(
          {"residue", "res(x) != sum of res(l_i m_i) over the min-attaining set"});
    }
  }
  return report;
}

RvElement rv_of_combination(const Universe& u, const std::vector<HahnSeries>& ell,
                            const std::vector<HahnSeries>& m) {
  (void)u;
  if (ell.size() != m.size()) throw structural_error("rv_of_combination needs matched lists");
  int mr = ell.front().main_rank(), ir = ell.front().inf_rank(), nv = ell.front().nvars();

  std::vector<size_t> live;
  for (size_t i = 0; i < m.size(); ++i)
    if (m[i].has_terms()) live.push_back(i);
  if (live.empty()) throw structural_error("rv of an all-zero combination");

  std::optional<GammaElement> min_v;
  for (size_t i : live) {
    GammaElement v = ell[i].valuation_or_throw() + m[i].valuation_or_throw();
    if (!min_v || lex_less(v, *min_v)) min_v = v;
  }
  // partial rv sum over the min-attaining set
  ResElement coeff_sum(nv);
  for (size_t i : live) {
    if (!(ell[i].valuation_or_throw() + m[i].valuation_or_throw() == *min_v)) continue;
    coeff_sum = coeff_sum + ell[i].leading_coeff() * m[i].leading_coeff();
  }
  if (coeff_sum.is_zero())
    throw internal_inconsistency(
        "leading coefficients cancel inside the min-attaining set; separatedness violated");
  RvElement formula(*min_v, coeff_sum);

  HahnSeries x = HahnSeries::zero(mr, ir, nv);
  for (size_t i : live) x = x + ell[i] * m[i];
  RvElement direct = rv_of(x);
  if (!(formula == direct))
    throw internal_inconsistency("rv formula disagrees with direct evaluation");
  return formula;
}

}  // namespace valkit
