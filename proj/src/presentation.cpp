#include "valkit/presentation.hpp"

#include <algorithm>

#include "valkit/errors.hpp"

namespace valkit {

FieldPtr make_field(const Universe& u, std::string name, FieldPtr base,
                    std::vector<HahnSeries> generators, int degree_bound) {
  if (degree_bound < 1) throw structural_error("degree bound must be at least 1");
  for (const auto& g : generators) {
    if (!g.nonzero_determinable())
      throw structural_error("presentation generator is not nonzero-determinable");
    if (g.main_rank() != u.main_rank() || g.inf_rank() != u.inf_rank ||
        g.nvars() != u.var_count())
      throw structural_error("presentation generator from a different universe");
  }
  auto f = std::make_shared<ValuedField>();
  f->name = std::move(name);
  f->base = std::move(base);
  f->generators = std::move(generators);
  f->degree_bound = degree_bound;
  f->main_rank = u.main_rank();
  f->inf_rank = u.inf_rank;
  f->nvars = u.var_count();
  return f;
}

std::vector<HahnSeries> closure_generators(const ValuedField& f) {
  std::vector<HahnSeries> out;
  if (f.base) out = closure_generators(*f.base);
  out.insert(out.end(), f.generators.begin(), f.generators.end());
  return out;
}

bool is_trivially_valued(const ValuedField& f) {
  for (const auto& g : closure_generators(f))
    if (!g.valuation_or_throw().is_zero()) return false;
  return true;
}

bool descends_from(const ValuedField& f, const ValuedField& ancestor) {
  const ValuedField* cur = &f;
  while (cur) {
    if (cur == &ancestor || cur->name == ancestor.name) return true;
    cur = cur->base.get();
  }
  return false;
}

std::set<int> res_var_set(const ValuedField& f) {
  std::set<int> vars;
  for (const auto& g : closure_generators(f)) {
    for (const auto& [exp, coeff] : g.terms()) {
      auto used = coeff.used_vars();
      vars.insert(used.begin(), used.end());
    }
  }
  return vars;
}

std::set<int> k_shadow_vars(const ValuedField& f) {
  std::set<int> vars;
  for (const auto& r : residue_generators(f, std::min(f.degree_bound, 3))) {
    auto used = r.used_vars();
    vars.insert(used.begin(), used.end());
  }
  // residues of valuation-0 generators are always reachable regardless of
  // the enumeration cap
  for (const auto& g : closure_generators(f)) {
    if (!g.valuation_or_throw().is_zero()) continue;
    auto used = g.residue().used_vars();
    vars.insert(used.begin(), used.end());
  }
  return vars;
}

ResSubfield k_shadow_subfield(const ValuedField& f) { return ResSubfield{k_shadow_vars(f)}; }

namespace {

void enumerate_exponents(int slots, int degree_left, std::vector<unsigned>& current,
                         std::vector<std::vector<unsigned>>& out) {
  if (slots == 0) {
    out.push_back(current);
    return;
  }
  for (int e = 0; e <= degree_left; ++e) {
    current.push_back(static_cast<unsigned>(e));
    enumerate_exponents(slots - 1, degree_left - e, current, out);
    current.pop_back();
  }
}

// exponent tuples of total degree <= d, ordered by degree then lex
std::vector<std::vector<unsigned>> exponent_tuples(int slots, int d) {
  std::vector<std::vector<unsigned>> all;
  std::vector<unsigned> current;
  enumerate_exponents(slots, d, current, all);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    unsigned da = 0, db = 0;
    for (unsigned x : a) da += x;
    for (unsigned x : b) db += x;
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return all;
}

}  // namespace

std::vector<FieldMonomial> enumerate_monomials(const ValuedField& f, int d) {
  auto gens = closure_generators(f);
  std::vector<FieldMonomial> out;
  if (gens.empty()) {
    out.push_back(FieldMonomial{{}, HahnSeries::one(f.main_rank, f.inf_rank, f.nvars)});
    return out;
  }
  for (const auto& tuple : exponent_tuples(static_cast<int>(gens.size()), d)) {
    HahnSeries value = HahnSeries::one(f.main_rank, f.inf_rank, f.nvars);
    for (size_t i = 0; i < gens.size(); ++i)
      if (tuple[i] > 0) value = value * gens[i].pow(tuple[i]);
    out.push_back(FieldMonomial{tuple, std::move(value)});
  }
  return out;
}

std::vector<HahnSeries> enumerate_elements(const ValuedField& f, int d, std::uint64_t seed,
                                           int combination_count) {
  if (d > f.degree_bound)
    throw structural_error("enumeration degree exceeds the presentation's degree bound");
  auto monomials = enumerate_monomials(f, d);
  std::vector<HahnSeries> out;
  for (auto& m : monomials) out.push_back(m.value);
  if (out.empty() || combination_count <= 0) return out;
  Rng rng(seed);
  for (int i = 0; i < combination_count; ++i) {
    HahnSeries combo = out.front();  // start from the constant 1 monomial
    combo = combo.scaled(ResElement::constant(combo.nvars(), rng.small_rat(3, 2)));
    int picks = static_cast<int>(rng.below(3)) + 1;
    for (int p = 0; p < picks; ++p) {
      const HahnSeries& m = out[rng.below(monomials.size())];
      combo = combo + m.scaled(ResElement::constant(m.nvars(), rng.small_rat_nonzero(3, 2)));
    }
    out.push_back(std::move(combo));
  }
  return out;
}

GammaSubgroup value_group_shadow(const ValuedField& f, int d) {
  std::vector<GammaElement> vals;
  for (const auto& m : enumerate_monomials(f, d)) {
    GammaElement v = m.value.valuation_or_throw();
    if (!v.is_zero()) vals.push_back(std::move(v));
  }
  return GammaSubgroup(f.main_rank, f.inf_rank, std::move(vals)).normalized();
}

GammaSubgroup value_group_shadow(const ValuedField& f) {
  return value_group_shadow(f, f.degree_bound);
}

std::optional<CMonomial> monomial_with_valuation(const ValuedField& f, const GammaElement& target,
                                                 int l1_bound, const GammaElement& inv_cutoff) {
  auto gens = closure_generators(f);
  std::vector<GammaElement> vals;
  std::vector<ResElement> leads;
  for (const auto& g : gens) {
    vals.push_back(g.valuation_or_throw());
    leads.push_back(g.leading_coeff());
  }
  int n = static_cast<int>(gens.size());
  if (target.is_zero()) {
    CMonomial unit;
    unit.exponents.assign(n, 0);
    unit.valuation = target;
    unit.lead_coeff = ResElement::constant(f.nvars, 1);
    unit.value = HahnSeries::one(f.main_rank, f.inf_rank, f.nvars);
    return unit;
  }
  if (n == 0) return std::nullopt;

  std::vector<long> exps(n, 0);
  std::optional<CMonomial> found;
  auto build = [&]() {
    CMonomial cm;
    cm.exponents = exps;
    cm.valuation = target;
    cm.lead_coeff = ResElement::constant(f.nvars, 1);
    cm.value = HahnSeries::one(f.main_rank, f.inf_rank, f.nvars);
    for (int i = 0; i < n; ++i) {
      if (exps[i] == 0) continue;
      for (long e = 0; e < std::abs(exps[i]); ++e)
        cm.lead_coeff = exps[i] > 0 ? cm.lead_coeff * leads[i] : cm.lead_coeff / leads[i];
      if (exps[i] > 0) {
        cm.value = cm.value * gens[i].pow(static_cast<unsigned>(exps[i]));
      } else {
        HahnSeries inv = gens[i].terms().size() == 1 && gens[i].is_exact()
                             ? gens[i].inverse(Precision::make_exact())
                             : gens[i].inverse(Precision::truncated(inv_cutoff));
        cm.value = cm.value * inv.pow(static_cast<unsigned>(-exps[i]));
      }
    }
    found = std::move(cm);
  };
  // scan L1 balls outward; within a ball, lexicographic over signed exponents
  auto search = [&](auto&& self, int slot, int budget) -> bool {
    if (slot == n) {
      if (budget != 0) return false;  // ball surface only: smaller balls already scanned
      GammaElement sum = GammaElement::zero(target.main_rank(), target.inf_rank());
      for (int i = 0; i < n; ++i)
        if (exps[i] != 0) sum = sum + vals[i].scaled(Rat(exps[i]));
      if (!(sum == target)) return false;
      build();
      return true;
    }
    for (long mag = 0; mag <= budget; ++mag) {
      for (int s = 0; s < (mag == 0 ? 1 : 2); ++s) {
        exps[slot] = s == 0 ? mag : -mag;
        if (self(self, slot + 1, budget - static_cast<int>(mag))) return true;
      }
    }
    return false;
  };
  for (int ball = 1; ball <= l1_bound; ++ball)
    if (search(search, 0, ball)) return found;

  // Outside the bounded ball: solve the lattice system exactly. Membership
  // in the shadow guarantees a solution, so goodness never hinges on the
  // scan radius.
  if (auto exact = solve_integer_combination(vals, target)) {
    exps = *exact;
    build();
    return found;
  }
  return std::nullopt;
}

std::vector<ResElement> residue_generators(const ValuedField& f, int d, size_t cap) {
  auto monomials = enumerate_monomials(f, d);
  std::vector<HahnSeries> pool;
  for (const auto& m : monomials) pool.push_back(m.value);
  // cancellation differences expose residue data hidden behind a shared
  // leading term, e.g. (1 + x1*t1) - 1
  size_t base_size = pool.size();
  for (size_t i = 0; i < base_size; ++i) {
    for (size_t j = i + 1; j < base_size && pool.size() < 2 * cap; ++j) {
      if (!(pool[i].valuation_or_throw() == pool[j].valuation_or_throw())) continue;
      if (!(pool[i].leading_coeff() == pool[j].leading_coeff())) continue;
      HahnSeries diff = pool[i] - pool[j];
      if (diff.has_terms()) pool.push_back(std::move(diff));
    }
  }

  std::vector<ResElement> out;
  auto push_unique = [&](const ResElement& r) {
    if (r.is_rational()) return;
    for (const auto& existing : out)
      if (existing == r) return;
    if (out.size() < cap) out.push_back(r);
  };
  for (const auto& m : pool) {
    GammaElement v = m.valuation_or_throw();
    if (v.is_zero()) push_unique(m.residue());
  }
  for (size_t i = 0; i < pool.size() && out.size() < cap; ++i) {
    for (size_t j = i + 1; j < pool.size() && out.size() < cap; ++j) {
      if (pool[i].valuation_or_throw() == pool[j].valuation_or_throw()) {
        push_unique(pool[i].leading_coeff() / pool[j].leading_coeff());
        push_unique(pool[j].leading_coeff() / pool[i].leading_coeff());
      }
    }
  }
  return out;
}

int residue_shadow_trdeg_over(const ValuedField& f, const ValuedField& c, int d) {
  ResSubfield over = k_shadow_subfield(c);
  std::vector<ResElement> picked;
  for (const auto& r : residue_generators(f, d)) {
    auto candidate = picked;
    candidate.push_back(r);
    if (transcendence_degree(candidate, over) > static_cast<int>(picked.size()))
      picked = std::move(candidate);
  }
  return static_cast<int>(picked.size());
}

namespace {

// Residue of a valuation-zero generator must be affine in at most one
// variable; leading coefficients elsewhere must be rational multiples of a
// variable monomial. This keeps the residue shadows variable-generated and
// the induced extensions purely transcendental.
bool generator_residue_form_ok(const HahnSeries& g, std::string* why) {
  GammaElement v = g.valuation_or_throw();
  const ResElement& lead = g.leading_coeff();
  if (v.is_zero()) {
    ResElement r = g.residue();
    if (r.is_rational()) return true;
    if (!r.den().is_constant()) {
      *why = "residue has a nonconstant denominator";
      return false;
    }
    if (r.used_vars().size() > 1 || r.num().total_degree() > 1) {
      *why = "residue is not affine in a single transcendental";
      return false;
    }
    return true;
  }
  if (lead.is_rational()) return true;
  if (!lead.den().is_constant() || lead.num().terms().size() != 1) {
    *why = "leading coefficient is not a rational multiple of a variable monomial";
    return false;
  }
  return true;
}

}  // namespace

HypothesisReport check_hypotheses(const ValuedField& l, const ValuedField& m,
                                  const ValuedField& c) {
  HypothesisReport report;

  bool common = descends_from(l, c) && descends_from(m, c);
  report.items.push_back({"common-base",
                          common ? HypStatus::pass : HypStatus::fail,
                          common ? "C is a base of both L and M"
                                 : "C is not a common base of L and M"});

  std::string why;
  bool form_ok = true;
  for (const ValuedField* f : {&l, &m, &c}) {
    for (const auto& g : closure_generators(*f)) {
      if (!generator_residue_form_ok(g, &why)) {
        form_ok = false;
        why = f->name + ": " + why;
        break;
      }
    }
    if (!form_ok) break;
  }
  report.items.push_back({"generator-residue-form",
                          form_ok ? HypStatus::pass : HypStatus::fail,
                          form_ok ? "generator residues are variable-affine" : why});

  GammaSubgroup sl = value_group_shadow(l);
  GammaSubgroup sm = value_group_shadow(m);
  GammaSubgroup sc = value_group_shadow(c);
  bool gamma_ok = lattice_intersection(sl, sm).equals(sc);
  report.items.push_back({"gamma-intersection",
                          gamma_ok ? HypStatus::bounded_pass : HypStatus::fail,
                          gamma_ok ? "Gamma_L /\\ Gamma_M = Gamma_C at the degree bound"
                                   : "shadow intersection differs from Gamma_C"});

  std::set<int> vl = res_var_set(l), vm = res_var_set(m), vc = res_var_set(c);
  bool disjoint = true;
  for (int v : vl)
    if (vm.count(v) && !vc.count(v)) disjoint = false;
  if (disjoint) {
    // spot check: an independent family of L-residues must stay independent
    // over the variables of M
    ResSubfield over_c{vc};
    std::set<int> cm_vars = vc;
    cm_vars.insert(vm.begin(), vm.end());
    ResSubfield over_cm{cm_vars};
    std::vector<ResElement> family;
    for (const auto& r : residue_generators(l, std::min(l.degree_bound, 3), 8)) {
      auto candidate = family;
      candidate.push_back(r);
      if (linearly_independent_over(candidate, over_c).independent) family = std::move(candidate);
      if (family.size() >= 4) break;
    }
    if (!family.empty() && !linearly_independent_over(family, over_cm).independent)
      disjoint = false;
  }
  report.items.push_back({"residue-linear-disjointness",
                          disjoint ? HypStatus::pass : HypStatus::fail,
                          disjoint ? "L and M use disjoint transcendentals outside C"
                                   : "shared residue transcendental outside C"});

  bool torsion_free = true;
  {
    std::vector<GammaElement> lv;
    for (const auto& g : sl.generators()) lv.push_back(g);
    torsion_free = torsion_free_quotient(lv, sc);
  }
  report.items.push_back({"torsion-free",
                          torsion_free ? HypStatus::bounded_pass : HypStatus::fail,
                          torsion_free ? "Gamma_L/Gamma_C is torsion-free at the degree bound"
                                       : "Gamma_L/Gamma_C has torsion"});

  return report;
}

}  // namespace valkit
