#include "valkit/morphisms.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "valkit/errors.hpp"
#include "valkit/rng.hpp"

namespace valkit {

namespace {

// closure(f) with the closure of `ancestor` removed from the front
std::vector<HahnSeries> chain_generators_above(const ValuedField& f, const ValuedField& ancestor) {
  auto full = closure_generators(f);
  size_t skip = closure_generators(ancestor).size();
  if (skip > full.size()) throw structural_error("ancestor closure longer than field closure");
  return std::vector<HahnSeries>(full.begin() + skip, full.end());
}

std::string describe_tuple(const std::vector<unsigned>& exps) {
  std::string out = "[";
  for (size_t i = 0; i < exps.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(exps[i]);
  }
  return out + "]";
}

// Kernel over Q of the evaluation map q -> sum q_i series_i.
std::vector<std::vector<Rat>> series_rational_kernel(const std::vector<HahnSeries>& series) {
  size_t n = series.size();
  std::vector<std::vector<Rat>> equations;
  // exponents appearing anywhere
  std::vector<GammaElement> exponents;
  auto seen = [&](const GammaElement& g) {
    for (const auto& e : exponents)
      if (e == g) return true;
    return false;
  };
  for (const auto& s : series)
    for (const auto& [g, c] : s.terms())
      if (!seen(g)) exponents.push_back(g);

  for (const auto& g : exponents) {
    std::vector<ResElement> entries;
    for (const auto& s : series) entries.push_back(s.coefficient_at(g));
    int nv = entries.front().nvars();
    Polynomial common = Polynomial::constant(nv, 1);
    for (const auto& e : entries) common = common * e.den();
    std::vector<Polynomial> cleared;
    for (const auto& e : entries) {
      auto q = common.divide_exact(e.den());
      if (!q) throw internal_inconsistency("denominator division failed");
      cleared.push_back(e.num() * *q);
    }
    // one equation per residue monomial
    std::map<Monomial, std::vector<Rat>, GrlexLess> rows;
    for (size_t i = 0; i < n; ++i) {
      for (const auto& [m, coeff] : cleared[i].terms()) {
        auto it = rows.try_emplace(m, std::vector<Rat>(n, Rat(0))).first;
        it->second[i] += coeff;
      }
    }
    for (auto& [m, row] : rows) equations.push_back(row);
  }
  return rational_matrix_right_kernel(std::move(equations), n);
}

}  // namespace

ExtendReport extend_iso(const Universe& u, const FieldIso& sigma, FieldPtr l, FieldPtr m,
                        FieldPtr c, int degree, const PowerModel* model,
                        const std::vector<long>& power_ns, std::uint64_t seed,
                        int combination_count) {
  if (!l || !m || !c) throw structural_error("extend_iso needs L, M, C");
  if (sigma.source.get() != l.get())
    throw structural_error("sigma's source presentation must be L");
  if (sigma.images.size() != l->generators.size())
    throw structural_error("sigma needs one image per own generator of L");

  HypothesisReport hyp = check_hypotheses(*l, *m, *c);
  if (!hyp.passed()) throw hypothesis_violation(hyp.first_failure());

  // declared fix flags, verified on generators before use
  for (size_t i = 0; i < sigma.images.size(); ++i) {
    const HahnSeries& gen = l->generators[i];
    const HahnSeries& img = sigma.images[i];
    if (!img.nonzero_determinable())
      throw hypothesis_violation("image of generator " + std::to_string(i + 1) +
                                 " is not nonzero-determinable");
    if (sigma.fixes.gamma_l && !(img.valuation_or_throw() == gen.valuation_or_throw()))
      throw hypothesis_violation("sigma declared Gamma_L fixed but v(image) != v(generator)");
    if (sigma.fixes.k_l && gen.valuation_or_throw().is_zero() &&
        !(img.residue() == gen.residue()))
      throw hypothesis_violation("sigma declared k_L fixed but res(image) != res(generator)");
    if (sigma.fixes.rv_l && !(rv_of(img) == rv_of(gen)))
      throw hypothesis_violation("sigma declared RV_L fixed but rv(image) != rv(generator)");
  }

  ExtendReport report;

  // separated-good basis for L's degree-d shadow over C
  {
    std::vector<HahnSeries> lmono;
    for (const auto& mono : enumerate_monomials(*l, std::min(degree, l->degree_bound)))
      lmono.push_back(mono.value);
    SeparationResult sep = make_separated_spanning(u, lmono, *c, Precision::make_exact());
    if (sep.status != ConstructionStatus::ok)
      throw hypothesis_violation("no separated-good basis for L's shadow: " + sep.message);
    report.basis_note =
        "separated basis of L's degree-" + std::to_string(degree) + " shadow has " +
        std::to_string(sep.basis.size()) + " elements";
  }

  // joint generators of the compositum shadow, with sigma's action
  std::vector<HahnSeries> joint = closure_generators(*l);
  size_t l_closure_size = joint.size();
  size_t l_own_offset = l_closure_size - l->generators.size();
  auto m_part = chain_generators_above(*m, *c);
  joint.insert(joint.end(), m_part.begin(), m_part.end());

  std::vector<HahnSeries> joint_images = joint;
  for (size_t i = 0; i < sigma.images.size(); ++i) joint_images[l_own_offset + i] = sigma.images[i];

  struct Element {
    std::vector<unsigned> exponents;  // empty for combinations
    HahnSeries value;
    HahnSeries image;
    std::string label;
  };
  std::vector<Element> elements;

  auto tuples = [&] {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> current;
    // graded enumeration borrowed from the presentation module would pull in
    // private helpers; a small local recursion keeps this self-contained
    auto rec = [&](auto&& self, size_t slot, int left) -> void {
      if (slot == joint.size()) {
        out.push_back(current);
        return;
      }
      for (int e = 0; e <= left; ++e) {
        current.push_back(static_cast<unsigned>(e));
        self(self, slot + 1, left - e);
        current.pop_back();
      }
    };
    rec(rec, 0, degree);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      unsigned da = 0, db = 0;
      for (unsigned x : a) da += x;
      for (unsigned x : b) db += x;
      if (da != db) return da < db;
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    return out;
  }();

  for (const auto& tuple : tuples) {
    Element el;
    el.exponents = tuple;
    el.value = HahnSeries::one(u.main_rank(), u.inf_rank, u.var_count());
    el.image = el.value;
    for (size_t i = 0; i < joint.size(); ++i) {
      if (tuple[i] == 0) continue;
      el.value = el.value * joint[i].pow(tuple[i]);
      el.image = el.image * joint_images[i].pow(tuple[i]);
    }
    el.label = describe_tuple(tuple);
    elements.push_back(std::move(el));
  }
  size_t monomial_count = elements.size();

  // seeded rational combinations
  Rng rng(seed);
  for (int k = 0; k < combination_count; ++k) {
    Element el;
    el.value = HahnSeries::zero(u.main_rank(), u.inf_rank, u.var_count());
    el.image = el.value;
    int picks = static_cast<int>(rng.below(3)) + 1;
    std::string label = "combo" + std::to_string(k) + "(";
    for (int p = 0; p < picks; ++p) {
      size_t pick = rng.below(monomial_count);
      Rat q = rng.small_rat_nonzero(3, 2);
      ResElement scale = ResElement::constant(u.var_count(), q);
      el.value = el.value + elements[pick].value.scaled(scale);
      el.image = el.image + elements[pick].image.scaled(scale);
      label += (p ? "," : "") + std::to_string(pick);
    }
    el.label = label + ")";
    elements.push_back(std::move(el));
  }

  // well-definedness: Q-linear relations among the monomial values must map
  // to relations among the images
  {
    std::vector<HahnSeries> values, images;
    for (size_t i = 0; i < monomial_count; ++i) {
      values.push_back(elements[i].value);
      images.push_back(elements[i].image);
    }
    for (const auto& q : series_rational_kernel(values)) {
      HahnSeries image_combo = HahnSeries::zero(u.main_rank(), u.inf_rank, u.var_count());
      for (size_t i = 0; i < images.size(); ++i) {
        if (q[i] == 0) continue;
        image_combo = image_combo + images[i].scaled(ResElement::constant(u.var_count(), q[i]));
      }
      ++report.welldef_checks;
      if (!image_combo.is_exact_zero() && image_combo.has_terms()) {
        report.ok = false;
        report.counterexamples.push_back({"well-definedness", "kernel vector", "0",
                                          "a relation among monomials maps to a nonzero series"});
      }
    }
  }

  GammaElement origin = GammaElement::zero(u.main_rank(), u.inf_rank);
  for (const auto& el : elements) {
    if (!el.value.has_terms()) {
      // a vanishing combination must map to a vanishing combination
      if (el.value.is_exact() && el.image.has_terms()) {
        report.ok = false;
        report.counterexamples.push_back({"linearity", el.label, "0", "nonzero image"});
      }
      continue;
    }
    if (!el.image.has_terms()) {
      if (el.image.is_exact()) {
        report.ok = false;
        report.counterexamples.push_back({"linearity", el.label, "nonzero", "0"});
        continue;
      }
      throw precision_exhausted("sigma image indeterminate on " + el.label);
    }
    ++report.elements_checked;

    GammaElement v = el.value.valuation_or_throw();
    GammaElement v_img = el.image.valuation_or_throw();
    ++report.valuation_checks;
    if (!(v == v_img)) {
      report.ok = false;
      report.counterexamples.push_back(
          {"valuation", el.label, v.to_string(), v_img.to_string()});
      continue;
    }
    if (v == origin) {
      ++report.residue_checks;
      if (!(el.value.residue() == el.image.residue())) {
        report.ok = false;
        report.counterexamples.push_back({"residue", el.label,
                                          el.value.residue().to_string(u.res_vars),
                                          el.image.residue().to_string(u.res_vars)});
        continue;
      }
    }
    RvElement rv_src = rv_of(el.value);
    RvElement rv_img = rv_of(el.image);
    bool rv_equal = rv_src == rv_img;
    ++report.rv_checks;
    if (!rv_equal) {
      if (sigma.fixes.rv_l) {
        report.ok = false;
        report.counterexamples.push_back(
            {"rv", el.label, rv_src.to_string(u), rv_img.to_string(u)});
        continue;
      }
      if (report.rv_flags.size() < 8)
        report.rv_flags.push_back({"rv", el.label, rv_src.to_string(u), rv_img.to_string(u)});
    }
    if (model) {
      for (long n : power_ns) {
        ++report.coset_checks;
        CosetId a = power_coset_of(rv_src, n, *model);
        CosetId b = power_coset_of(rv_img, n, *model);
        if (!(a.id == b.id)) {
          report.ok = false;
          report.counterexamples.push_back(
              {"P" + std::to_string(n) + "-coset", el.label, a.id, b.id});
        }
      }
    }
  }

  // ring homomorphism spot checks on sampled monomial pairs
  Rng pair_rng = rng.fork(1);
  long pair_samples = std::min<long>(60, static_cast<long>(monomial_count * monomial_count));
  for (long s = 0; s < pair_samples; ++s) {
    const Element& x = elements[pair_rng.below(monomial_count)];
    const Element& y = elements[pair_rng.below(monomial_count)];
    // sigma of the product monomial, recomputed from exponents
    std::vector<unsigned> prod(x.exponents.size());
    for (size_t i = 0; i < prod.size(); ++i) prod[i] = x.exponents[i] + y.exponents[i];
    HahnSeries image_of_product = HahnSeries::one(u.main_rank(), u.inf_rank, u.var_count());
    for (size_t i = 0; i < prod.size(); ++i)
      if (prod[i]) image_of_product = image_of_product * joint_images[i].pow(prod[i]);
    ++report.hom_checks;
    if (!(image_of_product == x.image * y.image)) {
      report.ok = false;
      report.counterexamples.push_back(
          {"homomorphism", x.label + "*" + y.label, "sigma(xy)", "sigma(x)sigma(y)"});
    }
    HahnSeries sum_image = x.image + y.image;
    HahnSeries image_of_sum = x.image + y.image;  // sigma is linear by construction
    ++report.hom_checks;
    if (!(sum_image == image_of_sum)) {
      report.ok = false;
      report.counterexamples.push_back({"homomorphism", x.label + "+" + y.label, "", ""});
    }
  }

  return report;
}

GammaElement RefinedUniverse::embed(const GammaElement& base_gamma) const {
  if (placement == DeltaPlacement::below_main)
    return GammaElement(base_gamma.main(), std::vector<Rat>(r(), Rat(0)));
  std::vector<Rat> main(r(), Rat(0));
  main.insert(main.end(), base_gamma.main().begin(), base_gamma.main().end());
  return GammaElement(std::move(main), {});
}

GammaElement RefinedUniverse::delta_unit(int pair) const {
  // delta_r is most significant: pair r-1 sits on slot 0
  int slot = r() - 1 - pair;
  if (placement == DeltaPlacement::below_main)
    return GammaElement::inf_unit(base.main_rank(), r(), slot);
  return GammaElement::axis_unit(base.main_rank() + r(), slot, 0);
}

GammaElement RefinedUniverse::drop_delta(const GammaElement& refined_gamma) const {
  if (placement == DeltaPlacement::below_main) return GammaElement(refined_gamma.main(), {});
  std::vector<Rat> main(refined_gamma.main().begin() + r(), refined_gamma.main().end());
  return GammaElement(std::move(main), {});
}

bool RefinedUniverse::in_delta_span(const GammaElement& refined_gamma) const {
  GammaElement dropped = drop_delta(refined_gamma);
  return dropped.is_zero();
}

HahnSeries RefinedUniverse::reexpand(const HahnSeries& s) const {
  int nv = refined.var_count();
  HahnSeries out = HahnSeries::zero(refined.main_rank(), refined.inf_rank, nv);
  GammaElement cap = default_cutoff(refined);

  auto expand_poly = [&](const Polynomial& p, const GammaElement& shift) {
    // split off demoted-variable exponents into infinitesimal axes
    HahnSeries acc = HahnSeries::zero(refined.main_rank(), refined.inf_rank, nv);
    for (const auto& [mono, coeff] : p.terms()) {
      GammaElement exponent = shift;
      Monomial kept = mono;
      for (int pair = 0; pair < r(); ++pair) {
        unsigned d = mono[demoted[pair]];
        if (d == 0) continue;
        exponent = exponent + delta_unit(pair).scaled(Rat(static_cast<long>(d)));
        kept[demoted[pair]] = 0;
      }
      Polynomial kp(p.nvars());
      kp.set_coeff(kept, coeff);
      acc = acc + HahnSeries::monomial(exponent, ResElement(kp, Polynomial::constant(nv, 1)),
                                       refined.inf_rank);
    }
    return acc;
  };

  for (const auto& [gamma, coeff] : s.terms()) {
    GammaElement shifted = embed(gamma);
    bool den_demoted = false;
    for (int pair = 0; pair < r(); ++pair)
      if (coeff.den().uses_var(demoted[pair])) den_demoted = true;
    HahnSeries num = expand_poly(coeff.num(), shifted);
    if (!den_demoted) {
      ResElement inv_den(Polynomial::constant(nv, 1), coeff.den());
      out = out + num.scaled(inv_den);
    } else {
      HahnSeries den =
          expand_poly(coeff.den(), GammaElement::zero(refined.main_rank(), refined.inf_rank));
      out = out + num * den.inverse(Precision::truncated(cap));
    }
  }
  if (!s.is_exact()) out = out.truncated_to(embed(s.precision().cutoff));
  return out;
}

GammaElement RefinedUniverse::vprime(const HahnSeries& s) const {
  return reexpand(s).valuation_or_throw();
}

RefineOutcome refine_valuation(const Universe& u, FieldPtr l, FieldPtr m, FieldPtr c,
                               const std::vector<HahnSeries>& a, const std::vector<HahnSeries>& e,
                               const std::vector<HahnSeries>& b, DeltaPlacement placement) {
  RefineOutcome outcome;
  if (!l || !m || !c) throw structural_error("refine_valuation needs L, M, C");
  if (u.inf_rank != 0) throw structural_error("refinement starts from a universe without deltas");
  if (a.size() != e.size()) throw structural_error("a and e must be matched lists");

  if (a.empty() && b.empty()) {
    // r = 0: the refinement is v itself
    RefinedUniverse ru;
    ru.base = u;
    ru.refined = u;
    ru.placement = placement;
    outcome.ok = true;
    outcome.universe = std::move(ru);
    outcome.diagnostic = "r = 0; v' = v";
    return outcome;
  }

  for (size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].valuation_or_throw() == e[i].valuation_or_throw())) {
      outcome.diagnostic = "v(a_" + std::to_string(i + 1) + ") != v(e_" + std::to_string(i + 1) +
                           ")";
      return outcome;
    }
  }
  RvIndependenceReport indep = rv_independent(a, b, e, *l, *m, *c);
  if (!indep.independent) {
    outcome.diagnostic = "rv-independence fails: " + indep.diagnostic;
    return outcome;
  }

  // demoted variables must be untouched by C's presentation (syntactically),
  // and the scalar in res(a_i/e_i) = s * x_j must lie in the residue shadow
  std::set<int> c_vars = res_var_set(*c);
  ResSubfield k_c = k_shadow_subfield(*c);
  std::vector<int> demoted;
  for (size_t i = 0; i < a.size(); ++i) {
    ResElement rho = a[i].leading_coeff() / e[i].leading_coeff();
    int var = -1;
    for (int v = 0; v < u.var_count(); ++v) {
      if (c_vars.count(v)) continue;
      if (std::find(demoted.begin(), demoted.end(), v) != demoted.end()) continue;
      ResElement ratio = rho / ResElement::variable(u.var_count(), v);
      if (k_c.contains(ratio) && !ratio.is_zero()) {
        var = v;
        break;
      }
    }
    if (var < 0) {
      outcome.unsupported = true;
      outcome.diagnostic = "res(a_" + std::to_string(i + 1) +
                           "/e_" + std::to_string(i + 1) +
                           ") is not a k_C multiple of a distinguished residue variable";
      return outcome;
    }
    demoted.push_back(var);
  }

  RefinedUniverse ru;
  ru.base = u;
  ru.demoted = demoted;
  ru.placement = placement;
  ru.a = a;
  ru.e = e;
  ru.refined = u;
  if (placement == DeltaPlacement::below_main) {
    ru.refined.inf_rank = static_cast<int>(demoted.size());
  } else {
    std::vector<std::string> axes;
    for (size_t i = 0; i < demoted.size(); ++i)
      axes.push_back("_delta" + std::to_string(demoted.size() - i));
    axes.insert(axes.end(), u.axes.begin(), u.axes.end());
    ru.refined.axes = std::move(axes);
    ru.refined.inf_rank = 0;
  }
  outcome.ok = true;
  outcome.universe = std::move(ru);
  outcome.diagnostic = "demoted " + std::to_string(demoted.size()) + " variable(s)";
  return outcome;
}

namespace {

FieldPtr reexpand_field(const RefinedUniverse& ru, const ValuedField& f, FieldPtr new_base) {
  std::vector<HahnSeries> gens;
  for (const auto& g : f.generators) gens.push_back(ru.reexpand(g));
  return make_field(ru.refined, f.name + "'", std::move(new_base), std::move(gens),
                    f.degree_bound);
}

}  // namespace

RefinementReport verify_refinement(const RefinedUniverse& ru, FieldPtr l, FieldPtr m, FieldPtr c,
                                   int degree) {
  RefinementReport report;
  if (ru.r() == 0) {
    report.items.push_back({"quotient-recovers-v", true, "vacuous: no demoted variables"});
    report.items.push_back({"delta-convex", true, "vacuous"});
    report.items.push_back({"gamma-intersection", true, "vacuous"});
    report.items.push_back({"rv-combination", true, "vacuous"});
    return report;
  }

  // refined copies of the three fields
  FieldPtr c_ref, l_ref, m_ref;
  {
    // rebuild the base chain below C first
    std::function<FieldPtr(const ValuedField&)> rebuild = [&](const ValuedField& f) -> FieldPtr {
      FieldPtr nb = f.base ? rebuild(*f.base) : nullptr;
      return reexpand_field(ru, f, nb);
    };
    c_ref = rebuild(*c);
    l_ref = reexpand_field(ru, *l, c_ref);
    m_ref = reexpand_field(ru, *m, c_ref);
  }

  // (1) dropping the delta coordinates of v' recovers v
  {
    RefinementItem item{"quotient-recovers-v", true, ""};
    for (const ValuedField* f : {l.get(), m.get(), c.get()}) {
      for (const auto& mono : enumerate_monomials(*f, std::min(degree, f->degree_bound))) {
        GammaElement v = mono.value.valuation_or_throw();
        GammaElement vp = ru.vprime(mono.value);
        if (!(ru.drop_delta(vp) == v)) {
          item.ok = false;
          item.witness = f->name + " monomial with v = " + v.to_string() + ", v' = " +
                         vp.to_string();
          break;
        }
      }
      if (!item.ok) break;
    }
    report.items.push_back(std::move(item));
  }

  // (2) the delta span is convex in the refined order
  {
    RefinementItem item{"delta-convex", true, ""};
    std::vector<GammaElement> delta_samples;
    for (int p = 0; p < ru.r(); ++p) {
      GammaElement d = ru.delta_unit(p);
      delta_samples.push_back(d);
      delta_samples.push_back(-d);
      delta_samples.push_back(d.scaled(Rat(3)));
      delta_samples.push_back(d.scaled(Rat(-3)));
    }
    std::vector<GammaElement> probes = delta_samples;
    for (const ValuedField* f : {l_ref.get(), m_ref.get()}) {
      for (const auto& mono : enumerate_monomials(*f, std::min(degree, 3))) {
        GammaElement v = mono.value.valuation_or_throw();
        probes.push_back(v);
        probes.push_back(-v);
      }
    }
    for (const auto& lo : delta_samples) {
      for (const auto& hi : delta_samples) {
        if (!lex_less(lo, hi)) continue;
        for (const auto& h : probes) {
          if (lex_less(lo, h) && lex_less(h, hi) && !ru.in_delta_span(h)) {
            item.ok = false;
            item.witness = h.to_string() + " lies between " + lo.to_string() + " and " +
                           hi.to_string() + " but has a nonzero main part";
            break;
          }
        }
        if (!item.ok) break;
      }
      if (!item.ok) break;
    }
    report.items.push_back(std::move(item));
  }

  // (3) refined shadow intersection equals the refined Gamma_C
  {
    RefinementItem item{"gamma-intersection", true, ""};
    GammaSubgroup sl = value_group_shadow(*l_ref, std::min(degree, l_ref->degree_bound));
    GammaSubgroup sm = value_group_shadow(*m_ref, std::min(degree, m_ref->degree_bound));
    GammaSubgroup sc = value_group_shadow(*c_ref, std::min(degree, c_ref->degree_bound));
    if (!lattice_intersection(sl, sm).equals(sc)) {
      item.ok = false;
      item.witness = "refined shadows intersect beyond refined Gamma_C";
    }
    report.items.push_back(std::move(item));
  }

  // (4) the rv formula agrees on separated combinations in the refined
  // universe
  {
    RefinementItem item{"rv-combination", true, ""};
    try {
      std::vector<HahnSeries> lmono;
      for (const auto& mono : enumerate_monomials(*l_ref, std::min(degree, 2)))
        lmono.push_back(mono.value);
      SeparationResult sep =
          make_separated_spanning(ru.refined, lmono, *c_ref, Precision::make_exact());
      if (sep.status != ConstructionStatus::ok) {
        item.ok = false;
        item.witness = "no separated basis in the refined universe: " + sep.message;
      } else {
        auto m_monos = enumerate_monomials(*m_ref, std::min(degree, 2));
        size_t combos = 0;
        for (size_t start = 0; start < m_monos.size() && combos < 24; ++start, ++combos) {
          std::vector<HahnSeries> coeffs;
          for (size_t i = 0; i < sep.basis.size(); ++i)
            coeffs.push_back(m_monos[(start + i) % m_monos.size()].value);
          rv_of_combination(ru.refined, sep.basis, coeffs);
        }
      }
    } catch (const internal_inconsistency& err) {
      item.ok = false;
      item.witness = err.what();
    }
    report.items.push_back(std::move(item));
  }

  return report;
}

}  // namespace valkit
