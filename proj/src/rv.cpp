#include "valkit/rv.hpp"

#include <sstream>

#include "valkit/errors.hpp"

namespace valkit {

RvElement::RvElement(GammaElement g, ResElement c) : gamma(std::move(g)), coeff(std::move(c)) {
  if (coeff.is_zero()) throw structural_error("rv element with zero coefficient");
}

RvElement RvElement::operator*(const RvElement& o) const {
  return RvElement(gamma + o.gamma, coeff * o.coeff);
}

RvElement RvElement::inverse() const {
  return RvElement(-gamma, ResElement::constant(coeff.nvars(), 1) / coeff);
}

RvElement RvElement::pow(long e) const {
  RvElement base = e >= 0 ? *this : inverse();
  long k = e >= 0 ? e : -e;
  RvElement out(GammaElement::zero(gamma.main_rank(), gamma.inf_rank()),
                ResElement::constant(coeff.nvars(), 1));
  for (long i = 0; i < k; ++i) out = out * base;
  return out;
}

std::string RvElement::to_string(const Universe& u) const {
  return "(" + gamma.to_string() + ", " + coeff.to_string(u.res_vars) + ")";
}

RvElement rv_of(const HahnSeries& s) {
  auto [gamma, coeff] = s.leading_data();
  return RvElement(std::move(gamma), std::move(coeff));
}

RvSum rv_try_add(const RvElement& a, const RvElement& b) {
  Ordering ord = lex_compare(a.gamma, b.gamma);
  RvSum out;
  if (ord == Ordering::less) {
    out.value = a;
    return out;
  }
  if (ord == Ordering::greater) {
    out.value = b;
    return out;
  }
  ResElement sum = a.coeff + b.coeff;
  if (sum.is_zero()) {
    out.collision = true;
    return out;
  }
  out.value = RvElement(a.gamma, std::move(sum));
  return out;
}

PowerModel PowerModel::acf() { return PowerModel{}; }

PowerModel PowerModel::rcf(std::vector<Rat> sample_point) {
  PowerModel m;
  m.kind = PowerModelKind::rcf_residue;
  m.sample_point = std::move(sample_point);
  return m;
}

namespace {

std::vector<long> integral_gamma(const RvElement& x) {
  std::vector<long> out;
  for (const Rat& c : flatten(x.gamma)) {
    if (c.get_den() != 1)
      throw unsupported_model("built-in power models need integral gamma coordinates, got " +
                              rat_to_string(c));
    out.push_back(c.get_num().get_si());
  }
  return out;
}

long positive_mod(long a, long n) {
  long m = a % n;
  return m < 0 ? m + n : m;
}

int rcf_sign(const RvElement& x, const PowerModel& model) {
  std::vector<Rat> point = model.sample_point;
  point.resize(x.coeff.nvars(), Rat(1));
  auto value = x.coeff.eval(point);
  if (!value)
    throw unsupported_model("rcf sample point is a pole of the leading coefficient");
  if (*value == 0)
    throw unsupported_model("rcf sample point is a zero of the leading coefficient");
  return sgn(*value);
}

std::string gamma_mod_tag(const std::vector<long>& g, long n) {
  std::ostringstream os;
  os << "g(";
  for (size_t i = 0; i < g.size(); ++i) {
    if (i) os << ",";
    os << positive_mod(g[i], n);
  }
  os << ")";
  return os.str();
}

size_t table_coset_index(const RvElement& x, const PowerTable& table) {
  for (size_t i = 0; i < table.cosets.size(); ++i)
    if (table.cosets[i].rep == x) return i;
  throw unsupported_model("element is not a listed coset representative");
}

}  // namespace

CosetId power_coset_of(const RvElement& x, long n, const PowerModel& model) {
  if (n < 2) throw structural_error("power predicate needs n >= 2");
  switch (model.kind) {
    case PowerModelKind::acf_residue: {
      auto g = integral_gamma(x);
      bool in = true;
      for (long c : g)
        if (positive_mod(c, n) != 0) in = false;
      return CosetId{gamma_mod_tag(g, n), in};
    }
    case PowerModelKind::rcf_residue: {
      if (n != 2) throw unsupported_model("rcf residue model supports n = 2 only");
      auto g = integral_gamma(x);
      int s = rcf_sign(x, model);
      bool in = s > 0;
      for (long c : g)
        if (positive_mod(c, 2) != 0) in = false;
      return CosetId{gamma_mod_tag(g, 2) + (s > 0 ? "s+" : "s-"), in};
    }
    case PowerModelKind::explicit_table: {
      auto it = model.tables.find(n);
      if (it == model.tables.end())
        throw unsupported_model("no explicit table for n = " + std::to_string(n));
      size_t idx = table_coset_index(x, it->second);
      return CosetId{it->second.cosets[idx].name, idx == it->second.identity};
    }
  }
  throw structural_error("unknown power model kind");
}

std::vector<RvElement> coset_representatives(long n, const PowerModel& model, int main_rank,
                                             int inf_rank, int nvars) {
  std::vector<RvElement> out;
  auto push_gamma_reps = [&](const std::vector<Rat>& coeff_choices) {
    int rank = main_rank + inf_rank;
    std::vector<long> g(rank, 0);
    while (true) {
      for (const Rat& c : coeff_choices) {
        std::vector<Rat> coords;
        for (long x : g) coords.emplace_back(x);
        out.emplace_back(unflatten(coords, main_rank, inf_rank),
                         ResElement::constant(nvars, c));
      }
      int pos = rank - 1;
      while (pos >= 0) {
        if (++g[pos] < n) break;
        g[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  };
  switch (model.kind) {
    case PowerModelKind::acf_residue:
      push_gamma_reps({Rat(1)});
      return out;
    case PowerModelKind::rcf_residue:
      if (n != 2) throw unsupported_model("rcf residue model supports n = 2 only");
      push_gamma_reps({Rat(1), Rat(-1)});
      return out;
    case PowerModelKind::explicit_table: {
      auto it = model.tables.find(n);
      if (it == model.tables.end())
        throw unsupported_model("no explicit table for n = " + std::to_string(n));
      for (const auto& c : it->second.cosets) out.push_back(c.rep);
      return out;
    }
  }
  throw structural_error("unknown power model kind");
}

namespace {
LambdaCheckReport verify_lambda_tables_impl(long n, const PowerModel& model, int main_rank,
                                            int inf_rank, int nvars);
}

LambdaCheckReport verify_lambda_tables(long n, const PowerModel& model, int main_rank,
                                       int inf_rank, int nvars) {
  LambdaCheckReport report;
  try {
    return verify_lambda_tables_impl(n, model, main_rank, inf_rank, nvars);
  } catch (const internal_inconsistency& err) {
    report.ok = false;
    report.counterexample = err.what();
    return report;
  }
}

namespace {
LambdaCheckReport verify_lambda_tables_impl(long n, const PowerModel& model, int main_rank,
                                            int inf_rank, int nvars) {
  LambdaCheckReport report;
  auto reps = coset_representatives(n, model, main_rank, inf_rank, nvars);

  // coset arithmetic through representatives
  auto coset_of = [&](const RvElement& x) { return power_coset_of(x, n, model); };
  auto in_pn = [&](const RvElement& x) { return coset_of(x).in_pn; };

  // product structure on representative indices (for explicit tables this is
  // the shipped table; for built-ins it is computed elementwise)
  auto product_index = [&](size_t i, size_t j) -> size_t {
    if (model.kind == PowerModelKind::explicit_table)
      return model.tables.at(n).product.at(i).at(j);
    CosetId id = coset_of(reps[i] * reps[j]);
    for (size_t k = 0; k < reps.size(); ++k)
      if (coset_of(reps[k]).id == id.id) return k;
    throw internal_inconsistency("representative product left the coset set");
  };
  auto inverse_index = [&](size_t i) -> size_t {
    for (size_t j = 0; j < reps.size(); ++j) {
      size_t p = product_index(i, j);
      if (model.kind == PowerModelKind::explicit_table
              ? p == model.tables.at(n).identity
              : in_pn(reps[p]))
        return j;
    }
    throw internal_inconsistency("coset without inverse in the table");
  };

  for (size_t rho = 0; rho < reps.size() && report.ok; ++rho) {
    // Lambda_{rho,n}: (lambda, mu) = (rep(A)^-1, rep(B)^-1) over all
    // factorizations A * B = coset(rho)
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t ca = 0; ca < reps.size(); ++ca)
      for (size_t cb = 0; cb < reps.size(); ++cb)
        if (product_index(ca, cb) == rho) pairs.emplace_back(inverse_index(ca), inverse_index(cb));

    for (size_t x = 0; x < reps.size() && report.ok; ++x) {
      for (size_t y = 0; y < reps.size() && report.ok; ++y) {
        bool lhs;
        if (model.kind == PowerModelKind::explicit_table) {
          size_t xy = product_index(x, y);
          lhs = product_index(inverse_index(rho), xy) == model.tables.at(n).identity;
        } else {
          lhs = in_pn(reps[rho].inverse() * reps[x] * reps[y]);
        }
        bool rhs = false;
        for (const auto& [lam, mu] : pairs) {
          bool px = model.kind == PowerModelKind::explicit_table
                        ? product_index(lam, x) == model.tables.at(n).identity
                        : in_pn(reps[lam] * reps[x]);
          bool py = model.kind == PowerModelKind::explicit_table
                        ? product_index(mu, y) == model.tables.at(n).identity
                        : in_pn(reps[mu] * reps[y]);
          if (px && py) {
            rhs = true;
            break;
          }
        }
        ++report.checked;
        if (lhs != rhs) {
          report.ok = false;
          report.counterexample = "rho=" + std::to_string(rho) + " x=" + std::to_string(x) +
                                  " y=" + std::to_string(y);
        }
      }
    }
  }

  // P_n multiplicativity over the same representatives
  for (size_t x = 0; x < reps.size() && report.ok; ++x) {
    for (size_t y = 0; y < reps.size() && report.ok; ++y) {
      bool px, py, pxy;
      if (model.kind == PowerModelKind::explicit_table) {
        const auto& table = model.tables.at(n);
        px = x == table.identity;
        py = y == table.identity;
        pxy = product_index(x, y) == table.identity;
      } else {
        px = in_pn(reps[x]);
        py = in_pn(reps[y]);
        pxy = in_pn(reps[x] * reps[y]);
      }
      ++report.checked;
      if (px && py && !pxy) {
        report.ok = false;
        report.counterexample =
            "multiplicativity x=" + std::to_string(x) + " y=" + std::to_string(y);
      }
    }
  }
  return report;
}
}  // namespace

RvIndependenceReport rv_independent(const std::vector<HahnSeries>& a,
                                    const std::vector<HahnSeries>& b,
                                    const std::vector<HahnSeries>& e, const ValuedField& l,
                                    const ValuedField& m, const ValuedField& c) {
  RvIndependenceReport report;
  if (a.size() != e.size()) {
    report.precondition_failed = true;
    report.diagnostic = "a and e must be matched lists";
    return report;
  }

  GammaSubgroup gamma_c = value_group_shadow(c);
  GammaSubgroup gamma_l = value_group_shadow(l);

  // bullet 1: (v(a_i)) is a Q-basis for Gamma_L over Gamma_C
  std::vector<GammaElement> va;
  for (const auto& s : a) va.push_back(s.valuation_or_throw());
  auto picked = q_basis_mod(va, gamma_c);
  if (picked.size() != va.size()) {
    report.precondition_failed = true;
    report.diagnostic = "(v(a_i)) is not linearly independent modulo Gamma_C";
    return report;
  }
  std::vector<GammaElement> lgens = gamma_l.generators();
  if (rational_rank_mod(lgens, gamma_c) != static_cast<int>(va.size())) {
    report.precondition_failed = true;
    report.diagnostic = "(v(a_i)) does not span the Gamma_L shadow modulo Gamma_C";
    return report;
  }

  // bullet 2: (res(b_j)) is a transcendence basis of k_L over k_C
  ResSubfield k_c = k_shadow_subfield(c);
  std::vector<ResElement> res_b;
  for (const auto& s : b) res_b.push_back(s.residue());
  if (transcendence_degree(res_b, k_c) != static_cast<int>(res_b.size())) {
    report.precondition_failed = true;
    report.diagnostic = "(res(b_j)) is not algebraically independent over k_C";
    return report;
  }
  int k_l_trdeg = residue_shadow_trdeg_over(l, c, std::min(l.degree_bound, 3));
  if (k_l_trdeg != static_cast<int>(res_b.size())) {
    report.precondition_failed = true;
    report.diagnostic = "(res(b_j)) does not span: k_L shadow has transcendence degree " +
                        std::to_string(k_l_trdeg) + " over k_C, got " +
                        std::to_string(res_b.size()) + " elements";
    return report;
  }

  // bullet 3: v(a_i) = v(e_i)
  for (size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].valuation_or_throw() == e[i].valuation_or_throw())) {
      report.precondition_failed = true;
      report.diagnostic = "v(a_" + std::to_string(i + 1) + ") != v(e_" + std::to_string(i + 1) +
                          ")";
      return report;
    }
  }

  // the test itself: (res(a_i/e_i), res(b_j)) algebraically independent over
  // the variables of M
  std::vector<ResElement> elems;
  for (size_t i = 0; i < a.size(); ++i)
    elems.push_back(a[i].leading_coeff() / e[i].leading_coeff());
  elems.insert(elems.end(), res_b.begin(), res_b.end());
  ResSubfield k_m = k_shadow_subfield(m);
  if (!algebraically_independent_over(elems, k_m)) {
    report.independent = false;
    report.diagnostic = "(res(a_i/e_i), res(b_j)) is algebraically dependent over k_M";
    return report;
  }
  report.independent = true;
  report.diagnostic = "independent";
  return report;
}

}  // namespace valkit
