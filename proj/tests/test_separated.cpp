#include <doctest.h>

#include "oracles.hpp"
#include "valkit/expr.hpp"
#include "valkit/generate.hpp"
#include "valkit/separated.hpp"

using namespace valkit;

namespace {

Universe make_universe() {
  Universe u;
  u.axes = {"t1", "t2"};
  u.res_vars = {"x1", "x2"};
  return u;
}

Universe make_u1() {
  Universe u;
  u.axes = {"t"};
  u.res_vars = {"x1"};
  return u;
}

// determinant over the series field by cofactor expansion; exact for the
// finite matrices produced by the constructions
HahnSeries series_det(const std::vector<std::vector<HahnSeries>>& m) {
  size_t n = m.size();
  if (n == 1) return m[0][0];
  HahnSeries det = HahnSeries::zero(m[0][0].main_rank(), m[0][0].inf_rank(), m[0][0].nvars());
  for (size_t col = 0; col < n; ++col) {
    std::vector<std::vector<HahnSeries>> minor;
    for (size_t r = 1; r < n; ++r) {
      std::vector<HahnSeries> row;
      for (size_t c = 0; c < n; ++c)
        if (c != col) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    HahnSeries term = m[0][col] * series_det(minor);
    det = (col % 2 == 0) ? det + term : det - term;
  }
  return det;
}

void check_change_matrix(const Universe& u, const std::vector<HahnSeries>& inputs,
                         const SeparationResult& result) {
  REQUIRE(result.status == ConstructionStatus::ok);
  REQUIRE(result.basis.size() == inputs.size());
  // span preservation in both directions
  for (size_t i = 0; i < result.basis.size(); ++i) {
    HahnSeries combo = series_zero(u);
    for (size_t j = 0; j < inputs.size(); ++j) combo = combo + result.change[i][j] * inputs[j];
    CHECK(combo == result.basis[i]);
  }
  for (size_t j = 0; j < inputs.size(); ++j) {
    HahnSeries combo = series_zero(u);
    for (size_t i = 0; i < result.basis.size(); ++i)
      combo = combo + result.inverse_change[j][i] * result.basis[i];
    if (inputs[j].is_exact() && combo.is_exact()) {
      CHECK(combo == inputs[j]);
    } else {
      CHECK_FALSE((combo - inputs[j]).has_terms());
    }
  }
  // invertibility: nonzero determinant
  CHECK(series_det(result.change).has_terms());
}

}  // namespace

TEST_CASE("check_separated examples") {
  Universe u = make_u1();
  FieldPtr triv = make_field(u, "Q", nullptr, {}, 4);
  FieldPtr ct = make_field(u, "C", nullptr, {parse_series("t", u)}, 4);

  // {1, t} over trivially valued Q: distinct valuations
  BasisReport r1 = check_separated(u, {parse_series("1", u), parse_series("t", u)}, *triv);
  CHECK(r1.verdict == BasisVerdict::separated_good);
  CHECK(r1.coset_partition.size() == 2);

  // {1+t, 1-t} over trivially valued Q: not separated, witness found by the
  // brute-force oracle as well
  std::vector<HahnSeries> pair = {parse_series("1+t", u), parse_series("1-t", u)};
  BasisReport r2 = check_separated(u, pair, *triv);
  REQUIRE(r2.verdict == BasisVerdict::not_separated);
  REQUIRE(r2.witness.has_value());
  REQUIRE(r2.witness->achieved.has_value());
  CHECK(lex_less(r2.witness->bound, *r2.witness->achieved));
  CHECK(r2.witness->bound == GammaElement({rat(0)}));
  CHECK(*r2.witness->achieved == GammaElement({rat(1)}));
  CHECK(r2.witness->coefficients[0] == parse_series("1", u));
  CHECK(r2.witness->coefficients[1] == parse_series("-1", u));
  // the witness re-evaluates to a strict violation
  HahnSeries combo = series_zero(u);
  for (size_t i = 0; i < pair.size(); ++i) combo = combo + r2.witness->coefficients[i] * pair[i];
  CHECK(lex_less(r2.witness->bound, combo.valuation_or_throw()));
  // and the independent search over small rational coefficients agrees
  CHECK(oracle::brute_force_violation(pair).has_value());

  // {1, sqrt t} over Q((t)): classes {0} and {1/2} mod Z
  BasisReport r3 = check_separated(u, {parse_series("1", u), parse_series("t^(1/2)", u)}, *ct);
  CHECK(r3.verdict == BasisVerdict::separated_good);
  CHECK(r3.coset_partition.size() == 2);

  // degenerate inputs: verdicts, not exceptions
  CHECK(check_separated(u, {series_zero(u), parse_series("t", u)}, *triv).verdict ==
        BasisVerdict::not_independent);
  CHECK(check_separated(u, {parse_series("t", u), parse_series("t", u)}, *triv).verdict ==
        BasisVerdict::not_independent);

  // a certified dependence is reported as not-independent
  CHECK(check_separated(u, {parse_series("1+t", u), parse_series("2+2*t", u)}, *triv).verdict ==
        BasisVerdict::not_independent);
}

TEST_CASE("check_separated goodness distinction") {
  Universe u = make_u1();
  FieldPtr ct = make_field(u, "C", nullptr, {parse_series("t", u)}, 4);
  // {t^(1/2), t^(3/2)}: same class mod Z, distinct valuations, residues
  // independent after normalization: separated but not good
  BasisReport r = check_separated(
      u, {parse_series("t^(1/2)", u), parse_series("x1*t^(3/2)", u)}, *ct);
  CHECK(r.verdict == BasisVerdict::separated_not_good);
  CHECK(r.coset_partition.size() == 1);
}

TEST_CASE("make_separated_trivial") {
  Universe u = make_u1();
  FieldPtr triv = make_field(u, "Q", nullptr, {}, 4);

  // single vector: identity change
  std::vector<HahnSeries> single = {parse_series("t", u)};
  SeparationResult r0 = make_separated_trivial(u, single, *triv);
  REQUIRE(r0.status == ConstructionStatus::ok);
  CHECK(r0.basis == single);
  CHECK(r0.change[0][0] == series_one(u));

  // the proof's subtraction step on {1+t, 1-t}
  std::vector<HahnSeries> pair = {parse_series("1+t", u), parse_series("1-t", u)};
  SeparationResult r1 = make_separated_trivial(u, pair, *triv);
  REQUIRE(r1.status == ConstructionStatus::ok);
  CHECK(r1.basis[0] == pair[0]);
  CHECK(r1.basis[1] == parse_series("-2*t", u));
  CHECK(check_separated(u, r1.basis, *triv).verdict == BasisVerdict::separated_good);
  check_change_matrix(u, pair, r1);

  // two elimination rounds
  std::vector<HahnSeries> triple = {parse_series("1", u), parse_series("1+t", u),
                                    parse_series("1+t+t^2", u)};
  SeparationResult r2 = make_separated_trivial(u, triple, *triv);
  REQUIRE(r2.status == ConstructionStatus::ok);
  CHECK(r2.basis[0] == parse_series("1", u));
  CHECK(r2.basis[1] == parse_series("t", u));
  CHECK(r2.basis[2] == parse_series("t^2", u));
  CHECK(check_separated(u, r2.basis, *triv).verdict == BasisVerdict::separated_good);
  check_change_matrix(u, triple, r2);

  // dependent input reports not-independent
  std::vector<HahnSeries> dep = {parse_series("1+t", u), parse_series("2+2*t", u)};
  CHECK(make_separated_trivial(u, dep, *triv).status == ConstructionStatus::not_independent);

  FieldPtr ct = make_field(u, "C", nullptr, {parse_series("t", u)}, 4);
  CHECK_THROWS_AS(make_separated_trivial(u, pair, *ct), hypothesis_violation);
}

TEST_CASE("trivially valued base with residue transcendentals") {
  Universe u = make_u1();
  // C = Q(x1), trivially valued
  FieldPtr c = make_field(u, "C", nullptr, {parse_series("x1", u)}, 4);
  REQUIRE(is_trivially_valued(*c));

  // residues (1, x1) are k_C-dependent: x1 * 1 - 1 * x1 = 0
  std::vector<HahnSeries> pair = {parse_series("1+t", u), parse_series("x1+t", u)};
  BasisReport rep = check_separated(u, pair, *c);
  REQUIRE(rep.verdict == BasisVerdict::not_separated);
  REQUIRE(rep.witness.has_value());
  HahnSeries combo = series_zero(u);
  for (size_t i = 0; i < pair.size(); ++i) combo = combo + rep.witness->coefficients[i] * pair[i];
  REQUIRE(combo.has_terms());
  CHECK(lex_less(rep.witness->bound, combo.valuation_or_throw()));

  // the construction cancels the leading data over k_C = Q(x1)
  SeparationResult made = make_separated_trivial(u, pair, *c);
  REQUIRE(made.status == ConstructionStatus::ok);
  CHECK(check_separated(u, made.basis, *c).verdict == BasisVerdict::separated_good);
  check_change_matrix(u, pair, made);
  // second basis vector starts at valuation 1
  CHECK(made.basis[1].valuation_or_throw() == GammaElement({rat(1)}));

  // over Q the same family is separated: x1 is no longer a base scalar
  FieldPtr q = make_field(u, "Q", nullptr, {}, 4);
  CHECK(check_separated(u, pair, *q).verdict == BasisVerdict::separated_good);

  // a cascade needing rational-function coefficients: the third vector
  // cancels against both earlier ones before a fresh valuation appears
  std::vector<HahnSeries> chain = {parse_series("1+t", u), parse_series("x1+t", u),
                                   parse_series("(1+x1)+t^2", u)};
  SeparationResult deep = make_separated_trivial(u, chain, *c);
  REQUIRE(deep.status == ConstructionStatus::ok);
  CHECK(deep.basis[2] == parse_series("t^2", u));
  CHECK(check_separated(u, deep.basis, *c).verdict == BasisVerdict::separated_good);
  check_change_matrix(u, chain, deep);
}

TEST_CASE("make_separated over a nontrivial base") {
  Universe u = make_universe();
  FieldPtr c1 = make_field(u, "C", nullptr, {parse_series("t1", u)}, 4);

  // one cancellation step: {1, 1+t2} -> {1, t2}
  std::vector<HahnSeries> vs = {parse_series("1", u), parse_series("1+t2", u)};
  SeparationResult r = make_separated(u, vs, *c1, Precision::make_exact());
  REQUIRE(r.status == ConstructionStatus::ok);
  CHECK(r.basis[0] == parse_series("1", u));
  CHECK(r.basis[1] == parse_series("t2", u));
  CHECK(check_separated(u, r.basis, *c1).verdict == BasisVerdict::separated_good);
  check_change_matrix(u, vs, r);

  // already separated input returns unchanged with identity change
  std::vector<HahnSeries> sep = {parse_series("1", u), parse_series("t2", u)};
  SeparationResult r2 = make_separated(u, sep, *c1, Precision::make_exact());
  REQUIRE(r2.status == ConstructionStatus::ok);
  CHECK(r2.basis == sep);
  CHECK(r2.change[0][0] == series_one(u));
  CHECK(r2.change[1][1] == series_one(u));
  CHECK_FALSE(r2.change[0][1].has_terms());
  CHECK_FALSE(r2.change[1][0].has_terms());

  // an immediate-extension shadow: {1, 1 + O(t^P)} exhausts precision
  std::vector<HahnSeries> imm = {parse_series("1", u), parse_series("1 + O(t1^6)", u)};
  SeparationResult r3 = make_separated(u, imm, *c1, Precision::make_exact());
  CHECK(r3.status == ConstructionStatus::precision_exhausted);

  // good-ification: same class members get equal valuations
  std::vector<HahnSeries> mixed = {parse_series("t2", u), parse_series("t1*t2 + t1*t2^2", u)};
  SeparationResult r4 = make_separated(u, mixed, *c1, Precision::make_exact());
  REQUIRE(r4.status == ConstructionStatus::ok);
  BasisReport rep = check_separated(u, r4.basis, *c1);
  CHECK(rep.verdict == BasisVerdict::separated_good);
  check_change_matrix(u, mixed, r4);
}

TEST_CASE("residue shadow ignores variables locked behind nonzero valuations") {
  Universe u = make_universe();
  // C = Q(x1*t1): x1 appears syntactically but k_C = Q, so x1 is not a base
  // scalar and {1+t2, x1+t2} stays separated
  FieldPtr c = make_field(u, "C", nullptr, {parse_series("x1*t1", u)}, 4);
  CHECK(k_shadow_vars(*c).empty());
  CHECK(res_var_set(*c) == std::set<int>{0});
  std::vector<HahnSeries> pair = {parse_series("1+t2", u), parse_series("x1+t2", u)};
  CHECK(check_separated(u, pair, *c).verdict == BasisVerdict::separated_good);

  // a unit perturbation hides x1 behind a cancellation; the residue shadow
  // still reaches it through differences
  FieldPtr unit = make_field(
      u, "Cu", nullptr, {parse_series("1+x1*t1", u), parse_series("t1", u)}, 4);
  CHECK(k_shadow_vars(*unit).count(0) == 1);
}

TEST_CASE("good-ification through a multi-term base generator") {
  Universe u = make_universe();
  // the base generator t1(1+t1) only has a truncated inverse
  FieldPtr c = make_field(u, "C", nullptr, {parse_series("t1+t1^2", u)}, 4);
  std::vector<HahnSeries> vs = {parse_series("t2", u),
                                parse_series("(t1+t1^2)*t2 + x1*t1*t2", u)};
  SeparationResult r = make_separated(u, vs, *c, Precision::make_exact());
  REQUIRE(r.status == ConstructionStatus::ok);
  BasisReport rep = check_separated(u, r.basis, *c);
  CHECK(rep.verdict == BasisVerdict::separated_good);
  // both members were brought to the same exact valuation
  CHECK(r.basis[0].valuation_or_throw() == r.basis[1].valuation_or_throw());
  check_change_matrix(u, vs, r);
}

TEST_CASE("separated verdicts survive coefficient sampling") {
  // whenever the criterion says separated, seeded sampling of base
  // coefficients must find no violation
  Universe u = make_u1();
  FieldPtr triv = make_field(u, "Q", nullptr, {}, 4);
  FieldPtr ct = make_field(u, "C", nullptr, {parse_series("t", u)}, 3);
  Rng rng(0xFACE);
  SeriesGenOptions opts;
  opts.max_terms = 3;
  opts.exp_bound = 3;
  opts.exp_den_bound = 1;
  opts.allow_vars = false;

  for (int iter = 0; iter < 40; ++iter) {
    std::vector<HahnSeries> family;
    int k = 2 + static_cast<int>(rng.below(2));
    for (int i = 0; i < k; ++i) family.push_back(random_series(u, rng, opts));
    for (FieldPtr base : {triv, ct}) {
      BasisReport rep = check_separated(u, family, *base);
      if (rep.verdict == BasisVerdict::separated_good ||
          rep.verdict == BasisVerdict::separated_not_good) {
        auto coeffs = enumerate_elements(*base, base->degree_bound, rng.next(), 40);
        Rng pick = rng.fork(iter);
        for (int trial = 0; trial < 60; ++trial) {
          std::optional<GammaElement> bound;
          HahnSeries combo = series_zero(u);
          for (const auto& member : family) {
            const HahnSeries& c = coeffs[pick.below(coeffs.size())];
            if (!c.has_terms()) continue;
            combo = combo + c * member;
            GammaElement v = c.valuation_or_throw() + member.valuation_or_throw();
            if (!bound || lex_less(v, *bound)) bound = v;
          }
          if (!bound) continue;
          REQUIRE(combo.has_terms());
          CHECK(combo.valuation_or_throw() == *bound);
        }
      } else if (rep.verdict == BasisVerdict::not_separated) {
        REQUIRE(rep.witness.has_value());
        HahnSeries combo = series_zero(u);
        for (size_t i = 0; i < family.size(); ++i)
          combo = combo + rep.witness->coefficients[i] * family[i];
        if (combo.has_terms())
          CHECK(lex_less(rep.witness->bound, combo.valuation_or_throw()));
      }
    }
  }
}

TEST_CASE("check_lift") {
  Universe u = make_universe();
  FieldPtr c = make_field(u, "C", nullptr, {}, 4);
  FieldPtr m = make_field(u, "M", c, {parse_series("x2", u), parse_series("t2", u)}, 4);

  // basis {1, x1, t1} over trivial Q lifts to separated-good over M
  std::vector<HahnSeries> basis = {parse_series("1", u), parse_series("x1", u),
                                   parse_series("t1", u)};
  BasisReport lifted = check_lift(u, basis, c, m);
  CHECK(lifted.verdict == BasisVerdict::separated_good);

  // sampling with random M coefficients confirms it
  Rng rng(0x11F7);
  auto coeffs = enumerate_elements(*m, 3, 7, 60);
  for (int trial = 0; trial < 1000; ++trial) {
    std::optional<GammaElement> bound;
    HahnSeries combo = series_zero(u);
    for (const auto& member : basis) {
      const HahnSeries& cf = coeffs[rng.below(coeffs.size())];
      if (!cf.has_terms()) continue;
      combo = combo + cf * member;
      GammaElement v = cf.valuation_or_throw() + member.valuation_or_throw();
      if (!bound || lex_less(v, *bound)) bound = v;
    }
    if (!bound) continue;
    REQUIRE(combo.has_terms());
    CHECK(combo.valuation_or_throw() == *bound);
  }

  // sharing L's transcendental violates the hypotheses before any check
  FieldPtr m_bad = make_field(u, "Mbad", c, {parse_series("x1", u)}, 4);
  CHECK_THROWS_AS(check_lift(u, basis, c, m_bad), hypothesis_violation);

  // C = M: trivially separated-good with the same coefficients
  BasisReport same = check_lift(u, basis, c, c);
  CHECK(same.verdict == BasisVerdict::separated_good);
}

TEST_CASE("compositum_check") {
  Universe u = make_universe();
  FieldPtr c = make_field(u, "C", nullptr, {}, 4);

  // l = (1, t1), m = (t2, 1): v(t2 + t1) = (0,1)
  std::vector<HahnSeries> ell = {parse_series("1", u), parse_series("t1", u)};
  std::vector<HahnSeries> m = {parse_series("t2", u), parse_series("1", u)};
  CompositumReport rep = compositum_check(u, ell, m, *c);
  CHECK(rep.ok);
  REQUIRE(rep.valuation.has_value());
  CHECK(*rep.valuation == GammaElement({rat(0), rat(1)}));

  // all m_i zero except one: exact equality
  CompositumReport rep2 =
      compositum_check(u, ell, {series_zero(u), parse_series("x2*t2", u)}, *c);
  CHECK(rep2.ok);
  CHECK(*rep2.valuation == GammaElement({rat(1), rat(1)}));

  // residue decomposition at valuation zero
  std::vector<HahnSeries> ell3 = {parse_series("1", u), parse_series("x1", u)};
  std::vector<HahnSeries> m3 = {parse_series("1", u), parse_series("x2", u)};
  CompositumReport rep3 = compositum_check(u, ell3, m3, *c);
  CHECK(rep3.ok);
  ResElement expected = ResElement::constant(2, rat(1)) +
                        ResElement::variable(2, 0) * ResElement::variable(2, 1);
  CHECK(parse_series("1 + x1*x2", u).residue() == expected);

  // a cancellation pushing the combination above every known term is a
  // confirmed violation, not an indeterminate result
  CompositumReport rep4 = compositum_check(
      u, {parse_series("1", u), parse_series("1", u)},
      {parse_series("t1", u), parse_series("-t1 + O(t1^2)", u)}, *c);
  CHECK_FALSE(rep4.ok);
  REQUIRE_FALSE(rep4.counterexamples.empty());
  CHECK(rep4.counterexamples.front().what == "valuation");

  // a truncated-zero coefficient cannot be checked at all
  CHECK_THROWS_AS(compositum_check(u, {parse_series("1", u)}, {parse_series("O(t1)", u)}, *c),
                  precision_exhausted);
}

TEST_CASE("rv_of_combination") {
  Universe u = make_universe();

  // v-distinct terms: rv(t2 + t1) = rv(t2)
  RvElement r1 = rv_of_combination(u, {parse_series("1", u), parse_series("t1", u)},
                                   {parse_series("t2", u), parse_series("1", u)});
  CHECK(r1 == rv_of(parse_series("t2", u)));

  // rv(x1 t1 + x2 t1) = (v(t1), x1 + x2)
  RvElement r2 = rv_of_combination(u, {parse_series("x1*t1", u), parse_series("x2*t1", u)},
                                   {parse_series("1", u), parse_series("1", u)});
  CHECK(r2.gamma == GammaElement({rat(1), rat(0)}));
  CHECK(r2.coeff == ResElement::variable(2, 0) + ResElement::variable(2, 1));

  // collision contradicts separatedness
  CHECK_THROWS_AS(rv_of_combination(u, {parse_series("t1", u), parse_series("-t1", u)},
                                    {parse_series("1", u), parse_series("1", u)}),
                  internal_inconsistency);

  // random separated combinations agree with the direct evaluation route
  FieldPtr c = make_field(u, "C", nullptr, {}, 4);
  FieldPtr m_field = make_field(u, "M", c, {parse_series("x2", u), parse_series("t2", u)}, 4);
  std::vector<HahnSeries> basis = {parse_series("1", u), parse_series("x1", u),
                                   parse_series("t1", u)};
  Rng rng(0xAB);
  auto coeffs = enumerate_elements(*m_field, 3, 11, 30);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<HahnSeries> m;
    bool live = false;
    for (size_t i = 0; i < basis.size(); ++i) {
      const HahnSeries& cf = coeffs[rng.below(coeffs.size())];
      m.push_back(cf);
      if (cf.has_terms()) live = true;
    }
    if (!live) continue;
    CHECK_NOTHROW(rv_of_combination(u, basis, m));
  }
}
