#include <doctest.h>

#include "valkit/expr.hpp"
#include "valkit/generate.hpp"
#include "valkit/rv.hpp"

using namespace valkit;

namespace {

Universe make_universe() {
  Universe u;
  u.axes = {"t1"};
  u.res_vars = {"x1", "x2"};
  return u;
}

RvElement rv(const Universe& u, long gamma, long coeff_num, long coeff_den = 1) {
  return RvElement(GammaElement({rat(gamma)}),
                   ResElement::constant(u.var_count(), rat(coeff_num, coeff_den)));
}

}  // namespace

TEST_CASE("rv_try_add") {
  Universe u = make_universe();
  RvSum s1 = rv_try_add(rv(u, 1, 2), rv(u, 1, 3));
  CHECK_FALSE(s1.collision);
  CHECK(s1.value == rv(u, 1, 5));

  RvSum s2 = rv_try_add(rv(u, 1, 2), rv(u, 1, -2));
  CHECK(s2.collision);

  RvSum s3 = rv_try_add(rv(u, 1, 2), rv(u, 2, 7));
  CHECK_FALSE(s3.collision);
  CHECK(s3.value == rv(u, 1, 2));
}

TEST_CASE("rv examples") {
  Universe u = make_universe();
  CHECK(rv_of(parse_series("2*t1 + t1^2", u)) == rv(u, 1, 2));

  RvElement half = rv_of(parse_series("x1*t1^(1/2)", u));
  CHECK(half.gamma == GammaElement({rat(1, 2)}));
  CHECK(half.coeff == ResElement::variable(2, 0));

  // rv determines v, and at valuation zero it determines the residue
  HahnSeries unit = parse_series("(2+x1) + 3*t1", u);
  RvElement r = rv_of(unit);
  CHECK(r.gamma == unit.valuation_or_throw());
  CHECK(r.gamma.is_zero());
  CHECK(r.coeff == unit.residue());
}

TEST_CASE("rv multiplicativity and sum compatibility on random pairs") {
  Universe u = make_universe();
  Rng rng(0xCAFE);
  SeriesGenOptions opts;
  for (int i = 0; i < 1000; ++i) {
    HahnSeries a = random_series(u, rng, opts);
    HahnSeries b = random_series(u, rng, opts);
    CHECK(rv_of(a) * rv_of(b) == rv_of(a * b));
    RvSum partial = rv_try_add(rv_of(a), rv_of(b));
    HahnSeries sum = a + b;
    if (!partial.collision) {
      REQUIRE(sum.has_terms());
      CHECK(partial.value == rv_of(sum));
    }
  }
}

TEST_CASE("power cosets in the built-in models") {
  Universe u = make_universe();
  PowerModel acf = PowerModel::acf();
  PowerModel rcf = PowerModel::rcf({rat(1), rat(1)});

  CHECK(power_coset_of(rv(u, 2, 5), 2, acf).in_pn);
  CHECK_FALSE(power_coset_of(rv(u, 3, 5), 2, acf).in_pn);
  CHECK_FALSE(power_coset_of(rv(u, 2, -3), 2, rcf).in_pn);
  CHECK_FALSE(power_coset_of(rv(u, 1, 3), 2, rcf).in_pn);
  CHECK(power_coset_of(rv(u, 2, 3), 2, rcf).in_pn);

  CHECK(power_coset_of(rv(u, 6, 1), 3, acf).in_pn);
  CHECK_FALSE(power_coset_of(rv(u, 4, 1), 3, acf).in_pn);

  CHECK_THROWS_AS(power_coset_of(rv(u, 1, 1), 3, rcf), unsupported_model);
  RvElement frac(GammaElement({rat(1, 2)}), ResElement::constant(2, rat(1)));
  CHECK_THROWS_AS(power_coset_of(frac, 2, acf), unsupported_model);

  // P_n multiplicativity within a model
  for (long n : {2L, 3L}) {
    for (long g1 = 0; g1 < 2 * n; ++g1) {
      for (long g2 = 0; g2 < 2 * n; ++g2) {
        RvElement x = rv(u, g1, 1), y = rv(u, g2, 1);
        if (power_coset_of(x, n, acf).in_pn && power_coset_of(y, n, acf).in_pn)
          CHECK(power_coset_of(x * y, n, acf).in_pn);
      }
    }
  }
}

TEST_CASE("lambda tables for built-in models") {
  Universe u = make_universe();
  PowerModel acf = PowerModel::acf();
  for (long n : {2L, 3L}) {
    LambdaCheckReport rep = verify_lambda_tables(n, acf, 1, 0, 2);
    CHECK(rep.ok);
    CHECK(rep.checked > 0);
  }
  PowerModel rcf = PowerModel::rcf({rat(1), rat(1)});
  LambdaCheckReport rep = verify_lambda_tables(2, rcf, 1, 0, 2);
  CHECK(rep.ok);
}

TEST_CASE("explicit coset tables") {
  Universe u = make_universe();
  // RV* / P_2 for a real-closed residue field with Z value group:
  // cosets 1, -1, t, -t with the Klein four-group structure
  PowerModel model;
  model.kind = PowerModelKind::explicit_table;
  PowerTable table;
  auto mk = [&](long g, long c) {
    return RvElement(GammaElement({rat(g)}), ResElement::constant(2, rat(c)));
  };
  table.cosets = {{"1", mk(0, 1), true},
                  {"-1", mk(0, -1), true},
                  {"t", mk(1, 1), false},
                  {"-t", mk(1, -1), false}};
  table.identity = 0;
  table.product = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  model.tables[2] = table;

  CosetId id = power_coset_of(mk(1, -1), 2, model);
  CHECK(id.id == "-t");
  CHECK_FALSE(id.in_pn);
  CHECK(power_coset_of(mk(0, 1), 2, model).in_pn);
  // unlisted elements are not classified
  CHECK_THROWS_AS(power_coset_of(mk(2, 1), 2, model), unsupported_model);

  LambdaCheckReport rep = verify_lambda_tables(2, model, 1, 0, 2);
  CHECK(rep.ok);

  // a broken product table fails the identity
  PowerModel broken = model;
  broken.tables[2].product[2][2] = 2;  // t * t = t is wrong
  LambdaCheckReport bad = verify_lambda_tables(2, broken, 1, 0, 2);
  CHECK_FALSE(bad.ok);
}

TEST_CASE("rv_independent") {
  Universe u2;
  u2.axes = {"t1", "t2"};
  u2.res_vars = {"x1", "x2"};
  FieldPtr c = make_field(u2, "C", nullptr, {}, 4);
  FieldPtr m = make_field(u2, "M", c, {parse_series("x2", u2), parse_series("t1", u2)}, 4);

  // res(a/e) = 1 is algebraic over k_M
  FieldPtr l1 = make_field(u2, "L1", c, {parse_series("t1", u2)}, 4);
  RvIndependenceReport r1 = rv_independent({parse_series("t1", u2)}, {},
                                           {parse_series("t1", u2)}, *l1, *m, *c);
  CHECK_FALSE(r1.independent);
  CHECK_FALSE(r1.precondition_failed);

  // res(a/e) = x1 stays independent over Q(x2)
  FieldPtr l2 = make_field(u2, "L2", c, {parse_series("x1*t1", u2)}, 4);
  RvIndependenceReport r2 = rv_independent({parse_series("x1*t1", u2)}, {},
                                           {parse_series("t1", u2)}, *l2, *m, *c);
  CHECK(r2.independent);

  // res(a/e) = x2 lands inside k_M
  RvIndependenceReport r3 = rv_independent({parse_series("t1", u2)}, {},
                                           {parse_series("x2^-1*t1", u2)}, *l1, *m, *c);
  CHECK_FALSE(r3.independent);
  CHECK_FALSE(r3.precondition_failed);

  // precondition diagnostics: mismatched valuations
  RvIndependenceReport r4 = rv_independent({parse_series("t1", u2)}, {},
                                           {parse_series("t1^2", u2)}, *l1, *m, *c);
  CHECK(r4.precondition_failed);

  // a two-pair instance over three transcendentals, plus permutation
  // invariance in the a/e pairs
  Universe u3;
  u3.axes = {"t1", "t2"};
  u3.res_vars = {"x1", "x2", "x3"};
  FieldPtr c3 = make_field(u3, "C", nullptr, {}, 4);
  FieldPtr l3 = make_field(u3, "L3", c3,
                           {parse_series("x1*t1", u3), parse_series("x3*t2", u3)}, 4);
  FieldPtr m3 = make_field(u3, "M3", c3,
                           {parse_series("x2", u3), parse_series("t1", u3),
                            parse_series("t2", u3)}, 4);
  std::vector<HahnSeries> a = {parse_series("x1*t1", u3), parse_series("x3*t2", u3)};
  std::vector<HahnSeries> e = {parse_series("t1", u3), parse_series("t2", u3)};
  RvIndependenceReport fwd = rv_independent(a, {}, e, *l3, *m3, *c3);
  CHECK(fwd.independent);
  RvIndependenceReport rev = rv_independent({a[1], a[0]}, {}, {e[1], e[0]}, *l3, *m3, *c3);
  CHECK(rev.independent == fwd.independent);
}
