#include <doctest.h>

#include "valkit/expr.hpp"
#include "valkit/generate.hpp"
#include "valkit/json_io.hpp"

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

}  // namespace

TEST_CASE("series multiplication") {
  Universe u = make_u1();
  CHECK(parse_series("(1+t)*(1-t)", u) == parse_series("1-t^2", u));
  CHECK(parse_series("(1+x1*t)*(1-x1*t)", u) == parse_series("1-x1^2*t^2", u));

  // precision propagation: (t + O(t^3)) * t^-1 = 1 + O(t^2)
  HahnSeries a = parse_series("t + O(t^3)", u);
  HahnSeries b = parse_series("t^-1", u);
  HahnSeries prod = a * b;
  CHECK_FALSE(prod.is_exact());
  CHECK(prod.precision().cutoff == GammaElement({rat(2)}));
  CHECK(prod.terms().size() == 1);
  CHECK(prod.terms().front().first == GammaElement({rat(0)}));

  // expanding representatives confirms the rule: (t + c t^3) * t^-1 agrees
  // below the cutoff for any tail representative
  HahnSeries rep = parse_series("(t + 5*t^3)*t^-1", u);
  CHECK(rep.truncated_to(GammaElement({rat(2)})) == prod);

  CHECK_THROWS_AS(parse_series("O(t)", u) * parse_series("O(t)", u), precision_exhausted);
}

TEST_CASE("series inversion") {
  Universe u = make_u1();
  Precision at3 = Precision::truncated(GammaElement({rat(3)}));

  HahnSeries geo = parse_series("1-t", u).inverse(at3);
  CHECK(geo == parse_series("1 + t + t^2 + O(t^3)", u));

  HahnSeries mono = parse_series("t^2", u).inverse(Precision::make_exact());
  CHECK(mono == parse_series("t^-2", u));
  CHECK(mono.is_exact());

  HahnSeries unit = parse_series("2 + x1*t", u).inverse(at3);
  CHECK(unit == parse_series("1/2 - (x1/4)*t + (x1^2/8)*t^2 + O(t^3)", u));
  // multiply-back oracle: a * inv(a) - 1 vanishes below the target
  HahnSeries back = parse_series("2 + x1*t", u) * unit - series_one(u);
  CHECK_FALSE(back.has_terms());
  CHECK_FALSE(back.is_exact());
  CHECK_FALSE(lex_less(back.precision().cutoff, GammaElement({rat(3)})));

  CHECK_THROWS_AS(series_zero(u).inverse(at3), precision_exhausted);
  CHECK_THROWS_AS(parse_series("O(t^2)", u).inverse(at3), precision_exhausted);

  // a unit whose tail sits on a less significant axis never reaches a
  // cutoff on the dominant one: infinitely many terms would be needed
  Universe u2 = make_universe();
  Precision dominant = Precision::truncated(GammaElement({rat(1), rat(0)}));
  CHECK_THROWS_AS(parse_series("1+t2", u2).inverse(dominant), precision_exhausted);
  // the same inverse at a reachable cutoff is fine
  Precision reachable = Precision::truncated(GammaElement({rat(0), rat(4)}));
  HahnSeries fine = parse_series("1+t2", u2).inverse(reachable);
  CHECK(fine.terms().size() == 4);
}

TEST_CASE("valuation and residue") {
  Universe u = make_universe();
  CHECK(parse_series("t1^2 + 3*t1^5", u).valuation_or_throw() == GammaElement({rat(2), rat(0)}));
  CHECK(parse_series("t1^(1/2) + t1", u).valuation_or_throw() ==
        GammaElement({rat(1, 2), rat(0)}));
  CHECK(parse_series("t1*t2^-1", u).valuation_or_throw() == GammaElement({rat(1), rat(-1)}));

  CHECK_FALSE(series_zero(u).valuation().has_value());  // infinite valuation sentinel
  CHECK_THROWS_AS(parse_series("O(t1)", u).valuation(), precision_exhausted);

  CHECK(parse_series("2 + t1", u).residue() == ResElement::constant(2, rat(2)));
  CHECK(parse_series("t1", u).residue() == ResElement(2));
  CHECK_THROWS_AS(parse_series("t1^-1", u).residue(), not_in_valuation_ring);

  // res((1+t)/(1-t)) = 1 via expansion to O(t)
  Universe u1 = make_u1();
  HahnSeries q = parse_series("1+t", u1).divided_by(parse_series("1-t", u1),
                                                    Precision::truncated(GammaElement({rat(1)})));
  CHECK(q.residue() == ResElement::constant(1, rat(1)));

  // a tail at or below the origin leaves the residue indeterminate
  CHECK_THROWS_AS(parse_series("O(t^0)", u1).residue(), precision_exhausted);
  CHECK(parse_series("O(t^2)", u1).residue() == ResElement(1));  // known zero below the cutoff
}

TEST_CASE("res element expression round trip") {
  Universe u = make_universe();
  for (const char* text : {"(x1+2*x2)/(1-x1)", "x1^2*x2 - 3/4", "1/(x1*x2)", "0"}) {
    ResElement parsed = parse_res_element(text, u);
    ResElement again = parse_res_element(parsed.to_string(u.res_vars), u);
    CHECK(again == parsed);
  }
  CHECK_THROWS_AS(parse_res_element("t1 + x1", u), structural_error);
}

TEST_CASE("valuation axioms on random series") {
  Universe u = make_universe();
  Rng rng(0x7AEED);
  SeriesGenOptions opts;
  for (int i = 0; i < 1500; ++i) {
    HahnSeries a = random_series(u, rng, opts);
    HahnSeries b = random_series(u, rng, opts);
    GammaElement va = a.valuation_or_throw(), vb = b.valuation_or_throw();
    CHECK((a * b).valuation_or_throw() == va + vb);
    HahnSeries sum = a + b;
    if (sum.has_terms()) {
      CHECK_FALSE(lex_less(sum.valuation_or_throw(), lex_min(va, vb)));
      if (!(va == vb)) CHECK(sum.valuation_or_throw() == lex_min(va, vb));
    } else {
      CHECK(va == vb);  // only equal valuations can cancel to zero
    }
  }
}

TEST_CASE("residue is a ring homomorphism on the valuation ring") {
  Universe u = make_universe();
  Rng rng(0xD1CE);
  SeriesGenOptions opts;
  opts.nonneg_exponents = true;
  for (int i = 0; i < 600; ++i) {
    HahnSeries a = random_series(u, rng, opts);
    HahnSeries b = random_series(u, rng, opts);
    CHECK((a + b).residue() == a.residue() + b.residue());
    CHECK((a * b).residue() == a.residue() * b.residue());
  }
}

TEST_CASE("inverse round trip on random units") {
  Universe u = make_u1();
  Rng rng(0x1411);
  SeriesGenOptions opts;
  opts.max_terms = 3;
  Precision target = Precision::truncated(GammaElement({rat(5)}));
  GammaElement zero = GammaElement::zero(1, 0);
  for (int i = 0; i < 200; ++i) {
    HahnSeries a = random_series(u, rng, opts);
    HahnSeries diff = a * a.inverse(target) - series_one(u);
    GammaElement va = a.valuation_or_throw();
    GammaElement floor = lex_less(va, zero) ? target.cutoff + va : target.cutoff;
    if (diff.has_terms()) CHECK_FALSE(lex_less(diff.valuation_or_throw(), floor));
  }
}

TEST_CASE("series json round trip") {
  Universe u = make_universe();
  HahnSeries s = parse_series("x1*t1^(1/2) + (1/3)*t2 + O(t1^4)", u);
  Json j = series_to_json(s, u);
  CHECK(series_from_json(j, u) == s);
}
