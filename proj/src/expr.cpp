#include "valkit/expr.hpp"

#include <cctype>

#include "valkit/errors.hpp"

namespace valkit {

namespace {

struct Parser {
  const std::string& text;
  const Universe& u;
  size_t pos = 0;

  Parser(const std::string& t, const Universe& universe) : text(t), u(universe) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw structural_error("parse error at offset " + std::to_string(pos) + ": " + message +
                           " in \"" + text + "\"");
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool at_ident() {
    skip_ws();
    return pos < text.size() &&
           (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_');
  }

  bool at_digit() {
    skip_ws();
    return pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]));
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_'))
      ++pos;
    if (start == pos) fail("expected identifier");
    return text.substr(start, pos - start);
  }

  Int integer() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) fail("expected integer");
    return Int(text.substr(start, pos - start));
  }

  // [sign] int [/ int]
  Rat rational() {
    skip_ws();
    bool neg = accept('-');
    if (!neg) accept('+');
    Int num = integer();
    Int den = 1;
    if (accept('/')) den = integer();
    if (den == 0) fail("zero denominator in exponent");
    Rat q(num, den);
    q.canonicalize();
    return neg ? Rat(-q) : q;
  }

  // bare exponents are integers; rational exponents need parentheses, as in
  // t^(1/2), so that x^2/8 keeps its conventional reading
  Rat exponent() {
    if (accept('(')) {
      Rat q = rational();
      expect(')');
      return q;
    }
    skip_ws();
    bool neg = accept('-');
    Int n = integer();
    Rat q(n, Int(1));
    q.canonicalize();
    return neg ? Rat(-q) : q;
  }

  HahnSeries series_pow(const HahnSeries& base, const Rat& e) {
    if (e.get_den() == 1) {
      long n = e.get_num().get_si();
      if (n >= 0) return base.pow(static_cast<unsigned>(n));
      HahnSeries inv = base.terms().size() == 1 && base.is_exact()
                           ? base.inverse(Precision::make_exact())
                           : base.inverse(Precision::truncated(default_cutoff(u)));
      return inv.pow(static_cast<unsigned>(-n));
    }
    // fractional exponent: only a pure axis monomial (coefficient 1) scales
    if (base.terms().size() != 1 || !base.is_exact()) fail("fractional power of a non-monomial");
    const auto& [g, c] = base.terms().front();
    if (!(c == ResElement::constant(c.nvars(), 1)))
      fail("fractional power requires coefficient 1");
    return HahnSeries::monomial(g.scaled(e), c, base.inf_rank());
  }

  HahnSeries primary() {
    skip_ws();
    if (accept('(')) {
      HahnSeries s = expr();
      expect(')');
      return s;
    }
    if (at_digit()) {
      Int n = integer();
      Rat q(n, Int(1));
      q.canonicalize();
      return series_rat(u, q);
    }
    if (at_ident()) {
      std::string name = ident();
      if (name == "O") {
        expect('(');
        HahnSeries inner = expr();
        expect(')');
        if (inner.terms().size() != 1 || !inner.is_exact())
          fail("O(...) takes a single exact monomial");
        return HahnSeries::from_terms(inner.main_rank(), inner.inf_rank(), inner.nvars(), {},
                                      Precision::truncated(inner.terms().front().first));
      }
      int axis = u.axis_index(name);
      if (axis >= 0) return series_axis_power(u, axis, Rat(1));
      int var = u.var_index(name);
      if (var >= 0) return series_res_var(u, var);
      fail("unknown name '" + name + "'");
    }
    fail("expected a value");
  }

  HahnSeries factor() {
    skip_ws();
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    HahnSeries base = primary();
    if (accept('^')) return series_pow(base, exponent());
    return base;
  }

  HahnSeries term() {
    HahnSeries value = factor();
    while (true) {
      if (accept('*')) {
        value = value * factor();
      } else if (accept('/')) {
        HahnSeries d = factor();
        if (d.terms().size() == 1 && d.is_exact())
          value = value * d.inverse(Precision::make_exact());
        else
          value = value.divided_by(d, Precision::truncated(default_cutoff(u)));
      } else {
        return value;
      }
    }
  }

  HahnSeries expr() {
    HahnSeries value = term();
    while (true) {
      if (accept('+'))
        value = value + term();
      else if (accept('-'))
        value = value - term();
      else
        return value;
    }
  }

  HahnSeries parse() {
    HahnSeries s = expr();
    skip_ws();
    if (pos != text.size()) fail("trailing input");
    return s;
  }
};

}  // namespace

HahnSeries parse_series(const std::string& text, const Universe& u) {
  return Parser(text, u).parse();
}

ResElement parse_res_element(const std::string& text, const Universe& u) {
  HahnSeries s = parse_series(text, u);
  if (s.is_exact_zero()) return ResElement(u.var_count());
  GammaElement origin = GammaElement::zero(u.main_rank(), u.inf_rank);
  if (!s.is_exact() || s.terms().size() != 1 || !(s.terms().front().first == origin))
    throw structural_error("not a residue-field expression: " + text);
  return s.terms().front().second;
}

}  // namespace valkit
