#ifndef VALKIT_POLYNOMIAL_HPP
#define VALKIT_POLYNOMIAL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valkit/numbers.hpp"

namespace valkit {

/// Exponent vector; length is the universe's declared variable count.
using Monomial = std::vector<unsigned>;

// Graded lexicographic order (total degree, then lex on exponents).
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial over the exact rationals. All polynomials
/// in one universe share the same variable count, including the constant 0.
class Polynomial {
 public:
  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rat& value);
  static Polynomial variable(int nvars, int index);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // The constant value; only valid when is_constant().
  Rat constant_value() const;

  long total_degree() const;
  long degree_in(int var) const;
  bool uses_var(int var) const;

  const std::map<Monomial, Rat, GrlexLess>& terms() const { return terms_; }
  void set_coeff(const Monomial& m, const Rat& c);
  Rat coeff(const Monomial& m) const;

  // Leading data with respect to grlex.
  const Monomial& leading_monomial() const;
  const Rat& leading_coeff() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial scaled(const Rat& c) const;
  Polynomial pow(unsigned e) const;

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Polynomial derivative(int var) const;
  Rat eval(const std::vector<Rat>& point) const;
  // Substitutes a polynomial for each variable.
  Polynomial eval_poly(const std::vector<Polynomial>& images) const;

  // Exact quotient, or nullopt when o does not divide *this.
  std::optional<Polynomial> divide_exact(const Polynomial& o) const;

  // Scales so coefficients are coprime integers with positive leading sign;
  // zero maps to zero.
  Polynomial primitive_normalized() const;

  std::string to_string(const std::vector<std::string>& var_names) const;

 private:
  int nvars_;
  std::map<Monomial, Rat, GrlexLess> terms_;
};

// Nonnegative gcd of the two polynomials, primitive with positive leading
// coefficient; gcd(0, f) = normalized f.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

}  // namespace valkit

#endif
