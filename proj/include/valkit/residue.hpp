#ifndef VALKIT_RESIDUE_HPP
#define VALKIT_RESIDUE_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "valkit/polynomial.hpp"

namespace valkit {

/// Exact rational function over the rationals in the universe's named
/// transcendentals. Canonical: gcd(num, den) = 1 and den has leading
/// coefficient 1, so equality is syntactic.
class ResElement {
 public:
  ResElement() : num_(Polynomial(0)), den_(Polynomial::constant(0, 1)) {}
  explicit ResElement(int nvars)
      : num_(Polynomial(nvars)), den_(Polynomial::constant(nvars, 1)) {}
  ResElement(Polynomial num, Polynomial den);

  static ResElement constant(int nvars, const Rat& value);
  static ResElement variable(int nvars, int index);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  int nvars() const { return num_.nvars(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
  // The rational value; only valid when is_rational().
  Rat rational_value() const { return num_.constant_value() / den_.constant_value(); }

  // True when only variables from `allowed` occur.
  bool uses_only(const std::set<int>& allowed) const;
  std::set<int> used_vars() const;

  ResElement operator+(const ResElement& o) const;
  ResElement operator-(const ResElement& o) const;
  ResElement operator*(const ResElement& o) const;
  ResElement operator/(const ResElement& o) const;
  ResElement operator-() const;
  bool operator==(const ResElement& o) const { return num_ == o.num_ && den_ == o.den_; }

  // Partial derivative (quotient rule), canonicalized.
  ResElement derivative(int var) const;
  // Exact evaluation; nullopt when the denominator vanishes at the point.
  std::optional<Rat> eval(const std::vector<Rat>& point) const;

  std::string to_string(const std::vector<std::string>& var_names) const;

 private:
  Polynomial num_, den_;
  void canonicalize();
};

enum class ArithOp { add, sub, mul, div };

// Four-function field arithmetic; division by zero throws arithmetic_error.
ResElement res_arith(const ResElement& a, const ResElement& b, ArithOp op);

/// Variable-generated subfield of the residue field.
struct ResSubfield {
  std::set<int> variables;

  bool contains(const ResElement& e) const { return e.uses_only(variables); }
};

struct LinearIndependenceResult {
  bool independent = false;
  // On dependence: coefficients in the subfield with sum(c_i * elem_i) = 0,
  // not all zero.
  std::vector<ResElement> witness;
};

// Linear independence of `elems` over Q(x_S), decided by exact rank of the
// coefficient matrix after expanding in the non-S variables.
LinearIndependenceResult linearly_independent_over(const std::vector<ResElement>& elems,
                                                   const ResSubfield& subfield);

// Characteristic-0 Jacobian criterion for algebraic independence over Q(x_S).
bool algebraically_independent_over(const std::vector<ResElement>& elems,
                                    const ResSubfield& subfield);

// Jacobian rank of (subfield variables, elems) minus |subfield|.
int transcendence_degree(const std::vector<ResElement>& elems, const ResSubfield& subfield);

// Coefficients alpha in Q(x_S) with target = sum alpha_i * gens_i, or
// nullopt when target is not in the span over the subfield.
std::optional<std::vector<ResElement>> solve_linear_combination(
    const ResElement& target, const std::vector<ResElement>& gens, const ResSubfield& subfield);

// Exact rank of a matrix of rational functions by Gaussian elimination.
int res_matrix_rank(std::vector<std::vector<ResElement>> rows);

// Kernel basis (row vectors v with v * rows = 0) over the function field.
std::vector<std::vector<ResElement>> res_matrix_left_kernel(
    const std::vector<std::vector<ResElement>>& rows);

}  // namespace valkit

#endif
