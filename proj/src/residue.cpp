#include "valkit/residue.hpp"

#include <algorithm>

#include "valkit/errors.hpp"

namespace valkit {

ResElement::ResElement(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (num_.nvars() != den_.nvars()) throw structural_error("num/den variable-count mismatch");
  if (den_.is_zero()) throw arithmetic_error("zero denominator");
  canonicalize();
}

ResElement ResElement::constant(int nvars, const Rat& value) {
  return ResElement(Polynomial::constant(nvars, value), Polynomial::constant(nvars, 1));
}

ResElement ResElement::variable(int nvars, int index) {
  return ResElement(Polynomial::variable(nvars, index), Polynomial::constant(nvars, 1));
}

void ResElement::canonicalize() {
  if (num_.is_zero()) {
    den_ = Polynomial::constant(num_.nvars(), 1);
    return;
  }
  Polynomial g = poly_gcd(num_, den_);
  if (!g.is_constant() || g.constant_value() != 1) {
    auto n = num_.divide_exact(g);
    auto d = den_.divide_exact(g);
    if (!n || !d) throw internal_inconsistency("gcd does not divide operands");
    num_ = *n;
    den_ = *d;
  }
  Rat lead = den_.leading_coeff();
  if (lead != 1) {
    num_ = num_.scaled(1 / lead);
    den_ = den_.scaled(1 / lead);
  }
}

bool ResElement::uses_only(const std::set<int>& allowed) const {
  for (int v = 0; v < nvars(); ++v) {
    if (allowed.count(v)) continue;
    if (num_.uses_var(v) || den_.uses_var(v)) return false;
  }
  return true;
}

std::set<int> ResElement::used_vars() const {
  std::set<int> out;
  for (int v = 0; v < nvars(); ++v)
    if (num_.uses_var(v) || den_.uses_var(v)) out.insert(v);
  return out;
}

ResElement ResElement::operator+(const ResElement& o) const {
  return ResElement(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

ResElement ResElement::operator-(const ResElement& o) const {
  return ResElement(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

ResElement ResElement::operator*(const ResElement& o) const {
  return ResElement(num_ * o.num_, den_ * o.den_);
}

ResElement ResElement::operator/(const ResElement& o) const {
  if (o.is_zero()) throw arithmetic_error("residue-field division by zero");
  return ResElement(num_ * o.den_, den_ * o.num_);
}

ResElement ResElement::operator-() const { return ResElement(-num_, den_); }

ResElement ResElement::derivative(int var) const {
  Polynomial dn = num_.derivative(var);
  Polynomial dd = den_.derivative(var);
  return ResElement(dn * den_ - num_ * dd, den_ * den_);
}

std::optional<Rat> ResElement::eval(const std::vector<Rat>& point) const {
  Rat d = den_.eval(point);
  if (d == 0) return std::nullopt;
  return num_.eval(point) / d;
}

std::string ResElement::to_string(const std::vector<std::string>& var_names) const {
  if (den_.is_constant() && den_.constant_value() == 1) return num_.to_string(var_names);
  std::string n = num_.to_string(var_names);
  std::string d = den_.to_string(var_names);
  return "(" + n + ")/(" + d + ")";
}

ResElement res_arith(const ResElement& a, const ResElement& b, ArithOp op) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div: return a / b;
  }
  throw structural_error("unknown arithmetic op");
}

namespace {

// Gaussian elimination over the rational function field; returns the rank
// and, when `kernel` is non-null, a left-kernel basis of the input rows.
int eliminate(std::vector<std::vector<ResElement>> rows,
              std::vector<std::vector<ResElement>>* kernel) {
  size_t nrows = rows.size();
  if (nrows == 0) return 0;
  size_t ncols = rows[0].size();
  int nv = 0;
  for (const auto& r : rows)
    for (const auto& e : r) nv = std::max(nv, e.nvars());

  // identity bookkeeping: track each reduced row as a combination of inputs
  std::vector<std::vector<ResElement>> combo(nrows,
      std::vector<ResElement>(nrows, ResElement(nv)));
  for (size_t i = 0; i < nrows; ++i) combo[i][i] = ResElement::constant(nv, 1);

  size_t pivot_row = 0;
  for (size_t col = 0; col < ncols && pivot_row < nrows; ++col) {
    size_t sel = nrows;
    for (size_t r = pivot_row; r < nrows; ++r) {
      if (!rows[r][col].is_zero()) {
        sel = r;
        break;
      }
    }
    if (sel == nrows) continue;
    std::swap(rows[sel], rows[pivot_row]);
    std::swap(combo[sel], combo[pivot_row]);
    const ResElement pivot = rows[pivot_row][col];
    for (size_t r = pivot_row + 1; r < nrows; ++r) {
      if (rows[r][col].is_zero()) continue;
      ResElement factor = rows[r][col] / pivot;
      for (size_t c = col; c < ncols; ++c)
        rows[r][c] = rows[r][c] - factor * rows[pivot_row][c];
      for (size_t c = 0; c < nrows; ++c)
        combo[r][c] = combo[r][c] - factor * combo[pivot_row][c];
    }
    ++pivot_row;
  }

  if (kernel) {
    kernel->clear();
    for (size_t r = pivot_row; r < nrows; ++r) kernel->push_back(combo[r]);
  }
  return static_cast<int>(pivot_row);
}

}  // namespace

int res_matrix_rank(std::vector<std::vector<ResElement>> rows) {
  return eliminate(std::move(rows), nullptr);
}

std::vector<std::vector<ResElement>> res_matrix_left_kernel(
    const std::vector<std::vector<ResElement>>& rows) {
  std::vector<std::vector<ResElement>> kernel;
  eliminate(rows, &kernel);
  return kernel;
}

namespace {

// Clears denominators and expands each element in the non-subfield
// variables: rows[i][j] is the coefficient (a polynomial in the subfield
// variables) of the j-th outside monomial in the i-th element. A nonzero
// vector alpha has sum alpha_i * elems_i = 0 iff alpha annihilates the rows.
std::vector<std::vector<ResElement>> expand_over_subfield(const std::vector<ResElement>& elems,
                                                          const ResSubfield& subfield) {
  int nv = elems.front().nvars();
  Polynomial common = Polynomial::constant(nv, 1);
  for (const auto& e : elems) common = common * e.den();
  std::vector<Polynomial> cleared;
  for (const auto& e : elems) {
    auto q = common.divide_exact(e.den());
    if (!q) throw internal_inconsistency("denominator does not divide common denominator");
    cleared.push_back(e.num() * *q);
  }

  std::map<Monomial, size_t, GrlexLess> col_of;
  std::vector<std::vector<Polynomial>> coeff_rows(elems.size());
  for (size_t i = 0; i < cleared.size(); ++i) {
    for (const auto& [m, c] : cleared[i].terms()) {
      Monomial outside(nv, 0), inside(nv, 0);
      for (int v = 0; v < nv; ++v) {
        if (subfield.variables.count(v))
          inside[v] = m[v];
        else
          outside[v] = m[v];
      }
      size_t col = col_of.try_emplace(outside, col_of.size()).first->second;
      for (auto& row : coeff_rows)
        if (row.size() <= col) row.resize(col_of.size(), Polynomial(nv));
      Polynomial addend(nv);
      addend.set_coeff(inside, c);
      coeff_rows[i][col] = coeff_rows[i][col] + addend;
    }
  }
  size_t ncols = std::max<size_t>(col_of.size(), 1);
  for (auto& row : coeff_rows) row.resize(ncols, Polynomial(nv));

  std::vector<std::vector<ResElement>> rows;
  for (auto& row : coeff_rows) {
    std::vector<ResElement> r;
    for (auto& p : row) r.push_back(ResElement(p, Polynomial::constant(nv, 1)));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

LinearIndependenceResult linearly_independent_over(const std::vector<ResElement>& elems,
                                                   const ResSubfield& subfield) {
  LinearIndependenceResult result;
  if (elems.empty()) {
    result.independent = true;
    return result;
  }
  auto rows = expand_over_subfield(elems, subfield);
  auto kernel = res_matrix_left_kernel(rows);
  if (kernel.empty()) {
    result.independent = true;
    return result;
  }
  result.independent = false;
  result.witness = kernel.front();
  return result;
}

std::optional<std::vector<ResElement>> solve_linear_combination(
    const ResElement& target, const std::vector<ResElement>& gens, const ResSubfield& subfield) {
  int nv = target.nvars();
  if (gens.empty()) {
    if (target.is_zero()) return std::vector<ResElement>{};
    return std::nullopt;
  }
  std::vector<ResElement> all = gens;
  all.push_back(target);
  auto rows = expand_over_subfield(all, subfield);
  size_t n = gens.size();
  size_t ncols = rows.front().size();

  // augmented system over Q(x_S): unknown alpha with A * alpha = b, where
  // A[j][i] = rows[i][j] and b[j] = rows[n][j]
  std::vector<std::vector<ResElement>> aug(ncols, std::vector<ResElement>(n + 1, ResElement(nv)));
  for (size_t j = 0; j < ncols; ++j) {
    for (size_t i = 0; i < n; ++i) aug[j][i] = rows[i][j];
    aug[j][n] = rows[n][j];
  }

  std::vector<long> pivot_col(aug.size(), -1);
  size_t pivot = 0;
  for (size_t col = 0; col < n && pivot < aug.size(); ++col) {
    size_t sel = aug.size();
    for (size_t r = pivot; r < aug.size(); ++r)
      if (!aug[r][col].is_zero()) {
        sel = r;
        break;
      }
    if (sel == aug.size()) continue;
    std::swap(aug[sel], aug[pivot]);
    ResElement p = aug[pivot][col];
    for (size_t c = 0; c <= n; ++c) aug[pivot][c] = aug[pivot][c] / p;
    for (size_t r = 0; r < aug.size(); ++r) {
      if (r == pivot || aug[r][col].is_zero()) continue;
      ResElement f = aug[r][col];
      for (size_t c = 0; c <= n; ++c) aug[r][c] = aug[r][c] - f * aug[pivot][c];
    }
    pivot_col[pivot] = static_cast<long>(col);
    ++pivot;
  }
  // consistency: no row of the form (0 ... 0 | nonzero)
  for (size_t r = pivot; r < aug.size(); ++r)
    if (!aug[r][n].is_zero()) return std::nullopt;

  std::vector<ResElement> alpha(n, ResElement(nv));
  for (size_t r = 0; r < pivot; ++r) alpha[pivot_col[r]] = aug[r][n];
  return alpha;
}

namespace {

std::vector<std::vector<ResElement>> jacobian_rows(const std::vector<ResElement>& elems,
                                                   const ResSubfield& subfield, int nv) {
  std::vector<std::vector<ResElement>> rows;
  for (int v : subfield.variables) {
    std::vector<ResElement> row(nv, ResElement(nv));
    row[v] = ResElement::constant(nv, 1);
    rows.push_back(std::move(row));
  }
  for (const auto& e : elems) {
    std::vector<ResElement> row;
    for (int v = 0; v < nv; ++v) row.push_back(e.derivative(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

bool algebraically_independent_over(const std::vector<ResElement>& elems,
                                    const ResSubfield& subfield) {
  if (elems.empty()) return true;
  int nv = elems.front().nvars();
  auto rows = jacobian_rows(elems, subfield, nv);
  int expected = static_cast<int>(subfield.variables.size() + elems.size());
  return res_matrix_rank(std::move(rows)) == expected;
}

int transcendence_degree(const std::vector<ResElement>& elems, const ResSubfield& subfield) {
  if (elems.empty()) return 0;
  int nv = elems.front().nvars();
  auto rows = jacobian_rows(elems, subfield, nv);
  return res_matrix_rank(std::move(rows)) - static_cast<int>(subfield.variables.size());
}

}  // namespace valkit
