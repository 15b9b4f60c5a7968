#include "valkit/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "valkit/errors.hpp"

namespace valkit {

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  unsigned da = 0, db = 0;
  for (unsigned e : a) da += e;
  for (unsigned e : b) db += e;
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {
void check_vars(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars()) throw structural_error("polynomial variable-count mismatch");
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

bool mono_divides(const Monomial& d, const Monomial& m) {
  for (size_t i = 0; i < d.size(); ++i)
    if (d[i] > m[i]) return false;
  return true;
}

Monomial mono_div(const Monomial& m, const Monomial& d) {
  Monomial out(m.size());
  for (size_t i = 0; i < m.size(); ++i) out[i] = m[i] - d[i];
  return out;
}
}  // namespace

Polynomial Polynomial::constant(int nvars, const Rat& value) {
  Polynomial p(nvars);
  if (value != 0) p.terms_[Monomial(nvars, 0)] = value;
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw structural_error("variable index out of range");
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m[index] = 1;
  p.terms_[m] = 1;
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first == Monomial(nvars_, 0);
}

Rat Polynomial::constant_value() const {
  if (terms_.empty()) return Rat(0);
  return terms_.begin()->second;
}

long Polynomial::total_degree() const {
  long deg = 0;
  for (const auto& [m, c] : terms_) {
    long d = 0;
    for (unsigned e : m) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

long Polynomial::degree_in(int var) const {
  long deg = 0;
  for (const auto& [m, c] : terms_) deg = std::max(deg, static_cast<long>(m[var]));
  return deg;
}

bool Polynomial::uses_var(int var) const {
  for (const auto& [m, c] : terms_)
    if (m[var] > 0) return true;
  return false;
}

void Polynomial::set_coeff(const Monomial& m, const Rat& c) {
  if (static_cast<int>(m.size()) != nvars_) throw structural_error("monomial width mismatch");
  if (c == 0)
    terms_.erase(m);
  else
    terms_[m] = c;
}

Rat Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rat(0) : it->second;
}

const Monomial& Polynomial::leading_monomial() const {
  if (terms_.empty()) throw arithmetic_error("leading monomial of zero polynomial");
  return terms_.rbegin()->first;
}

const Rat& Polynomial::leading_coeff() const {
  if (terms_.empty()) throw arithmetic_error("leading coefficient of zero polynomial");
  return terms_.rbegin()->second;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  check_vars(*this, o);
  Polynomial out = *this;
  for (const auto& [m, c] : o.terms_) {
    auto it = out.terms_.find(m);
    if (it == out.terms_.end()) {
      out.terms_[m] = c;
    } else {
      it->second += c;
      if (it->second == 0) out.terms_.erase(it);
    }
  }
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial Polynomial::scaled(const Rat& c) const {
  Polynomial out(nvars_);
  if (c == 0) return out;
  for (const auto& [m, v] : terms_) out.terms_[m] = v * c;
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_vars(*this, o);
  Polynomial out(nvars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m = mono_mul(ma, mb);
      auto it = out.terms_.find(m);
      if (it == out.terms_.end()) {
        Rat prod = ca * cb;
        if (prod != 0) out.terms_[m] = prod;
      } else {
        it->second += ca * cb;
        if (it->second == 0) out.terms_.erase(it);
      }
    }
  }
  return out;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial out = Polynomial::constant(nvars_, 1);
  Polynomial base = *this;
  while (e) {
    if (e & 1) out = out * base;
    base = base * base;
    e >>= 1;
  }
  return out;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial d = m;
    Rat coeff = c * Rat(static_cast<long>(m[var]));
    d[var] -= 1;
    out.terms_[d] = out.coeff(d) + coeff;
    if (out.terms_[d] == 0) out.terms_.erase(d);
  }
  return out;
}

Rat Polynomial::eval(const std::vector<Rat>& point) const {
  if (static_cast<int>(point.size()) != nvars_) throw structural_error("eval point width mismatch");
  Rat total(0);
  for (const auto& [m, c] : terms_) {
    Rat value = c;
    for (int i = 0; i < nvars_; ++i) {
      for (unsigned e = 0; e < m[i]; ++e) value *= point[i];
    }
    total += value;
  }
  return total;
}

Polynomial Polynomial::eval_poly(const std::vector<Polynomial>& images) const {
  if (static_cast<int>(images.size()) != nvars_)
    throw structural_error("eval_poly image count mismatch");
  int target_vars = images.empty() ? nvars_ : images.front().nvars();
  Polynomial total(target_vars);
  for (const auto& [m, c] : terms_) {
    Polynomial term = Polynomial::constant(target_vars, c);
    for (int i = 0; i < nvars_; ++i)
      if (m[i] > 0) term = term * images[i].pow(m[i]);
    total = total + term;
  }
  return total;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& o) const {
  check_vars(*this, o);
  if (o.is_zero()) throw arithmetic_error("polynomial division by zero");
  Polynomial rem = *this;
  Polynomial quot(nvars_);
  const Monomial& lead_m = o.leading_monomial();
  const Rat& lead_c = o.leading_coeff();
  while (!rem.is_zero()) {
    const Monomial& rm = rem.leading_monomial();
    if (!mono_divides(lead_m, rm)) return std::nullopt;
    Monomial q = mono_div(rm, lead_m);
    Rat qc = rem.leading_coeff() / lead_c;
    Polynomial piece(nvars_);
    piece.terms_[q] = qc;
    quot = quot + piece;
    rem = rem - piece * o;
  }
  return quot;
}

Polynomial Polynomial::primitive_normalized() const {
  if (is_zero()) return *this;
  // content = gcd of numerators / lcm of denominators
  Int num_gcd = 0, den_lcm = 1;
  for (const auto& [m, c] : terms_) {
    Int g;
    mpz_gcd(g.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    num_gcd = g;
    Int l;
    mpz_lcm(l.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    den_lcm = l;
  }
  Rat content(num_gcd, den_lcm);
  content.canonicalize();
  if (sgn(leading_coeff()) < 0) content = -content;
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) out.terms_[m] = c / content;
  return out;
}

std::string Polynomial::to_string(const std::vector<std::string>& var_names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // print highest-order terms first
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rat abs_c = c < 0 ? Rat(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? "-" : "+");
    }
    bool has_vars = false;
    for (unsigned e : m)
      if (e) has_vars = true;
    if (abs_c != 1 || !has_vars) os << rat_to_string(abs_c);
    bool printed = (abs_c != 1 || !has_vars);
    for (size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      if (printed) os << "*";
      os << var_names.at(i);
      if (m[i] > 1) os << "^" << m[i];
      printed = true;
    }
  }
  return os.str();
}

namespace {

// Univariate view in `var` with polynomial coefficients (exponent of `var`
// zeroed out inside each coefficient).
std::map<long, Polynomial> coeffs_in(const Polynomial& p, int var) {
  std::map<long, Polynomial> out;
  for (const auto& [m, c] : p.terms()) {
    long d = m[var];
    Monomial rest = m;
    rest[var] = 0;
    auto it = out.find(d);
    if (it == out.end()) it = out.emplace(d, Polynomial(p.nvars())).first;
    it->second.set_coeff(rest, it->second.coeff(rest) + c);
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.is_zero())
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

Polynomial from_coeffs(const std::map<long, Polynomial>& cs, int var, int nvars) {
  Polynomial out(nvars);
  Polynomial x = Polynomial::variable(nvars, var);
  for (const auto& [d, c] : cs) {
    Polynomial t = c;
    for (long i = 0; i < d; ++i) t = t * x;
    out = out + t;
  }
  return out;
}

// Content of p viewed as univariate in var: gcd of the coefficients.
Polynomial content_in(const Polynomial& p, int var) {
  Polynomial g(p.nvars());
  for (const auto& [d, c] : coeffs_in(p, var)) g = poly_gcd(g, c);
  return g;
}

// Pseudo-remainder of f by g with respect to var.
Polynomial prem(Polynomial f, const Polynomial& g, int var) {
  long dg = g.degree_in(var);
  auto g_cs = coeffs_in(g, var);
  Polynomial g_lead = g_cs.rbegin()->second;
  Polynomial x = Polynomial::variable(f.nvars(), var);
  while (!f.is_zero() && f.degree_in(var) >= dg) {
    long df = f.degree_in(var);
    Polynomial f_lead = coeffs_in(f, var).rbegin()->second;
    Polynomial shift = Polynomial::constant(f.nvars(), 1);
    for (long i = 0; i < df - dg; ++i) shift = shift * x;
    f = f * g_lead - g * f_lead * shift;
  }
  return f;
}

}  // namespace

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars()) throw structural_error("gcd variable-count mismatch");
  if (a.is_zero()) return b.primitive_normalized();
  if (b.is_zero()) return a.primitive_normalized();
  if (a.is_constant() || b.is_constant()) return Polynomial::constant(a.nvars(), 1);

  // main variable: lowest index used by either
  int var = -1;
  for (int i = 0; i < a.nvars() && var < 0; ++i)
    if (a.uses_var(i) || b.uses_var(i)) var = i;
  if (var < 0) return Polynomial::constant(a.nvars(), 1);

  Polynomial ca = content_in(a, var);
  Polynomial cb = content_in(b, var);
  auto pa = a.divide_exact(ca);
  auto pb = b.divide_exact(cb);
  if (!pa || !pb) throw internal_inconsistency("content does not divide polynomial");
  Polynomial cont_gcd = poly_gcd(ca, cb);

  // primitive PRS on the primitive parts
  Polynomial f = pa->primitive_normalized();
  Polynomial g = pb->primitive_normalized();
  if (f.degree_in(var) < g.degree_in(var)) std::swap(f, g);
  while (true) {
    Polynomial r = prem(f, g, var);
    if (r.is_zero()) break;
    if (r.degree_in(var) == 0) {
      g = Polynomial::constant(a.nvars(), 1);
      break;
    }
    Polynomial rc = content_in(r, var);
    auto rp = r.divide_exact(rc);
    if (!rp) throw internal_inconsistency("content does not divide pseudo-remainder");
    f = g;
    g = rp->primitive_normalized();
  }
  return (cont_gcd * g).primitive_normalized();
}

}  // namespace valkit
