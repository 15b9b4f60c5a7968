#include "valkit/lattice.hpp"

#include <algorithm>

#include "valkit/errors.hpp"

namespace valkit {

namespace {

void row_axpy(std::vector<Int>& target, const std::vector<Int>& source, const Int& factor) {
  for (size_t i = 0; i < target.size(); ++i) target[i] -= factor * source[i];
}

// Rows of a matrix from flattened gamma coordinates scaled to integers by
// the shared denominator.
IntMatrix scale_to_integers(const std::vector<std::vector<Rat>>& rows, Int* denominator_out) {
  std::vector<Rat> all;
  for (const auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  Int d = common_denominator(all);
  IntMatrix out;
  for (const auto& r : rows) {
    std::vector<Int> row;
    for (const Rat& q : r) {
      Rat scaled = q * Rat(d);
      row.push_back(scaled.get_num());
    }
    out.push_back(std::move(row));
  }
  if (denominator_out) *denominator_out = d;
  return out;
}

int rational_rank(std::vector<std::vector<Rat>> rows) {
  size_t nrows = rows.size();
  if (nrows == 0) return 0;
  size_t ncols = rows[0].size();
  size_t pivot = 0;
  for (size_t col = 0; col < ncols && pivot < nrows; ++col) {
    size_t sel = nrows;
    for (size_t r = pivot; r < nrows; ++r)
      if (rows[r][col] != 0) {
        sel = r;
        break;
      }
    if (sel == nrows) continue;
    std::swap(rows[sel], rows[pivot]);
    for (size_t r = pivot + 1; r < nrows; ++r) {
      if (rows[r][col] == 0) continue;
      Rat f = rows[r][col] / rows[pivot][col];
      for (size_t c = col; c < ncols; ++c) rows[r][c] -= f * rows[pivot][c];
    }
    ++pivot;
  }
  return static_cast<int>(pivot);
}

// Basis of the right kernel {z : rows * z = 0} over Q.
std::vector<std::vector<Rat>> rational_right_kernel(std::vector<std::vector<Rat>> rows,
                                                    size_t ncols) {
  // reduced row echelon form
  size_t nrows = rows.size();
  std::vector<long> pivot_col;
  size_t pivot = 0;
  for (size_t col = 0; col < ncols && pivot < nrows; ++col) {
    size_t sel = nrows;
    for (size_t r = pivot; r < nrows; ++r)
      if (rows[r][col] != 0) {
        sel = r;
        break;
      }
    if (sel == nrows) continue;
    std::swap(rows[sel], rows[pivot]);
    Rat p = rows[pivot][col];
    for (size_t c = 0; c < ncols; ++c) rows[pivot][c] /= p;
    for (size_t r = 0; r < nrows; ++r) {
      if (r == pivot || rows[r][col] == 0) continue;
      Rat f = rows[r][col];
      for (size_t c = 0; c < ncols; ++c) rows[r][c] -= f * rows[pivot][c];
    }
    pivot_col.push_back(static_cast<long>(col));
    ++pivot;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (long c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<Rat>> kernel;
  for (size_t free_col = 0; free_col < ncols; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<Rat> z(ncols, Rat(0));
    z[free_col] = 1;
    for (size_t p = 0; p < pivot_col.size(); ++p)
      z[pivot_col[p]] = -rows[p][free_col];
    kernel.push_back(std::move(z));
  }
  return kernel;
}

std::vector<std::vector<Rat>> flatten_all(const std::vector<GammaElement>& gens) {
  std::vector<std::vector<Rat>> rows;
  for (const auto& g : gens) rows.push_back(flatten(g));
  return rows;
}

}  // namespace

int hnf_rows(IntMatrix& m, IntMatrix* transform) {
  size_t nrows = m.size();
  size_t ncols = nrows == 0 ? 0 : m[0].size();
  IntMatrix u;
  if (transform) {
    u.assign(nrows, std::vector<Int>(nrows, 0));
    for (size_t i = 0; i < nrows; ++i) u[i][i] = 1;
  }
  size_t r = 0;
  for (size_t col = 0; col < ncols && r < nrows; ++col) {
    // gcd elimination below row r
    while (true) {
      size_t best = nrows;
      for (size_t i = r; i < nrows; ++i) {
        if (m[i][col] == 0) continue;
        if (best == nrows ||
            mpz_cmpabs(m[i][col].get_mpz_t(), m[best][col].get_mpz_t()) < 0)
          best = i;
      }
      if (best == nrows) break;
      std::swap(m[best], m[r]);
      if (transform) std::swap(u[best], u[r]);
      bool done = true;
      for (size_t i = r + 1; i < nrows; ++i) {
        if (m[i][col] == 0) continue;
        Int q = m[i][col] / m[r][col];  // truncated division is fine here
        if (q != 0) {
          row_axpy(m[i], m[r], q);
          if (transform) row_axpy(u[i], u[r], q);
        }
        if (m[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (m[r][col] == 0) continue;
    if (m[r][col] < 0) {
      for (auto& x : m[r]) x = -x;
      if (transform)
        for (auto& x : u[r]) x = -x;
    }
    // reduce entries above the pivot into [0, pivot)
    for (size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), m[i][col].get_mpz_t(), m[r][col].get_mpz_t());
      if (q != 0) {
        row_axpy(m[i], m[r], q);
        if (transform) row_axpy(u[i], u[r], q);
      }
    }
    ++r;
  }
  if (transform) *transform = std::move(u);
  return static_cast<int>(r);
}

IntMatrix int_left_kernel(const IntMatrix& m) {
  IntMatrix work = m;
  IntMatrix u;
  int rank = hnf_rows(work, &u);
  IntMatrix kernel;
  for (size_t i = rank; i < work.size(); ++i) kernel.push_back(u[i]);
  return kernel;
}

bool hnf_contains(const IntMatrix& hnf, std::vector<Int> v) {
  size_t ncols = v.size();
  size_t row = 0;
  for (size_t col = 0; col < ncols; ++col) {
    if (row < hnf.size() && hnf[row][col] != 0) {
      Int q, rem;
      mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), v[col].get_mpz_t(), hnf[row][col].get_mpz_t());
      if (rem != 0) return false;
      if (q != 0) row_axpy(v, hnf[row], q);
      ++row;
    } else if (v[col] != 0) {
      return false;
    }
  }
  return true;
}

GammaSubgroup::GammaSubgroup(int main_rank, int inf_rank, std::vector<GammaElement> generators)
    : main_rank_(main_rank), inf_rank_(inf_rank), generators_(std::move(generators)) {
  for (const auto& g : generators_)
    if (g.main_rank() != main_rank_ || g.inf_rank() != inf_rank_)
      throw structural_error("subgroup generator rank mismatch");
}

GammaSubgroup GammaSubgroup::trivial(int main_rank, int inf_rank) {
  return GammaSubgroup(main_rank, inf_rank, {});
}

bool GammaSubgroup::is_trivial() const {
  for (const auto& g : generators_)
    if (!g.is_zero()) return false;
  return true;
}

bool GammaSubgroup::contains(const GammaElement& g) const {
  if (g.main_rank() != main_rank_ || g.inf_rank() != inf_rank_)
    throw structural_error("subgroup membership rank mismatch");
  if (g.is_zero()) return true;
  auto rows = flatten_all(generators_);
  rows.push_back(flatten(g));
  IntMatrix scaled = scale_to_integers(rows, nullptr);
  std::vector<Int> target = scaled.back();
  scaled.pop_back();
  hnf_rows(scaled);
  // drop zero rows
  while (!scaled.empty()) {
    bool zero = true;
    for (const Int& x : scaled.back())
      if (x != 0) zero = false;
    if (!zero) break;
    scaled.pop_back();
  }
  return hnf_contains(scaled, std::move(target));
}

bool GammaSubgroup::equals(const GammaSubgroup& other) const {
  for (const auto& g : other.generators_)
    if (!contains(g)) return false;
  for (const auto& g : generators_)
    if (!other.contains(g)) return false;
  return true;
}

GammaSubgroup GammaSubgroup::normalized() const {
  if (generators_.empty()) return *this;
  Int d;
  IntMatrix scaled = scale_to_integers(flatten_all(generators_), &d);
  int rank = hnf_rows(scaled);
  std::vector<GammaElement> gens;
  for (int i = 0; i < rank; ++i) {
    std::vector<Rat> coords;
    for (const Int& x : scaled[i]) {
      Rat q(x, d);
      q.canonicalize();
      coords.push_back(q);
    }
    gens.push_back(unflatten(coords, main_rank_, inf_rank_));
  }
  return GammaSubgroup(main_rank_, inf_rank_, std::move(gens));
}

std::vector<size_t> q_basis_mod(const std::vector<GammaElement>& gens, const GammaSubgroup& g_c) {
  std::vector<size_t> picked;
  std::vector<std::vector<Rat>> base = flatten_all(g_c.generators());
  int base_rank = rational_rank(base);
  std::vector<std::vector<Rat>> current = base;
  int current_rank = base_rank;
  for (size_t i = 0; i < gens.size(); ++i) {
    auto candidate = current;
    candidate.push_back(flatten(gens[i]));
    int r = rational_rank(candidate);
    if (r > current_rank) {
      picked.push_back(i);
      current = std::move(candidate);
      current_rank = r;
    }
  }
  return picked;
}

int rational_rank_mod(const std::vector<GammaElement>& gens, const GammaSubgroup& g_c) {
  auto rows = flatten_all(g_c.generators());
  int base = rational_rank(rows);
  auto all = rows;
  for (const auto& g : gens) all.push_back(flatten(g));
  return rational_rank(all) - base;
}

bool torsion_free_quotient(const std::vector<GammaElement>& gens_l, const GammaSubgroup& g_c) {
  // saturation of the subgroup inside the full lattice must equal the
  // subgroup itself
  std::vector<std::vector<Rat>> all = flatten_all(gens_l);
  auto c_rows = flatten_all(g_c.generators());
  all.insert(all.end(), c_rows.begin(), c_rows.end());
  size_t ncols = all.empty() ? 0 : all[0].size();
  if (all.empty()) return true;

  Int d;
  IntMatrix scaled = scale_to_integers(all, &d);
  IntMatrix l_basis = scaled;
  int l_rank = hnf_rows(l_basis);
  l_basis.resize(l_rank);

  // rational span of the subgroup, via its right kernel
  std::vector<std::vector<Rat>> c_scaled;
  for (size_t i = gens_l.size(); i < all.size(); ++i) {
    std::vector<Rat> row;
    for (const Int& x : scaled[i]) row.push_back(Rat(x));
    c_scaled.push_back(std::move(row));
  }
  auto kernel = rational_right_kernel(c_scaled, ncols);

  // y * (l_basis * kernel^T) = 0 characterizes lattice elements inside the
  // rational span of the subgroup
  std::vector<std::vector<Rat>> product;
  for (const auto& row : l_basis) {
    std::vector<Rat> prow;
    for (const auto& z : kernel) {
      Rat dot(0);
      for (size_t c = 0; c < ncols; ++c) dot += Rat(row[c]) * z[c];
      prow.push_back(dot);
    }
    product.push_back(std::move(prow));
  }
  IntMatrix product_int = scale_to_integers(product, nullptr);
  IntMatrix sat_coords = int_left_kernel(product_int);

  // subgroup lattice in the scaled coordinates
  IntMatrix c_lattice;
  for (size_t i = gens_l.size(); i < all.size(); ++i) c_lattice.push_back(scaled[i]);
  hnf_rows(c_lattice);
  while (!c_lattice.empty()) {
    bool zero = true;
    for (const Int& x : c_lattice.back())
      if (x != 0) zero = false;
    if (!zero) break;
    c_lattice.pop_back();
  }

  for (const auto& y : sat_coords) {
    std::vector<Int> x(ncols, 0);
    for (size_t i = 0; i < y.size(); ++i)
      for (size_t c = 0; c < ncols; ++c) x[c] += y[i] * l_basis[i][c];
    if (!hnf_contains(c_lattice, x)) return false;
  }
  return true;
}

std::optional<std::vector<long>> solve_integer_combination(const std::vector<GammaElement>& gens,
                                                           const GammaElement& target) {
  size_t k = gens.size();
  if (target.is_zero()) return std::vector<long>(k, 0);
  if (k == 0) return std::nullopt;
  auto rows = flatten_all(gens);
  rows.push_back(flatten(target));
  IntMatrix scaled = scale_to_integers(rows, nullptr);
  std::vector<Int> t = scaled.back();
  scaled.pop_back();

  IntMatrix h = scaled;
  IntMatrix u;
  int rank = hnf_rows(h, &u);

  // express t over the HNF rows, then pull back through the transform
  std::vector<Int> y(h.size(), 0);
  size_t ncols = t.size();
  size_t row = 0;
  for (size_t col = 0; col < ncols; ++col) {
    if (row < static_cast<size_t>(rank) && h[row][col] != 0) {
      Int q, rem;
      mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), t[col].get_mpz_t(), h[row][col].get_mpz_t());
      if (rem != 0) return std::nullopt;
      y[row] = q;
      if (q != 0) row_axpy(t, h[row], q);
      ++row;
    } else if (t[col] != 0) {
      return std::nullopt;
    }
  }
  std::vector<long> x(k, 0);
  for (size_t r = 0; r < h.size(); ++r) {
    if (y[r] == 0) continue;
    for (size_t i = 0; i < k; ++i) {
      Int v = x[i] + y[r] * u[r][i];
      if (!v.fits_slong_p()) return std::nullopt;
      x[i] = v.get_si();
    }
  }
  return x;
}

int rational_matrix_rank(std::vector<std::vector<Rat>> rows) {
  return rational_rank(std::move(rows));
}

std::vector<std::vector<Rat>> rational_matrix_right_kernel(std::vector<std::vector<Rat>> rows,
                                                           size_t ncols) {
  return rational_right_kernel(std::move(rows), ncols);
}

GammaSubgroup lattice_intersection(const GammaSubgroup& a, const GammaSubgroup& b) {
  if (a.main_rank() != b.main_rank() || a.inf_rank() != b.inf_rank())
    throw structural_error("lattice intersection rank mismatch");
  if (a.generators().empty() || b.generators().empty())
    return GammaSubgroup::trivial(a.main_rank(), a.inf_rank());
  std::vector<std::vector<Rat>> rows = flatten_all(a.generators());
  auto b_rows = flatten_all(b.generators());
  rows.insert(rows.end(), b_rows.begin(), b_rows.end());
  Int d;
  IntMatrix scaled = scale_to_integers(rows, &d);
  IntMatrix kernel = int_left_kernel(scaled);
  size_t na = a.generators().size();
  size_t ncols = scaled[0].size();
  std::vector<GammaElement> gens;
  for (const auto& k : kernel) {
    std::vector<Int> x(ncols, 0);
    for (size_t i = 0; i < na; ++i)
      for (size_t c = 0; c < ncols; ++c) x[c] += k[i] * scaled[i][c];
    std::vector<Rat> coords;
    bool zero = true;
    for (const Int& v : x) {
      Rat q(v, d);
      q.canonicalize();
      if (q != 0) zero = false;
      coords.push_back(q);
    }
    if (!zero) gens.push_back(unflatten(coords, a.main_rank(), a.inf_rank()));
  }
  return GammaSubgroup(a.main_rank(), a.inf_rank(), std::move(gens)).normalized();
}

}  // namespace valkit
