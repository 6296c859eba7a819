#include "whp/intmat.hpp"

#include <algorithm>
#include <numeric>

#include "whp/word.hpp"

namespace whp::lattice {

Int add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("integer overflow in lattice arithmetic");
  return r;
}

Int mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow in lattice arithmetic");
  return r;
}

Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols, int rows) {
  Matrix m(rows, static_cast<int>(cols.size()));
  for (int c = 0; c < m.cols(); ++c) {
    if (static_cast<int>(cols[c].size()) != rows) throw Error("column dimension mismatch");
    for (int r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

Vec Matrix::column(int c) const {
  Vec v(rows_);
  for (int r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix shape mismatch");
  Matrix m(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < b.cols(); ++j) m(i, j) = add(m(i, j), mul(a(i, k), b(k, j)));
    }
  return m;
}

Vec operator*(const Matrix& a, const Vec& x) {
  if (a.cols() != static_cast<int>(x.size())) throw Error("matrix shape mismatch");
  Vec y(a.rows(), 0);
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) y[i] = add(y[i], mul(a(i, k), x[k]));
  return y;
}

Int determinant(const Matrix& m) {
  const int n = m.rows();
  if (n != m.cols()) throw Error("determinant of a non-square matrix");
  if (n == 0) return 1;
  Matrix a = m;
  Int sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (a(i, k) != 0) { swap = i; break; }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a(i, j) = (add(mul(a(i, j), a(k, k)), -mul(a(i, k), a(k, j)))) / prev;
    prev = a(k, k);
  }
  return mul(sign, a(n - 1, n - 1));
}

namespace {

// Column operation on (H, U) and the matching row operation on U^-1:
// [col i, col j] <- [col i, col j] * [[p, q], [r, s]] with ps - qr = ±1.
void combine_columns(ColumnEchelon& e, int i, int j, Int p, Int q, Int r, Int s) {
  auto apply = [&](Matrix& M) {
    for (int row = 0; row < M.rows(); ++row) {
      Int x = M(row, i), y = M(row, j);
      M(row, i) = add(mul(x, p), mul(y, r));
      M(row, j) = add(mul(x, q), mul(y, s));
    }
  };
  apply(e.H);
  apply(e.U);
  // Inverse of [[p,q],[r,s]] is det * [[s,-q],[-r,p]] applied to rows i, j.
  const Int det = add(mul(p, s), -mul(q, r));
  for (int col = 0; col < e.U_inverse.cols(); ++col) {
    Int x = e.U_inverse(i, col), y = e.U_inverse(j, col);
    e.U_inverse(i, col) = mul(det, add(mul(s, x), -mul(q, y)));
    e.U_inverse(j, col) = mul(det, add(mul(-r, x), mul(p, y)));
  }
}

void negate_column(ColumnEchelon& e, int i) {
  for (int row = 0; row < e.H.rows(); ++row) e.H(row, i) = -e.H(row, i);
  for (int row = 0; row < e.U.rows(); ++row) e.U(row, i) = -e.U(row, i);
  for (int col = 0; col < e.U_inverse.cols(); ++col) e.U_inverse(i, col) = -e.U_inverse(i, col);
}

void swap_columns(ColumnEchelon& e, int i, int j) {
  if (i != j) combine_columns(e, i, j, 0, 1, 1, 0);
}

struct Bezout {
  Int g, x, y;
};

Bezout extended_gcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = add(old_r, -mul(q, r));
    old_r = r, r = tmp;
    tmp = add(old_s, -mul(q, s));
    old_s = s, s = tmp;
    tmp = add(old_t, -mul(q, t));
    old_t = t, t = tmp;
  }
  return {old_r, old_s, old_t};
}

}  // namespace

ColumnEchelon column_echelon(const Matrix& A) {
  ColumnEchelon e{A, Matrix::identity(A.cols()), Matrix::identity(A.cols()), {}};
  int pivot_col = 0;
  for (int row = 0; row < A.rows() && pivot_col < A.cols(); ++row) {
    for (int j = pivot_col + 1; j < A.cols(); ++j) {
      Int a = e.H(row, pivot_col), b = e.H(row, j);
      if (b == 0) continue;
      if (a == 0) {
        swap_columns(e, pivot_col, j);
        continue;
      }
      auto [g, x, y] = extended_gcd(a, b);
      // [a b] * [[x, -b/g], [y, a/g]] = [g 0], determinant 1.
      combine_columns(e, pivot_col, j, x, -(b / g), y, a / g);
    }
    if (e.H(row, pivot_col) == 0) continue;
    if (e.H(row, pivot_col) < 0) negate_column(e, pivot_col);
    e.pivot_rows.push_back(row);
    ++pivot_col;
  }
  return e;
}

std::optional<IntegerSolution> solve(const Matrix& A, const Vec& b) {
  if (static_cast<int>(b.size()) != A.rows()) throw Error("right-hand side dimension mismatch");
  ColumnEchelon e = column_echelon(A);
  const int r = e.rank();
  Vec y(A.cols(), 0);
  for (int j = 0; j < r; ++j) {
    const int p = e.pivot_rows[j];
    Int rhs = b[p];
    for (int i = 0; i < j; ++i) rhs = add(rhs, -mul(e.H(p, i), y[i]));
    if (rhs % e.H(p, j) != 0) return std::nullopt;
    y[j] = rhs / e.H(p, j);
  }
  for (int row = 0; row < A.rows(); ++row) {
    Int lhs = 0;
    for (int i = 0; i < r; ++i) lhs = add(lhs, mul(e.H(row, i), y[i]));
    if (lhs != b[row]) return std::nullopt;
  }
  IntegerSolution sol{e.U * y, {}};
  for (int j = r; j < A.cols(); ++j) sol.kernel.push_back(e.U.column(j));
  return sol;
}

std::vector<Vec> kernel_basis(const Matrix& A) {
  ColumnEchelon e = column_echelon(A);
  std::vector<Vec> out;
  for (int j = e.rank(); j < A.cols(); ++j) out.push_back(e.U.column(j));
  return out;
}

std::vector<Vec> hermite_basis(const std::vector<Vec>& generators, int dim) {
  if (generators.empty()) return {};
  // Column echelon of the generators-as-columns matrix; its pivot columns
  // are the basis, then earlier columns are reduced at later pivots.
  Matrix G = Matrix::from_columns(generators, dim);
  ColumnEchelon e = column_echelon(G);
  std::vector<Vec> basis;
  for (int j = 0; j < e.rank(); ++j) basis.push_back(e.H.column(j));
  for (int j = 0; j < static_cast<int>(basis.size()); ++j) {
    const int p = e.pivot_rows[j];
    for (int k = 0; k < j; ++k) {
      Int q = floor_div(basis[k][p], basis[j][p]);
      if (q == 0) continue;
      for (int r = 0; r < dim; ++r) basis[k][r] = add(basis[k][r], -mul(q, basis[j][r]));
    }
  }
  return basis;
}

Vec reduce_mod(Vec x, const std::vector<Vec>& hermite) {
  for (const Vec& row : hermite) {
    auto pivot = std::find_if(row.begin(), row.end(), [](Int v) { return v != 0; });
    if (pivot == row.end()) continue;
    const auto p = static_cast<std::size_t>(pivot - row.begin());
    Int q = floor_div(x[p], row[p]);
    if (q == 0) continue;
    for (std::size_t r = 0; r < x.size(); ++r) x[r] = add(x[r], -mul(q, row[r]));
  }
  return x;
}

bool in_lattice(const Vec& x, const std::vector<Vec>& hermite) {
  Vec r = reduce_mod(x, hermite);
  return std::all_of(r.begin(), r.end(), [](Int v) { return v == 0; });
}

std::optional<Vec> coordinates(const std::vector<Vec>& basis, const Vec& x, int dim) {
  if (basis.empty()) {
    if (std::all_of(x.begin(), x.end(), [](Int v) { return v == 0; })) return Vec{};
    return std::nullopt;
  }
  auto sol = solve(Matrix::from_columns(basis, dim), x);
  if (!sol) return std::nullopt;
  return sol->particular;
}

SaturatedSplit saturate(const std::vector<Vec>& generators, int dim) {
  // Left kernel K of the generator matrix, then the saturation is ker(K^T).
  Matrix G = Matrix::from_columns(generators, dim);
  std::vector<Vec> left_kernel = kernel_basis(G.transpose());
  std::vector<Vec> sat;
  if (left_kernel.empty()) {
    for (int i = 0; i < dim; ++i) {
      Vec v(dim, 0);
      v[i] = 1;
      sat.push_back(v);
    }
  } else {
    sat = kernel_basis(Matrix::from_columns(left_kernel, dim).transpose());
  }
  sat = hermite_basis(sat, dim);
  SaturatedSplit out{sat, {}};
  if (static_cast<int>(sat.size()) == dim || sat.empty()) {
    if (sat.empty())
      for (int i = 0; i < dim; ++i) {
        Vec v(dim, 0);
        v[i] = 1;
        out.complement.push_back(v);
      }
    return out;
  }
  // S^T U = [H | 0] with H unimodular; the last columns of (U^-1)^T complete S.
  ColumnEchelon e = column_echelon(Matrix::from_columns(sat, dim).transpose());
  Matrix VT = e.U_inverse.transpose();
  std::vector<Vec> comp;
  for (int j = e.rank(); j < dim; ++j) comp.push_back(VT.column(j));
  comp = hermite_basis(comp, dim);
  for (auto& c : comp) c = reduce_mod(c, sat);
  out.complement = std::move(comp);
  return out;
}

}  // namespace whp::lattice
