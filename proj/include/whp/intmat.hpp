#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace whp::lattice {

using Int = std::int64_t;
using Vec = std::vector<Int>;

/// Overflow-checked arithmetic; throws whp::Error instead of wrapping.
Int add(Int a, Int b);
Int mul(Int a, Int b);
Int floor_div(Int a, Int b);

/// Dense row-major integer matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {}
  static Matrix identity(int n);
  static Matrix from_columns(const std::vector<Vec>& cols, int rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Int& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  Int operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  Vec column(int c) const;
  Matrix transpose() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vec operator*(const Matrix& a, const Vec& x);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Int> data_;
};

Int determinant(const Matrix& m);  ///< Bareiss; square matrices only.

/// A * U = H with U unimodular (U_inverse tracked) and H in column echelon
/// form: pivot column j has its first nonzero entry at pivot_rows[j] > 0.
struct ColumnEchelon {
  Matrix H, U, U_inverse;
  std::vector<int> pivot_rows;
  int rank() const { return static_cast<int>(pivot_rows.size()); }
};
ColumnEchelon column_echelon(const Matrix& A);

/// Integer solutions of A x = b: x = particular + span(kernel).
struct IntegerSolution {
  Vec particular;
  std::vector<Vec> kernel;
};
std::optional<IntegerSolution> solve(const Matrix& A, const Vec& b);

/// Basis of the integer kernel { x : A x = 0 }.
std::vector<Vec> kernel_basis(const Matrix& A);

/// Row Hermite normal form of the lattice spanned by `generators`
/// (zero rows dropped). Canonical for the lattice.
std::vector<Vec> hermite_basis(const std::vector<Vec>& generators, int dim);

/// Canonical representative of x modulo the lattice with the given Hermite basis.
Vec reduce_mod(Vec x, const std::vector<Vec>& hermite);
bool in_lattice(const Vec& x, const std::vector<Vec>& hermite);

/// Coordinates of x in an arbitrary basis (columns), if x lies in its span.
std::optional<Vec> coordinates(const std::vector<Vec>& basis, const Vec& x, int dim);

struct SaturatedSplit {
  std::vector<Vec> saturation;  ///< basis of (Q-span of generators) ∩ Z^n
  std::vector<Vec> complement;  ///< completes `saturation` to a basis of Z^n
};
SaturatedSplit saturate(const std::vector<Vec>& generators, int dim);

}  // namespace whp::lattice
