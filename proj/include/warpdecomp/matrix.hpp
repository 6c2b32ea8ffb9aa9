#pragma once

// Small dense matrices for the desk-scale problems handled here (n <= ~10).
// Row-major, double precision.

#include <cstddef>
#include <span>
#include <vector>

namespace wpd {

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);

  static Matrix identity(int n);
  static Matrix diagonal(std::span<const double> d);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  double& operator()(int i, int j) { return data_[index(i, j)]; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }

  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);

  /// Largest absolute entry.
  double max_abs() const;
  /// Maximum absolute column sum.
  double norm1() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(j);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(Matrix lhs, double s);
Matrix operator*(double s, Matrix rhs);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
std::vector<double> operator*(const Matrix& m, std::span<const double> x);

/// Solves A x = b by Gaussian elimination with partial pivoting. Throws
/// RankDeficient when a pivot falls below `pivot_tol` times the largest
/// entry of A.
std::vector<double> solve(const Matrix& a, std::span<const double> b,
                          double pivot_tol = 1e-13);

/// Inverse via `solve` on the identity columns.
Matrix inverse(const Matrix& a, double pivot_tol = 1e-13);

/// Determinant by LU with partial pivoting.
double determinant(const Matrix& a);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j pairs with values[j]
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Iterates until
/// the off-diagonal Frobenius norm is below `threshold` times the Frobenius
/// norm of the input.
SymmetricEigen jacobi_eigen(const Matrix& sym, double threshold = 1e-12,
                            int max_sweeps = 100);

/// Matrix exponential by scaling and squaring of the Taylor series.
Matrix expm(const Matrix& a);

}  // namespace wpd
