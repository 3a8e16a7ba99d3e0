#pragma once

// Small dense linear algebra: enough for sector matrices (dim <= 64),
// plane-wave Hamiltonians (a few hundred) and tridiagonal line problems.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qesband::linalg {

/// Row-major dense real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<double> column(std::size_t j) const;

  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix operator*(double s) const;

  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// max_ij |a_ij - b_ij|; shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Eigenvalues of a general real matrix: radix-2 balancing, Householder
/// reduction to upper Hessenberg form, Francis double-shift QR.
/// Throws ConsistencyError if QR fails to converge.
std::vector<std::complex<double>> eigenvalues_general(Matrix a);

/// Right eigenvectors of `a` for real eigenvalues by inverse iteration.
/// Eigenvalues closer than `cluster_tol` are treated as one cluster and
/// their vectors are orthogonalized against each other. Vectors have unit
/// 2-norm. `values` must be sorted ascending.
std::vector<std::vector<double>> eigenvectors_real(const Matrix& a, std::span<const double> values,
                                                   double cluster_tol = 1e-10);

/// Eigenvalues of a real symmetric matrix, ascending. Householder
/// tridiagonalization followed by implicit QL with Wilkinson shifts.
std::vector<double> eigenvalues_symmetric(Matrix a);

/// Eigenvalues of a symmetric tridiagonal matrix, ascending (implicit QL).
/// `off[i]` couples rows i and i+1; off.size() == diag.size() - 1.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off);

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`
/// (Sturm sequence count).
std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x);

/// All eigenvalues strictly below `upper` by Sturm bisection, ascending.
std::vector<double> tridiagonal_eigenvalues_below(std::span<const double> diag,
                                                  std::span<const double> off, double upper);

/// Eigenvector for an (accurately known) eigenvalue of a symmetric
/// tridiagonal matrix by inverse iteration; unit 2-norm.
std::vector<double> tridiagonal_eigenvector(std::span<const double> diag, std::span<const double> off,
                                            double lambda);

/// Householder QR of a tall matrix for least-squares solves.
class LeastSquares {
 public:
  explicit LeastSquares(Matrix a);

  /// argmin_x |A x - rhs|_2.
  std::vector<double> solve(std::span<const double> rhs) const;

  /// 1-norm condition number of the triangular factor R (equal to the
  /// condition of A up to the orthogonal factor).
  double condition_estimate() const;

 private:
  Matrix qr_;                  // R in the upper triangle, reflectors below
  std::vector<double> beta_;   // reflector scalings
  std::vector<double> rdiag_;
};

}  // namespace qesband::linalg
