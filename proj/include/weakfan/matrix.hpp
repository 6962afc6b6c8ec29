#pragma once

// Dense matrices over the Gaussian rationals, plus the exact solvers the
// rest of the library is built on: reduced row echelon form, linear-system
// solving with kernel bases, image/kernel of matrix powers, and the
// Sylvester positivity test for Hermitian matrices.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "weakfan/rational.hpp"

namespace weakfan {

using Vec = std::vector<GaussRat>;

class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<GaussRat> entries);

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix from_rows(const std::vector<Vec>& rows);
  static Matrix col_vector(const Vec& v);
  static Matrix row_vector(const Vec& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  const GaussRat& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
  GaussRat& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }

  Vec row(std::size_t i) const;
  Vec col(std::size_t j) const;

  bool is_zero() const;
  bool is_rational() const;  // all imaginary parts vanish
  bool is_square() const { return rows_ == cols_; }

  Matrix transpose() const;
  Matrix conj() const;
  Matrix conj_transpose() const { return conj().transpose(); }
  Matrix operator-() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const GaussRat& s, Matrix m);
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Vec apply(const Vec& v) const;  // matrix * column vector
  Matrix power(std::size_t k) const;
  Matrix commutator(const Matrix& o) const;  // [this, o]

  GaussRat det() const;
  std::optional<Matrix> inverse() const;

  // Stack rows of `o` below this matrix.
  Matrix vstack(const Matrix& o) const;
  Matrix hstack(const Matrix& o) const;

  // In-place reduced row echelon form; returns pivot column indices.
  std::vector<std::size_t> rref_in_place();
  Matrix rref() const;
  std::size_t rank() const;

  // Basis of the right kernel {x : A x = 0}, one kernel vector per row.
  Matrix kernel_basis() const;

  std::string str() const;  // canonical; usable as a hash/dedup key

 private:
  std::size_t rows_, cols_;
  std::vector<GaussRat> e_;
};

struct LinearSolution {
  Vec particular;     // one exact solution of A x = b
  Matrix kernel;      // rows span {x : A x = 0}
};

// Exact solve; nullopt iff rank([A|b]) > rank(A).
std::optional<LinearSolution> solve_linear(const Matrix& A, const Vec& b);

struct ImageKernel {
  // Both stored as row-basis matrices in reduced echelon form.
  Matrix image;
  Matrix kernel;
};

// im N^k and ker N^k for square N; k = 0 gives (full space, {0}).
ImageKernel map_image_kernel(const Matrix& N, std::size_t k);

// True iff the Hermitian matrix H is positive definite (leading principal
// minors, all computed exactly). Throws InputShapeError when H != H*.
bool positivity_check(const Matrix& H);

bool is_nilpotent(const Matrix& N);

// exp(N) for nilpotent N, as the (finite) series.
Matrix nilpotent_exp(const Matrix& N);

}  // namespace weakfan
