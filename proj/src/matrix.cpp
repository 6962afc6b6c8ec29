#include "weakfan/matrix.hpp"

#include <sstream>

#include "weakfan/errors.hpp"

namespace weakfan {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<GaussRat> entries)
    : rows_(rows), cols_(cols), e_(std::move(entries)) {
  if (e_.size() != rows_ * cols_)
    throw InputShapeError("matrix entry count does not match rows*cols");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = GaussRat(1);
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) return Matrix();
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_)
      throw InputShapeError("ragged row lengths");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::col_vector(const Vec& v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

Matrix Matrix::row_vector(const Vec& v) {
  Matrix m(1, v.size());
  for (std::size_t j = 0; j < v.size(); ++j) m(0, j) = v[j];
  return m;
}

Vec Matrix::row(std::size_t i) const {
  Vec v(cols_);
  for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
  return v;
}

Vec Matrix::col(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

bool Matrix::is_zero() const {
  for (const auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

bool Matrix::is_rational() const {
  for (const auto& x : e_)
    if (!x.im.is_zero()) return false;
  return true;
}

Matrix Matrix::transpose() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Matrix Matrix::conj() const {
  Matrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).conj();
  return m;
}

Matrix Matrix::operator-() const {
  Matrix m(rows_, cols_);
  for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = -e_[k];
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw InputShapeError("matrix addition shape mismatch");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw InputShapeError("matrix subtraction shape mismatch");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw InputShapeError("matrix product shape mismatch");
  Matrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const GaussRat& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (b(k, j).is_zero()) continue;
        m(i, j) += aik * b(k, j);
      }
    }
  return m;
}

Matrix operator*(const GaussRat& s, Matrix m) {
  for (auto& x : m.e_) x *= s;
  return m;
}

Vec Matrix::apply(const Vec& v) const {
  if (v.size() != cols_) throw InputShapeError("matrix-vector shape mismatch");
  Vec out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(i, j).is_zero() && !v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
  return out;
}

Matrix Matrix::power(std::size_t k) const {
  if (!is_square()) throw InputShapeError("power of non-square matrix");
  Matrix acc = Matrix::identity(rows_);
  for (std::size_t i = 0; i < k; ++i) acc = acc * (*this);
  return acc;
}

Matrix Matrix::commutator(const Matrix& o) const { return (*this) * o - o * (*this); }

Matrix Matrix::vstack(const Matrix& o) const {
  if (empty()) return o;
  if (o.empty()) return *this;
  if (cols_ != o.cols_) throw InputShapeError("vstack column mismatch");
  Matrix m(rows_ + o.rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
  for (std::size_t i = 0; i < o.rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(rows_ + i, j) = o(i, j);
  return m;
}

Matrix Matrix::hstack(const Matrix& o) const {
  if (empty()) return o;
  if (o.empty()) return *this;
  if (rows_ != o.rows_) throw InputShapeError("hstack row mismatch");
  Matrix m(rows_, cols_ + o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < o.cols_; ++j) m(i, cols_ + j) = o(i, j);
  }
  return m;
}

std::vector<std::size_t> Matrix::rref_in_place() {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t sel = r;
    while (sel < rows_ && (*this)(sel, c).is_zero()) ++sel;
    if (sel == rows_) continue;
    if (sel != r)
      for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(r, j), (*this)(sel, j));
    GaussRat inv = GaussRat(1) / (*this)(r, c);
    for (std::size_t j = c; j < cols_; ++j) (*this)(r, j) *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || (*this)(i, c).is_zero()) continue;
      GaussRat f = (*this)(i, c);
      for (std::size_t j = c; j < cols_; ++j) (*this)(i, j) -= f * (*this)(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

Matrix Matrix::rref() const {
  Matrix m = *this;
  m.rref_in_place();
  return m;
}

std::size_t Matrix::rank() const {
  Matrix m = *this;
  return m.rref_in_place().size();
}

Matrix Matrix::kernel_basis() const {
  Matrix R = *this;
  std::vector<std::size_t> pivots = R.rref_in_place();
  std::vector<bool> is_pivot(cols_, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vec> rows;
  for (std::size_t f = 0; f < cols_; ++f) {
    if (is_pivot[f]) continue;
    Vec v(cols_);
    v[f] = GaussRat(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -R(r, f);
    rows.push_back(std::move(v));
  }
  if (rows.empty()) return Matrix(0, cols_);
  return Matrix::from_rows(rows);
}

GaussRat Matrix::det() const {
  if (!is_square()) throw InputShapeError("determinant of non-square matrix");
  Matrix m = *this;
  GaussRat d(1);
  std::size_t n = rows_;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = c;
    while (sel < n && m(sel, c).is_zero()) ++sel;
    if (sel == n) return GaussRat(0);
    if (sel != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(sel, j));
      d = -d;
    }
    d *= m(c, c);
    GaussRat inv = GaussRat(1) / m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      GaussRat f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

std::optional<Matrix> Matrix::inverse() const {
  if (!is_square()) throw InputShapeError("inverse of non-square matrix");
  Matrix aug = hstack(Matrix::identity(rows_));
  auto pivots = aug.rref_in_place();
  if (pivots.size() != rows_) return std::nullopt;
  Matrix inv(rows_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < rows_; ++j) inv(i, j) = aug(i, cols_ + j);
  return inv;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << rows_ << "x" << cols_ << "[";
  for (std::size_t k = 0; k < e_.size(); ++k) {
    if (k) os << ",";
    os << e_[k].str();
  }
  os << "]";
  return os.str();
}

std::optional<LinearSolution> solve_linear(const Matrix& A, const Vec& b) {
  if (b.size() != A.rows()) throw InputShapeError("solve_linear: rhs length mismatch");
  Matrix aug = A.hstack(Matrix::col_vector(b));
  auto pivots = aug.rref_in_place();
  // Inconsistent iff a pivot lands in the augmented column.
  if (!pivots.empty() && pivots.back() == A.cols()) return std::nullopt;
  Vec x(A.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, A.cols());
  return LinearSolution{std::move(x), A.kernel_basis()};
}

ImageKernel map_image_kernel(const Matrix& N, std::size_t k) {
  if (!N.is_square()) throw InputShapeError("map_image_kernel: non-square matrix");
  Matrix P = N.power(k);
  // Rows of P^T span the column space (image) of P.
  Matrix image = P.transpose().rref();
  // Drop zero rows.
  std::size_t rk = image.rank();
  Matrix img(rk, N.cols());
  for (std::size_t i = 0; i < rk; ++i)
    for (std::size_t j = 0; j < N.cols(); ++j) img(i, j) = image(i, j);
  Matrix kernel = P.kernel_basis().rref();
  return ImageKernel{std::move(img), std::move(kernel)};
}

bool positivity_check(const Matrix& H) {
  if (!H.is_square()) throw InputShapeError("positivity_check: non-square matrix");
  if (H != H.conj_transpose())
    throw InputShapeError("positivity_check: matrix is not Hermitian");
  for (std::size_t k = 1; k <= H.rows(); ++k) {
    Matrix minor(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor(i, j) = H(i, j);
    GaussRat d = minor.det();
    // Hermitian leading minors are real.
    if (!d.im.is_zero())
      throw InputShapeError("positivity_check: non-real principal minor");
    if (d.re.sign() <= 0) return false;
  }
  return true;
}

bool is_nilpotent(const Matrix& N) {
  if (!N.is_square()) throw InputShapeError("is_nilpotent: non-square matrix");
  return N.power(N.rows()).is_zero();
}

Matrix nilpotent_exp(const Matrix& N) {
  if (!is_nilpotent(N)) throw NotNilpotentError("nilpotent_exp: matrix is not nilpotent");
  Matrix acc = Matrix::identity(N.rows());
  Matrix term = Matrix::identity(N.rows());
  for (std::size_t k = 1; k <= N.rows(); ++k) {
    term = term * N;
    if (term.is_zero()) break;
    term = (GaussRat(Rat(1, static_cast<long>(k))) * term);
    acc += term;
  }
  return acc;
}

}  // namespace weakfan
