#include "weakfan/subspace.hpp"

#include <algorithm>

#include "weakfan/errors.hpp"

namespace weakfan {

Subspace Subspace::span(std::size_t ambient_dim, const Matrix& rows) {
  if (!rows.empty() && rows.cols() != ambient_dim)
    throw InputShapeError("subspace span: ambient dimension mismatch");
  Subspace s(ambient_dim);
  if (rows.empty()) return s;
  Matrix r = rows;
  std::size_t rank = r.rref_in_place().size();
  Matrix basis(rank, ambient_dim);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < ambient_dim; ++j) basis(i, j) = r(i, j);
  s.basis_ = std::move(basis);
  return s;
}

Subspace Subspace::span_of(const std::vector<Vec>& vectors, std::size_t ambient_dim) {
  if (vectors.empty()) return Subspace(ambient_dim);
  return span(ambient_dim, Matrix::from_rows(vectors));
}

Subspace Subspace::full(std::size_t ambient_dim) {
  Subspace s(ambient_dim);
  s.basis_ = Matrix::identity(ambient_dim);
  return s;
}

bool Subspace::contains(const Vec& v) const {
  if (v.size() != ambient_)
    throw InputShapeError("subspace contains: ambient dimension mismatch");
  Matrix stacked = basis_.vstack(Matrix::row_vector(v));
  return stacked.rank() == dim();
}

bool Subspace::contains(const Subspace& o) const {
  if (o.ambient_ != ambient_)
    throw InputShapeError("subspace contains: ambient dimension mismatch");
  if (o.dim() > dim()) return false;
  Matrix stacked = basis_.vstack(o.basis_);
  return stacked.rank() == dim();
}

Subspace Subspace::sum(const Subspace& o) const {
  if (o.ambient_ != ambient_)
    throw InputShapeError("subspace sum: ambient dimension mismatch");
  return span(ambient_, basis_.vstack(o.basis_));
}

Subspace Subspace::intersect(const Subspace& o) const {
  if (o.ambient_ != ambient_)
    throw InputShapeError("subspace intersect: ambient dimension mismatch");
  // v ∈ U ∩ W iff v is annihilated by ann(U) ∪ ann(W).
  Matrix annU = basis_.kernel_basis();
  Matrix annW = o.basis_.kernel_basis();
  Matrix functionals = annU.vstack(annW);
  if (functionals.empty()) return full(ambient_);
  return span(ambient_, functionals.kernel_basis());
}

Subspace Subspace::conj() const {
  Subspace s(ambient_);
  s.basis_ = basis_.conj().rref();
  // conj of an RREF basis is already in RREF with the same pivots, but
  // normalize anyway to keep the canonical-form invariant self-evident.
  std::size_t rank = s.basis_.rank();
  Matrix b(rank, ambient_);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < ambient_; ++j) b(i, j) = s.basis_(i, j);
  s.basis_ = std::move(b);
  return s;
}

Subspace Subspace::apply(const Matrix& m) const {
  if (m.cols() != ambient_)
    throw InputShapeError("subspace apply: map shape mismatch");
  if (is_zero()) return Subspace(m.rows());
  return span(m.rows(), (m * basis_.transpose()).transpose());
}

Vec Subspace::coordinates(const Vec& v) const {
  auto sol = solve_linear(basis_.transpose(), v);
  if (!sol) throw DomainError("coordinates: vector not in subspace");
  return sol->particular;
}

QuotientSpace::QuotientSpace(Subspace denominator, Subspace numerator)
    : den_(std::move(denominator)), num_(std::move(numerator)) {
  if (den_.ambient_dim() != num_.ambient_dim())
    throw InputShapeError("quotient: ambient dimension mismatch");
  if (!num_.contains(den_)) throw DomainError("quotient: denominator not contained");
  // Pivot columns of the canonical bases; den pivots ⊆ num pivots.
  auto pivot_cols = [](const Matrix& b) {
    std::vector<std::size_t> p;
    for (std::size_t i = 0; i < b.rows(); ++i) {
      std::size_t j = 0;
      while (j < b.cols() && b(i, j).is_zero()) ++j;
      p.push_back(j);
    }
    return p;
  };
  auto np = pivot_cols(num_.basis());
  auto dp = pivot_cols(den_.basis());
  std::vector<Vec> lifts;
  for (std::size_t i = 0; i < np.size(); ++i) {
    if (std::find(dp.begin(), dp.end(), np[i]) == dp.end())
      lifts.push_back(num_.basis().row(i));
  }
  lift_ = lifts.empty() ? Matrix(0, num_.ambient_dim()) : Matrix::from_rows(lifts);
}

Vec QuotientSpace::project(const Vec& v) const {
  if (!num_.contains(v)) throw DomainError("quotient project: vector outside numerator");
  // v = lift^T q + den^T a; solve for (q, a).
  Matrix A = lift_.transpose().hstack(den_.basis().transpose());
  auto sol = solve_linear(A, v);
  if (!sol) throw DomainError("quotient project: inconsistent decomposition");
  Vec q(dim());
  for (std::size_t i = 0; i < dim(); ++i) q[i] = sol->particular[i];
  return q;
}

Vec QuotientSpace::lift_vector(const Vec& q) const {
  if (q.size() != dim()) throw InputShapeError("quotient lift: coordinate length");
  Vec v(num_.ambient_dim());
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += q[i] * lift_(i, j);
  return v;
}

Matrix QuotientSpace::induced_map(const Matrix& m, const QuotientSpace& target) const {
  Matrix out(target.dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    Vec img = m.apply(lift_.row(i));
    Vec q = target.project(img);
    for (std::size_t r = 0; r < target.dim(); ++r) out(r, i) = q[r];
  }
  return out;
}

}  // namespace weakfan
