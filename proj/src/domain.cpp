#include "weakfan/domain.hpp"

#include <algorithm>

#include "weakfan/errors.hpp"

namespace weakfan {

void PolarizedLattice::validate() const {
  if (Q.rows() != dim || Q.cols() != dim)
    throw InputShapeError("lattice: Q must be dim x dim");
  if (!Q.is_rational()) throw InputShapeError("lattice: Q must be rational");
  const Matrix Qt = Q.transpose();
  const Matrix signed_Q = (weight % 2 == 0) ? Q : -Q;
  if (Qt != signed_Q)
    throw InputShapeError("lattice: Q is not (-1)^n-symmetric");
  if (!Q.inverse()) throw InputShapeError("lattice: Q is singular");
  if (hodge_numbers.empty()) throw InputShapeError("lattice: empty Hodge numbers");
  long total = 0;
  for (std::size_t i = 0; i < hodge_numbers.size(); ++i) {
    auto [p, h] = hodge_numbers[i];
    if (h <= 0) throw InputShapeError("lattice: nonpositive Hodge number");
    if (i > 0 && hodge_numbers[i - 1].first <= p)
      throw InputShapeError("lattice: Hodge numbers not strictly descending in p");
    total += h;
    if (hodge_number(weight - p) != h)
      throw InputShapeError("lattice: Hodge numbers not symmetric");
  }
  if (total != static_cast<long>(dim))
    throw InputShapeError("lattice: Hodge numbers do not sum to dim");
}

GaussRat PolarizedLattice::form(const Vec& u, const Vec& v) const {
  if (u.size() != dim || v.size() != dim)
    throw InputShapeError("lattice form: vector length mismatch");
  GaussRat acc;
  for (std::size_t i = 0; i < dim; ++i) {
    if (u[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      if (Q(i, j).is_zero() || v[j].is_zero()) continue;
      acc += u[i] * Q(i, j) * v[j];
    }
  }
  return acc;
}

long PolarizedLattice::hodge_number(long p) const {
  for (auto [q, h] : hodge_numbers)
    if (q == p) return h;
  return 0;
}

long PolarizedLattice::flag_dim(long p) const {
  long f = 0;
  for (auto [q, h] : hodge_numbers)
    if (q >= p) f += h;
  return f;
}

bool in_g_q(const Matrix& xi, const PolarizedLattice& L) {
  if (xi.rows() != L.dim || xi.cols() != L.dim)
    throw InputShapeError("in_g_q: matrix size mismatch");
  return (xi.transpose() * L.Q + L.Q * xi).is_zero();
}

std::vector<Matrix> g_q_basis(const PolarizedLattice& L) {
  const std::size_t n = L.dim;
  // Linear system xi^T Q + Q xi = 0 in the n^2 entries of xi,
  // unknown index k = a*n + b for entry xi(a, b).
  Matrix C(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      // (xi^T Q)_{ij} = sum_k xi(k, i) Q(k, j); (Q xi)_{ij} = sum_k Q(i, k) xi(k, j)
      for (std::size_t k = 0; k < n; ++k) {
        C(row, k * n + i) += L.Q(k, j);
        C(row, k * n + j) += L.Q(i, k);
      }
    }
  Matrix K = C.kernel_basis();
  std::vector<Matrix> basis;
  basis.reserve(K.rows());
  for (std::size_t r = 0; r < K.rows(); ++r) {
    Matrix xi(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) xi(a, b) = K(r, a * n + b);
    basis.push_back(std::move(xi));
  }
  return basis;
}

bool in_compact_dual(const PolarizedLattice& L, const HodgeFlag& F) {
  if (F.steps.ambient_dim() != L.dim)
    throw InputShapeError("in_compact_dual: flag ambient mismatch");
  if (F.steps.direction() != FiltDirection::Decreasing)
    throw InputShapeError("in_compact_dual: flag must be decreasing");
  const long lo = L.p_min(), hi = L.p_max();
  for (long p = lo; p <= hi + 1; ++p) {
    if (static_cast<long>(F.at(p).dim()) != L.flag_dim(p)) return false;
  }
  // First bilinear relation.
  for (long p = lo; p <= hi + 1; ++p) {
    const Subspace& A = F.at(p);
    const Subspace& B = F.at(L.weight - p + 1);
    for (std::size_t a = 0; a < A.dim(); ++a)
      for (std::size_t b = 0; b < B.dim(); ++b)
        if (!L.form(A.basis().row(a), B.basis().row(b)).is_zero()) return false;
  }
  return true;
}

GaussRat i_power(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return GaussRat(1);
    case 1: return GaussRat::i();
    case 2: return GaussRat(-1);
    default: return -GaussRat::i();
  }
}

Matrix hermitian_gram(const PolarizedLattice& L, const Matrix& basis,
                      const GaussRat& scale) {
  Matrix H(basis.rows(), basis.rows());
  for (std::size_t a = 0; a < basis.rows(); ++a)
    for (std::size_t b = 0; b < basis.rows(); ++b) {
      Vec vb = basis.row(b);
      for (auto& x : vb) x = x.conj();
      H(a, b) = scale * L.form(basis.row(a), vb);
    }
  return H;
}

bool in_period_domain(const PolarizedLattice& L, const HodgeFlag& F) {
  if (!in_compact_dual(L, F))
    throw DomainError("in_period_domain: flag is not in the compact dual");
  const long n = L.weight;
  const long lo = L.p_min(), hi = L.p_max();
  // V = F^p (+) conj(F^{n-p+1})
  for (long p = lo; p <= hi; ++p) {
    const Subspace& A = F.at(p);
    Subspace B = F.at(n - p + 1).conj();
    if (A.dim() + B.dim() != L.dim) return false;
    if (!A.intersect(B).is_zero()) return false;
  }
  // Positivity of i^{p-q} Q(v, conj v) on each H^{p,q}.
  for (long p = lo; p <= hi; ++p) {
    const long q = n - p;
    Subspace piece = F.at(p).intersect(F.at(q).conj());
    if (static_cast<long>(piece.dim()) != L.hodge_number(p)) return false;
    if (piece.is_zero()) continue;
    if (!positivity_check(hermitian_gram(L, piece.basis(), i_power(p - q))))
      return false;
  }
  return true;
}

}  // namespace weakfan
