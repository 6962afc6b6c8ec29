#pragma once

// The fixed polarized lattice, its Lie algebra, and membership tests for
// the compact dual and the period domain.

#include <vector>

#include "weakfan/filtration.hpp"
#include "weakfan/matrix.hpp"

namespace weakfan {

struct PolarizedLattice {
  std::size_t dim = 0;
  Matrix Q;      // rational, invertible, Q^T = (-1)^n Q
  long weight = 0;
  // (p, h^{p, n-p}) with h > 0, descending in p, symmetric under p -> n-p.
  std::vector<std::pair<long, long>> hodge_numbers;

  void validate() const;  // throws InputShapeError
  GaussRat form(const Vec& u, const Vec& v) const;  // u^T Q v
  long hodge_number(long p) const;
  long flag_dim(long p) const;  // f^p = sum_{r >= p} h^{r, n-r}
  long p_max() const { return hodge_numbers.front().first; }
  long p_min() const { return hodge_numbers.back().first; }
};

struct HodgeFlag {
  Filtration steps;  // decreasing, over the Gaussian rationals

  HodgeFlag() = default;
  explicit HodgeFlag(Filtration f) : steps(std::move(f)) {}
  const Subspace& at(long p) const { return steps.at(p); }
  HodgeFlag apply(const Matrix& g) const { return HodgeFlag(steps.apply(g)); }
  std::string key() const { return steps.str(); }

  friend bool operator==(const HodgeFlag& a, const HodgeFlag& b) {
    return a.steps == b.steps;
  }
};

// True iff Q(xi u, v) + Q(u, xi v) = 0 identically, i.e. xi^T Q + Q xi = 0.
bool in_g_q(const Matrix& xi, const PolarizedLattice& L);

// Basis of g_Q, in a deterministic order.
std::vector<Matrix> g_q_basis(const PolarizedLattice& L);

// Flag has the lattice's dimension profile and satisfies the first
// bilinear relation Q(F^p, F^{n-p+1}) = 0.
bool in_compact_dual(const PolarizedLattice& L, const HodgeFlag& F);

// Second bilinear relation on top of in_compact_dual: V = F^p (+) conj
// F^{n-p+1} and i^{p-q} Q(v, conj v) positive definite on each
// H^{p,q} = F^p n conj F^q. Precondition: in_compact_dual.
bool in_period_domain(const PolarizedLattice& L, const HodgeFlag& F);

// i^k as a Gaussian rational (k may be negative).
GaussRat i_power(long k);

// Hermitian Gram matrix H_ab = scale * Q(u_a, conj(u_b)) for the rows of
// `basis`; shared by the period-domain and polarization tests.
Matrix hermitian_gram(const PolarizedLattice& L, const Matrix& basis,
                      const GaussRat& scale);

}  // namespace weakfan
