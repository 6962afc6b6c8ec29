#pragma once

// Rational nilpotent cones (relatively open, canonical primitive integral
// generators), their faces, conjugation, membership, and exact
// intersection in dimension <= 2.

#include <optional>
#include <string>
#include <vector>

#include "weakfan/domain.hpp"
#include "weakfan/splitting.hpp"

namespace weakfan {

struct NilpotentCone {
  // Canonical generators: primitive integral, pairwise commuting
  // nilpotents, linearly independent, lexicographically sorted. The cone
  // is span_{Q>0}{generators}; the empty list is the zero cone {0}.
  std::size_t ambient = 0;
  std::vector<Matrix> generators;

  std::size_t dim() const { return generators.size(); }
  bool is_zero() const { return generators.empty(); }
  std::size_t ambient_dim() const { return ambient; }
  std::string key() const;

  friend bool operator==(const NilpotentCone& a, const NilpotentCone& b) {
    return a.ambient == b.ambient && a.generators == b.generators;
  }
  friend bool operator!=(const NilpotentCone& a, const NilpotentCone& b) {
    return !(a == b);
  }
};

// Validates (g_Q membership, nilpotency, commutativity), rescales to
// primitive integral generators, reduces to extreme rays (dim <= 2), and
// sorts. Throws DomainError with a NotCommuting/NotNilpotent/NotInGq
// message on invalid input.
NilpotentCone make_cone(const PolarizedLattice& L, std::vector<Matrix> gens);

// All 2^k generator-subset faces, deduplicated, zero cone first.
std::vector<NilpotentCone> faces(const NilpotentCone& sigma);

bool in_gamma_group(const PolarizedLattice& L, const Matrix& gamma);

// Ad_gamma(sigma) for gamma in G(Z); throws DomainError("NotInGZ...") else.
NilpotentCone conjugate(const PolarizedLattice& L, const Matrix& gamma,
                        const NilpotentCone& sigma);

// Relative-interior membership: M = sum a_j N_j with all a_j > 0.
bool contains_point(const NilpotentCone& sigma, const Matrix& M);

// Closure membership: all a_j >= 0.
bool closure_contains_point(const NilpotentCone& sigma, const Matrix& M);

// Set-theoretic intersection of the two relatively open cones; nullopt is
// the empty set. Throws DomainError for inputs of dimension >= 3.
std::optional<NilpotentCone> intersect_cones(const NilpotentCone& a,
                                             const NilpotentCone& b);

// Subspace of g_C (matrices flattened row-major to ambient dim^2) mapping
// each V^{r,s} into V^{p+r,q+s}.
Subspace g_splitting_piece(const PolarizedLattice& L, const DeligneSplitting& S,
                           long p, long q);

// Matrix basis of a flattened subspace of g_C.
std::vector<Matrix> unflatten_basis(const Subspace& s, std::size_t n);

Vec flatten(const Matrix& m);

// Rescale a nonzero rational matrix to its primitive integral positive
// multiple (clear denominators, divide by content).
Matrix primitive_integral(const Matrix& m);

}  // namespace weakfan
