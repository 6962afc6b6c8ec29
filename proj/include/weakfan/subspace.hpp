#pragma once

// Subspaces of Q(i)^n with a canonical reduced-echelon row basis, so that
// equality of subspaces is equality of representations.

#include <string>
#include <vector>

#include "weakfan/matrix.hpp"

namespace weakfan {

class Subspace {
 public:
  Subspace() : ambient_(0) {}
  explicit Subspace(std::size_t ambient_dim) : ambient_(ambient_dim), basis_(0, ambient_dim) {}

  // Span of the rows of `rows` (need not be independent).
  static Subspace span(std::size_t ambient_dim, const Matrix& rows);
  static Subspace span_of(const std::vector<Vec>& vectors, std::size_t ambient_dim);
  static Subspace zero(std::size_t ambient_dim) { return Subspace(ambient_dim); }
  static Subspace full(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }  // canonical RREF rows
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_; }

  bool contains(const Vec& v) const;
  bool contains(const Subspace& o) const;
  Subspace sum(const Subspace& o) const;
  Subspace intersect(const Subspace& o) const;
  Subspace conj() const;

  // Image under a linear map (matrix acting on column vectors).
  Subspace apply(const Matrix& m) const;

  // Coordinates of v in the canonical basis; throws DomainError if v outside.
  Vec coordinates(const Vec& v) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  std::string str() const { return basis_.str(); }

 private:
  std::size_t ambient_;
  Matrix basis_;
};

// Nested quotient B/A (A ⊆ B ⊆ Q(i)^n): a lift basis plus exact projection.
// The lift rows are the canonical-basis rows of B whose pivots are not
// pivots of A; when B and A are rational the lifts are rational, so complex
// conjugation acts entrywise on quotient coordinates.
class QuotientSpace {
 public:
  QuotientSpace() = default;
  QuotientSpace(Subspace denominator, Subspace numerator);

  std::size_t dim() const { return lift_.rows(); }
  const Matrix& lift() const { return lift_; }
  const Subspace& denominator() const { return den_; }
  const Subspace& numerator() const { return num_; }

  // Quotient coordinates of [v] for v in the numerator.
  Vec project(const Vec& v) const;
  // Representative in the ambient space of a quotient-coordinate vector.
  Vec lift_vector(const Vec& q) const;
  // Matrix of the endomorphism induced on this quotient by `m`
  // (requires m(num) ⊆ num + den; columns act on quotient coordinates).
  Matrix induced_map(const Matrix& m, const QuotientSpace& target) const;

 private:
  Subspace den_, num_;
  Matrix lift_;   // dim x ambient rows
};

}  // namespace weakfan
