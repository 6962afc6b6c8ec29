#include "weakfan/cones.hpp"

#include <algorithm>

#include "weakfan/errors.hpp"

namespace weakfan {

namespace {

bool gauss_less(const GaussRat& a, const GaussRat& b) {
  if (a.re != b.re) return a.re < b.re;
  return a.im < b.im;
}

bool matrix_lex_less(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  if (a.cols() != b.cols()) return a.cols() < b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) return gauss_less(a(i, j), b(i, j));
    }
  return false;
}

struct Dir2 {
  Rat x, y;
};

Rat det2(const Dir2& u, const Dir2& v) { return u.x * v.y - u.y * v.x; }

bool inside_closed(const Dir2& p, const Dir2& lo, const Dir2& hi) {
  return det2(lo, p).sign() >= 0 && det2(p, hi).sign() >= 0;
}

bool inside_open(const Dir2& p, const Dir2& lo, const Dir2& hi) {
  return det2(lo, p).sign() > 0 && det2(p, hi).sign() > 0;
}

Rat real_part_checked(const GaussRat& x) {
  if (!x.im.is_zero()) throw DomainError("expected a real coefficient");
  return x.re;
}

}  // namespace

Vec flatten(const Matrix& m) {
  Vec v(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m(i, j);
  return v;
}

std::vector<Matrix> unflatten_basis(const Subspace& s, std::size_t n) {
  std::vector<Matrix> out;
  out.reserve(s.dim());
  for (std::size_t r = 0; r < s.dim(); ++r) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = s.basis()(r, i * n + j);
    out.push_back(std::move(m));
  }
  return out;
}

Matrix primitive_integral(const Matrix& m) {
  if (!m.is_rational()) throw InputShapeError("primitive_integral: complex matrix");
  if (m.is_zero()) throw InputShapeError("primitive_integral: zero matrix");
  mpz_class den_lcm = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      den_lcm = lcm(den_lcm, m(i, j).re.den());
  mpz_class content = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      mpz_class num = m(i, j).re.num() * (den_lcm / m(i, j).re.den());
      content = gcd(content, num);
    }
  Matrix out(m.rows(), m.cols());
  Rat factor(mpq_class(den_lcm, content));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(i, j) = GaussRat(m(i, j).re * factor);
  return out;
}

std::string NilpotentCone::key() const {
  std::string k = "cone" + std::to_string(ambient) + "[";
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (i) k += ";";
    k += generators[i].str();
  }
  return k + "]";
}

NilpotentCone make_cone(const PolarizedLattice& L, std::vector<Matrix> gens) {
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Matrix& g = gens[i];
    if (g.rows() != L.dim || g.cols() != L.dim)
      throw InputShapeError("make_cone: generator size mismatch");
    if (!g.is_rational())
      throw DomainError("NotInGq(" + std::to_string(i) + "): complex generator");
    if (!in_g_q(g, L))
      throw DomainError("NotInGq(" + std::to_string(i) + ")");
    if (!is_nilpotent(g))
      throw DomainError("NotNilpotent(" + std::to_string(i) + ")");
  }
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!gens[i].commutator(gens[j]).is_zero())
        throw DomainError("NotCommuting(" + std::to_string(i) + "," +
                          std::to_string(j) + ")");

  std::vector<Matrix> prim;
  for (const Matrix& g : gens) {
    if (g.is_zero()) continue;  // zero generators contribute nothing
    Matrix p = primitive_integral(g);
    if (std::find(prim.begin(), prim.end(), p) == prim.end()) prim.push_back(p);
  }
  NilpotentCone cone;
  cone.ambient = L.dim;
  if (prim.empty()) return cone;

  std::vector<Vec> flat;
  flat.reserve(prim.size());
  for (const Matrix& g : prim) flat.push_back(flatten(g));
  const std::size_t rank =
      Subspace::span_of(flat, L.dim * L.dim).dim();

  if (rank == 1) {
    for (std::size_t i = 1; i < prim.size(); ++i)
      if (prim[i] != prim[0])
        throw DomainError("make_cone: cone contains a line (not salient)");
    cone.generators = {prim[0]};
    return cone;
  }

  if (rank == 2) {
    // Chart on the plane spanned by the first two independent generators.
    Matrix B1 = prim[0];
    std::size_t second = 1;
    while (second < prim.size() &&
           Subspace::span_of({flat[0], flat[second]}, L.dim * L.dim).dim() < 2)
      ++second;
    Matrix B2 = prim[second];
    Matrix chart =
        Matrix::col_vector(flatten(B1)).hstack(Matrix::col_vector(flatten(B2)));
    std::vector<Dir2> coords;
    for (const Vec& f : flat) {
      auto sol = solve_linear(chart, f);
      if (!sol) throw DomainError("make_cone: generator outside chart plane");
      coords.push_back(Dir2{real_part_checked(sol->particular[0]),
                            real_part_checked(sol->particular[1])});
    }
    // Extreme pair: all generators in the closed sector it spans.
    for (std::size_t i = 0; i < prim.size(); ++i)
      for (std::size_t j = 0; j < prim.size(); ++j) {
        if (i == j || det2(coords[i], coords[j]).sign() <= 0) continue;
        bool all_in = true;
        for (std::size_t k = 0; k < prim.size() && all_in; ++k)
          all_in = inside_closed(coords[k], coords[i], coords[j]);
        if (all_in) {
          std::vector<Matrix> ext = {prim[i], prim[j]};
          std::sort(ext.begin(), ext.end(), matrix_lex_less);
          cone.generators = std::move(ext);
          return cone;
        }
      }
    throw DomainError("make_cone: cone is not salient");
  }

  if (rank != prim.size())
    throw DomainError(
        "make_cone: redundant generators are unsupported in dimension >= 3");
  std::sort(prim.begin(), prim.end(), matrix_lex_less);
  cone.generators = std::move(prim);
  return cone;
}

std::vector<NilpotentCone> faces(const NilpotentCone& sigma) {
  const std::size_t k = sigma.generators.size();
  std::vector<NilpotentCone> out;
  for (std::size_t mask = 0; mask < (1u << k); ++mask) {
    NilpotentCone f;
    f.ambient = sigma.ambient;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) f.generators.push_back(sigma.generators[i]);
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const NilpotentCone& a, const NilpotentCone& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a.key() < b.key();
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool in_gamma_group(const PolarizedLattice& L, const Matrix& gamma) {
  if (gamma.rows() != L.dim || gamma.cols() != L.dim) return false;
  for (std::size_t i = 0; i < L.dim; ++i)
    for (std::size_t j = 0; j < L.dim; ++j) {
      const GaussRat& e = gamma(i, j);
      if (!e.im.is_zero() || !e.re.is_integer()) return false;
    }
  if (gamma.transpose() * L.Q * gamma != L.Q) return false;
  GaussRat d = gamma.det();
  return d == GaussRat(1) || d == GaussRat(-1);
}

NilpotentCone conjugate(const PolarizedLattice& L, const Matrix& gamma,
                        const NilpotentCone& sigma) {
  if (!in_gamma_group(L, gamma))
    throw DomainError("NotInGZ: conjugator is not an integral Q-automorphism");
  if (sigma.is_zero()) return sigma;
  auto inv = gamma.inverse();
  std::vector<Matrix> gens;
  gens.reserve(sigma.generators.size());
  for (const Matrix& N : sigma.generators) gens.push_back(gamma * N * *inv);
  return make_cone(L, std::move(gens));
}

namespace {

// Coefficients of M in the generator basis, if M lies in the linear span.
std::optional<std::vector<Rat>> span_coefficients(const NilpotentCone& sigma,
                                                  const Matrix& M) {
  Matrix A(M.rows() * M.cols(), sigma.dim());
  for (std::size_t c = 0; c < sigma.dim(); ++c) {
    Vec f = flatten(sigma.generators[c]);
    for (std::size_t r = 0; r < f.size(); ++r) A(r, c) = f[r];
  }
  auto sol = solve_linear(A, flatten(M));
  if (!sol) return std::nullopt;
  std::vector<Rat> out;
  out.reserve(sigma.dim());
  for (const GaussRat& x : sol->particular) {
    if (!x.im.is_zero()) return std::nullopt;
    out.push_back(x.re);
  }
  return out;
}

}  // namespace

bool contains_point(const NilpotentCone& sigma, const Matrix& M) {
  if (sigma.is_zero()) return M.is_zero();
  if (M.is_zero()) return false;
  auto coeff = span_coefficients(sigma, M);
  if (!coeff) return false;
  for (const Rat& c : *coeff)
    if (c.sign() <= 0) return false;
  return true;
}

bool closure_contains_point(const NilpotentCone& sigma, const Matrix& M) {
  if (M.is_zero()) return true;
  if (sigma.is_zero()) return false;
  auto coeff = span_coefficients(sigma, M);
  if (!coeff) return false;
  for (const Rat& c : *coeff)
    if (c.sign() < 0) return false;
  return true;
}

std::optional<NilpotentCone> intersect_cones(const NilpotentCone& a,
                                             const NilpotentCone& b) {
  if (a.dim() > 2 || b.dim() > 2)
    throw DomainError("UnsupportedDimension: intersect_cones requires dim <= 2");
  if (a.ambient != b.ambient)
    throw InputShapeError("intersect_cones: ambient mismatch");
  if (a.is_zero() && b.is_zero()) return a;
  if (a.is_zero() || b.is_zero()) return std::nullopt;

  const std::size_t n = a.ambient;
  std::vector<Vec> fa, fb;
  for (const Matrix& g : a.generators) fa.push_back(flatten(g));
  for (const Matrix& g : b.generators) fb.push_back(flatten(g));
  Subspace Sa = Subspace::span_of(fa, n * n);
  Subspace Sb = Subspace::span_of(fb, n * n);
  Subspace Lsp = Sa.intersect(Sb);

  if (Lsp.dim() == 0) return std::nullopt;

  if (Lsp.dim() == 1) {
    Matrix u(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) u(i, j) = Lsp.basis()(0, i * n + j);
    if (!u.is_rational()) return std::nullopt;
    Matrix p = primitive_integral(u);
    for (const Matrix& cand : {p, Matrix(-p)}) {
      if (contains_point(a, cand) && contains_point(b, cand)) {
        NilpotentCone ray;
        ray.ambient = n;
        ray.generators = {cand};
        return ray;
      }
    }
    return std::nullopt;
  }

  // Two-dimensional intersection: both cones are open sectors of the same
  // plane. Work in the chart of a's generators, where a = {x > 0, y > 0}.
  Matrix chart = Matrix::col_vector(fa[0]).hstack(Matrix::col_vector(fa[1]));
  auto chart_coords = [&](const Vec& f) -> Dir2 {
    auto sol = solve_linear(chart, f);
    if (!sol) throw DomainError("intersect_cones: vector outside chart plane");
    return Dir2{real_part_checked(sol->particular[0]),
                real_part_checked(sol->particular[1])};
  };
  Dir2 r1{Rat(1), Rat(0)}, r2{Rat(0), Rat(1)};
  Dir2 s1 = chart_coords(fb[0]);
  Dir2 s2 = chart_coords(fb[1]);
  if (det2(s1, s2).sign() < 0) std::swap(s1, s2);

  Dir2 lo = inside_closed(s1, r1, r2) ? s1 : r1;
  Dir2 hi = inside_closed(s2, r1, r2) ? s2 : r2;
  if (det2(lo, hi).sign() <= 0) return std::nullopt;
  Dir2 mid{lo.x + hi.x, lo.y + hi.y};
  if (!inside_open(mid, r1, r2) || !inside_open(mid, s1, s2)) return std::nullopt;

  auto to_matrix = [&](const Dir2& d) {
    Matrix m = GaussRat(d.x) * a.generators[0];
    m += GaussRat(d.y) * a.generators[1];
    return primitive_integral(m);
  };
  std::vector<Matrix> gens = {to_matrix(lo), to_matrix(hi)};
  std::sort(gens.begin(), gens.end(), matrix_lex_less);
  NilpotentCone out;
  out.ambient = n;
  out.generators = std::move(gens);
  return out;
}

Subspace g_splitting_piece(const PolarizedLattice& L, const DeligneSplitting& S,
                           long p, long q) {
  const std::size_t n = L.dim;
  std::vector<Matrix> G = g_q_basis(L);
  const std::size_t g = G.size();

  std::vector<Vec> rows;
  for (const auto& [pq, piece] : S.pieces) {
    const Subspace target = S.piece(pq.first + p, pq.second + q);
    Matrix ann = target.is_zero() ? Matrix::identity(n)
                                  : target.basis().kernel_basis();
    for (std::size_t u = 0; u < piece.dim(); ++u) {
      Vec vu = piece.basis().row(u);
      // Precompute G_k vu once per generator.
      std::vector<Vec> imgs(g);
      for (std::size_t k = 0; k < g; ++k) imgs[k] = G[k].apply(vu);
      for (std::size_t f = 0; f < ann.rows(); ++f) {
        Vec row(g);
        for (std::size_t k = 0; k < g; ++k) {
          GaussRat acc;
          for (std::size_t c = 0; c < n; ++c) acc += ann(f, c) * imgs[k][c];
          row[k] = acc;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  Matrix C = rows.empty() ? Matrix(0, g) : Matrix::from_rows(rows);
  Matrix K = C.kernel_basis();
  std::vector<Vec> flat;
  for (std::size_t r = 0; r < K.rows(); ++r) {
    Matrix xi(n, n);
    for (std::size_t k = 0; k < g; ++k) {
      if (K(r, k).is_zero()) continue;
      xi += K(r, k) * G[k];
    }
    flat.push_back(flatten(xi));
  }
  return Subspace::span_of(flat, n * n);
}

}  // namespace weakfan
