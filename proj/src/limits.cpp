#include "weakfan/limits.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

#include "weakfan/errors.hpp"

namespace weakfan {

namespace {

// Deterministic splitmix64 stream for interior sampling.
struct SplitMix {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

WeightFiltration weight_filtration(const Matrix& N) {
  if (!N.is_square()) throw InputShapeError("weight_filtration: non-square matrix");
  const std::size_t n = N.rows();
  if (!N.power(n).is_zero())
    throw NotNilpotentError("weight_filtration: matrix is not nilpotent");

  // Nilpotency index d: smallest d with N^{d+1} = 0.
  std::size_t d = 0;
  while (!N.power(d + 1).is_zero()) ++d;

  std::vector<Subspace> ker(d + 2), im(d + 2);
  for (std::size_t t = 0; t <= d + 1; ++t) {
    auto ik = map_image_kernel(N, t);
    im[t] = Subspace::span(n, ik.image);
    ker[t] = Subspace::span(n, ik.kernel);
  }
  auto ker_at = [&](long t) -> const Subspace& {
    static const Subspace dummy;  // unused
    (void)dummy;
    return ker[std::min<std::size_t>(static_cast<std::size_t>(t), d + 1)];
  };
  auto im_at = [&](long t) {
    if (t > static_cast<long>(d)) return Subspace::zero(n);
    return im[static_cast<std::size_t>(t)];
  };

  // W_k = sum_{j >= max(k,0)} ker N^{j+1} n im N^{j-k}.
  std::vector<std::pair<long, Subspace>> steps;
  for (long k = -static_cast<long>(d) - 1; k <= static_cast<long>(d); ++k) {
    Subspace acc = Subspace::zero(n);
    for (long j = std::max<long>(k, 0); j <= static_cast<long>(d); ++j)
      acc = acc.sum(ker_at(j + 1).intersect(im_at(j - k)));
    steps.emplace_back(k, std::move(acc));
  }
  WeightFiltration W(Filtration(n, FiltDirection::Increasing, std::move(steps)), 0);

  // Post-hoc verification of both defining axioms.
  for (long k = -static_cast<long>(d) - 1; k <= static_cast<long>(d); ++k) {
    if (!W.at(k - 2).contains(W.at(k).apply(N)))
      throw DomainError("weight_filtration: W axiom N W_l in W_{l-2} failed");
  }
  for (long l = 1; l <= static_cast<long>(d); ++l) {
    const std::size_t gr_hi = W.at(l).dim() - W.at(l - 1).dim();
    const std::size_t gr_lo = W.at(-l).dim() - W.at(-l - 1).dim();
    if (gr_hi != gr_lo)
      throw DomainError("weight_filtration: graded dimensions asymmetric");
    Subspace img = W.at(l).apply(N.power(static_cast<std::size_t>(l)));
    if (img.sum(W.at(-l - 1)) != W.at(-l))
      throw DomainError("weight_filtration: N^l is not onto Gr_{-l}");
  }
  return W;
}

std::vector<Matrix> tested_interior_points(const NilpotentCone& sigma,
                                           std::size_t ambient_dim) {
  if (sigma.is_zero()) return {Matrix::zero(ambient_dim, ambient_dim)};
  std::vector<Matrix> pts;
  auto push = [&](Matrix m) {
    Matrix p = primitive_integral(m);
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(std::move(p));
  };
  for (const Matrix& g : sigma.generators) push(g);
  for (std::size_t i = 0; i < sigma.generators.size(); ++i)
    for (std::size_t j = i + 1; j < sigma.generators.size(); ++j)
      push(sigma.generators[i] + sigma.generators[j]);
  if (sigma.generators.size() > 2) {
    Matrix bary = sigma.generators[0];
    for (std::size_t i = 1; i < sigma.generators.size(); ++i)
      bary += sigma.generators[i];
    push(bary);
  }
  return pts;
}

namespace {

ConeWeightResult cone_weight_filtration_impl(const NilpotentCone& sigma,
                                             std::size_t samples);

}  // namespace

ConeWeightResult cone_weight_filtration(const NilpotentCone& sigma,
                                        std::size_t samples) {
  static std::mutex mu;
  static std::unordered_map<std::string, ConeWeightResult> cache;
  std::string key = sigma.key() + "#" + std::to_string(samples);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  ConeWeightResult out = cone_weight_filtration_impl(sigma, samples);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::move(key), std::move(out)).first->second;
}

namespace {

ConeWeightResult cone_weight_filtration_impl(const NilpotentCone& sigma,
                                             std::size_t samples) {
  ConeWeightResult out;
  if (sigma.is_zero()) {
    const std::size_t n = sigma.ambient_dim();  // 0 for the bare zero cone
    out.filtration = weight_filtration(Matrix::zero(n, n));
    return out;
  }
  std::vector<Matrix> pts = tested_interior_points(sigma, sigma.ambient_dim());
  SplitMix rng{fnv1a(sigma.key())};
  for (std::size_t s = 0; s < samples; ++s) {
    Matrix p = Matrix::zero(sigma.ambient_dim(), sigma.ambient_dim());
    for (const Matrix& g : sigma.generators) {
      long c = static_cast<long>(rng.next() % 7) + 1;
      p += GaussRat(Rat(c)) * g;
    }
    Matrix prim = primitive_integral(p);
    if (std::find(pts.begin(), pts.end(), prim) == pts.end())
      pts.push_back(std::move(prim));
  }
  WeightFiltration ref = weight_filtration(pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    WeightFiltration w = weight_filtration(pts[i]);
    if (w != ref) {
      out.witnesses = std::make_pair(pts[0], pts[i]);
      return out;
    }
  }
  out.filtration = std::move(ref);
  return out;
}

}  // namespace

SplittingResult deligne_splitting(const WeightFiltration& W, const Filtration& F) {
  const std::size_t n = W.steps.ambient_dim();
  if (F.ambient_dim() != n)
    throw InputShapeError("deligne_splitting: ambient mismatch");
  if (F.direction() != FiltDirection::Decreasing)
    throw InputShapeError("deligne_splitting: F must be decreasing");

  SplittingResult out;
  auto w_jumps = W.steps.jumps();
  auto f_jumps = F.jumps();
  // Largest p with F^p != 0.
  long p_hi = f_jumps.front().first;
  for (const auto& [idx, s] : f_jumps)
    if (!s.is_zero()) p_hi = idx;
  long w_lo = w_jumps.front().first;

  // I^{p,q} = F^p n W_{p+q} n ( conj F^q n W_{p+q}
  //                             + sum_{j>=1} conj F^{q-j} n W_{p+q-j-1} ).
  std::map<std::pair<long, long>, Subspace> pieces;
  std::vector<std::pair<long, long>> order;  // (p+q, p) ascending
  for (const auto& [l, wsp] : w_jumps) {
    if (wsp.is_zero()) continue;
    for (long p = l - p_hi; p <= p_hi; ++p) {
      const long q = l - p;
      Subspace second = F.at(q).conj().intersect(W.at(l));
      for (long j = 1; l - j - 1 >= w_lo - 1; ++j) {
        if (W.at(l - j - 1).is_zero()) break;
        second = second.sum(F.at(q - j).conj().intersect(W.at(l - j - 1)));
      }
      Subspace piece = F.at(p).intersect(W.at(l)).intersect(second);
      if (!piece.is_zero()) {
        pieces[{p, q}] = std::move(piece);
        order.emplace_back(l, p);
      }
    }
  }
  std::sort(order.begin(), order.end());

  // Direct sum check with a deterministic first witness.
  Subspace acc = Subspace::zero(n);
  for (const auto& [l, p] : order) {
    const Subspace& piece = pieces.at({p, l - p});
    if (!acc.intersect(piece).is_zero()) {
      out.failure = SplittingFailure{p, l - p, "piece overlaps earlier pieces"};
      return out;
    }
    acc = acc.sum(piece);
  }
  if (!acc.is_full()) {
    // Locate the first reconstruction failure for the witness.
    for (const auto& [l, wsp] : w_jumps) {
      Subspace s = Subspace::zero(n);
      for (const auto& [pq, piece] : pieces)
        if (pq.first + pq.second <= l) s = s.sum(piece);
      if (s != W.at(l)) {
        out.failure = SplittingFailure{l, l, "W_" + std::to_string(l) +
                                                 " is not the sum of pieces"};
        return out;
      }
    }
    out.failure = SplittingFailure{p_hi, p_hi, "pieces do not span"};
    return out;
  }
  // Reconstruction identities.
  for (const auto& [l, wsp] : w_jumps) {
    Subspace s = Subspace::zero(n);
    for (const auto& [pq, piece] : pieces)
      if (pq.first + pq.second <= l) s = s.sum(piece);
    if (s != wsp) {
      out.failure = SplittingFailure{l, l, "W_" + std::to_string(l) +
                                               " not reconstructed"};
      return out;
    }
  }
  for (const auto& [k, fsp] : f_jumps) {
    Subspace s = Subspace::zero(n);
    for (const auto& [pq, piece] : pieces)
      if (pq.first >= k) s = s.sum(piece);
    if (s != fsp) {
      out.failure = SplittingFailure{k, k, "F^" + std::to_string(k) +
                                               " not reconstructed"};
      return out;
    }
  }

  DeligneSplitting sp;
  sp.ambient = n;
  sp.weight = W.center;
  sp.pieces = std::move(pieces);
  out.splitting = std::move(sp);
  return out;
}

bool is_r_split(const DeligneSplitting& S) {
  for (const auto& [pq, piece] : S.pieces)
    if (S.piece(pq.second, pq.first) != piece.conj()) return false;
  return true;
}

GradingElement grading_element(const DeligneSplitting& S) {
  const std::size_t n = S.ambient;
  std::size_t total = 0;
  for (const auto& [pq, piece] : S.pieces) total += piece.dim();
  if (total != n) throw DomainError("grading_element: splitting does not span");
  Matrix P(n, n), D(n, n);
  std::size_t col = 0;
  for (const auto& [pq, piece] : S.pieces) {
    for (std::size_t r = 0; r < piece.dim(); ++r, ++col) {
      for (std::size_t i = 0; i < n; ++i) P(i, col) = piece.basis()(r, i);
      D(col, col) = GaussRat(Rat(pq.first + pq.second - S.weight));
    }
  }
  auto Pinv = P.inverse();
  if (!Pinv) throw DomainError("grading_element: pieces are not independent");
  return GradingElement{P * D * *Pinv};
}

std::optional<Matrix> rationalize_grading(const Matrix& Y0,
                                          const std::vector<Matrix>& cone_generators,
                                          const PolarizedLattice& L) {
  const std::size_t n = L.dim;
  if (Y0.rows() != n || Y0.cols() != n)
    throw InputShapeError("rationalize_grading: Y0 size mismatch");
  // Pre-check: ad_M(Y0) = [M, Y0] = 2M for every generator.
  for (const Matrix& M : cone_generators)
    if (M.commutator(Y0) != GaussRat(2) * M) return std::nullopt;
  if (cone_generators.empty())
    return Y0.is_rational() ? std::optional<Matrix>(Y0) : std::nullopt;

  std::vector<Matrix> G = g_q_basis(L);
  const std::size_t g = G.size();
  std::vector<Vec> gflat;
  for (const Matrix& x : G) gflat.push_back(flatten(x));
  Subspace Sg = Subspace::span_of(gflat, n * n);
  Matrix basis_cols(n * n, g);
  for (std::size_t k = 0; k < g; ++k)
    for (std::size_t r = 0; r < n * n; ++r) basis_cols(r, k) = gflat[k][r];
  auto g_coords = [&](const Matrix& m) -> std::optional<Vec> {
    auto sol = solve_linear(basis_cols, flatten(m));
    if (!sol) return std::nullopt;
    return sol->particular;
  };

  // ad_M on g coordinates, and I = intersection of the images.
  std::vector<Matrix> ads;
  Subspace I = Subspace::full(g);
  for (const Matrix& M : cone_generators) {
    Matrix ad(g, g);
    for (std::size_t k = 0; k < g; ++k) {
      auto c = g_coords(M.commutator(G[k]));
      if (!c) throw DomainError("rationalize_grading: bracket left g_Q");
      for (std::size_t r = 0; r < g; ++r) ad(r, k) = (*c)[r];
    }
    I = I.intersect(Subspace::span(g, ad.transpose()));
    ads.push_back(std::move(ad));
  }

  // Fast path: Y0 already rational, in I, and consistent.
  if (Y0.is_rational()) {
    auto y0c = g_coords(Y0);
    if (y0c && I.contains(*y0c)) return Y0;
  }

  // Solve A x = b for x over the basis of I.
  const std::size_t m = I.dim();
  Matrix B = I.basis();  // m x g
  Matrix A(g * cone_generators.size(), m);
  Vec b(g * cone_generators.size());
  for (std::size_t t = 0; t < cone_generators.size(); ++t) {
    Matrix AB = ads[t] * B.transpose();  // g x m
    auto rhs = g_coords(GaussRat(2) * cone_generators[t]);
    if (!rhs) throw DomainError("rationalize_grading: generator not in g_Q");
    for (std::size_t r = 0; r < g; ++r) {
      for (std::size_t c = 0; c < m; ++c) A(t * g + r, c) = AB(r, c);
      b[t * g + r] = (*rhs)[r];
    }
  }
  auto sol = solve_linear(A, b);
  if (!sol) return std::nullopt;
  // Expand the I-coordinates back through B into g coordinates.
  Vec coords(g);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t k = 0; k < g; ++k) coords[k] += sol->particular[c] * B(c, k);
  Matrix Y(n, n);
  for (std::size_t k = 0; k < g; ++k) {
    if (coords[k].is_zero()) continue;
    Y += coords[k] * G[k];
  }
  // Substitution check.
  for (const Matrix& M : cone_generators)
    if (M.commutator(Y) != GaussRat(2) * M)
      throw DomainError("rationalize_grading: solver produced an invalid Y");
  return Y;
}

namespace {

// Induced decreasing filtration of F on Gr_k, in quotient coordinates.
Subspace induced_on_gr(const Subspace& Fp, const QuotientSpace& gr) {
  Subspace cut = Fp.intersect(gr.numerator());
  std::vector<Vec> rows;
  for (std::size_t r = 0; r < cut.dim(); ++r)
    rows.push_back(gr.project(cut.basis().row(r)));
  return Subspace::span_of(rows, gr.dim());
}

}  // namespace

OrbitCertificate certify_orbit_pair(const PolarizedLattice& L,
                                    const NilpotentCone& sigma,
                                    const HodgeFlag& F) {
  // Preconditions.
  for (std::size_t i = 0; i < sigma.generators.size(); ++i)
    for (std::size_t j = i + 1; j < sigma.generators.size(); ++j)
      if (!sigma.generators[i].commutator(sigma.generators[j]).is_zero())
        throw DomainError("certify_orbit_pair: generators do not commute");
  if (!in_compact_dual(L, F))
    throw DomainError("certify_orbit_pair: flag is not in the compact dual");

  OrbitCertificate cert;

  // (a) Horizontality N_j(F^p) in F^{p-1}.
  for (std::size_t j = 0; j < sigma.generators.size(); ++j) {
    const Matrix& N = sigma.generators[j];
    for (const auto& [p, s] : F.steps.jumps()) {
      if (!F.at(p - 1).contains(s.apply(N))) {
        cert.failure_axiom = "horizontality";
        cert.failure_detail = "generator " + std::to_string(j) +
                              " does not map F^" + std::to_string(p) +
                              " into F^" + std::to_string(p - 1);
        return cert;
      }
    }
  }

  // (b) Constant weight filtration on the cone.
  ConeWeightResult cw = cone_weight_filtration(sigma, 2);
  if (!cw.constant()) {
    cert.failure_axiom = "weight-constancy";
    cert.failure_detail = "W(" + cw.witnesses->first.str() + ") != W(" +
                          cw.witnesses->second.str() + ")";
    return cert;
  }

  // (c) (W(sigma)[-n], F) is a mixed Hodge structure.
  WeightFiltration Wn = cw.filtration->shifted_to(L.weight);
  SplittingResult sp = deligne_splitting(Wn, F.steps);
  if (!sp.ok()) {
    cert.failure_axiom = "mhs";
    cert.failure_detail = "NotMHS at (p,q)=(" + std::to_string(sp.failure->p) +
                          "," + std::to_string(sp.failure->q) + "): " +
                          sp.failure->detail;
    return cert;
  }

  // (d) Polarization of the primitive graded pieces.
  const long n_wt = L.weight;
  const long top = Wn.steps.jumps().back().first;
  std::vector<Matrix> tested = tested_interior_points(sigma, L.dim);
  for (const Matrix& N : tested) {
    for (long l = 0; n_wt + l <= top; ++l) {
      QuotientSpace gr_hi(Wn.at(n_wt + l - 1), Wn.at(n_wt + l));
      if (gr_hi.dim() == 0) continue;
      QuotientSpace gr_lo(Wn.at(n_wt - l - 3), Wn.at(n_wt - l - 2));
      Matrix Npow = N.power(static_cast<std::size_t>(l) + 1);
      if (!Wn.at(n_wt - l - 2).contains(Wn.at(n_wt + l).apply(Npow))) {
        cert.failure_axiom = "polarization";
        cert.failure_detail = "N^{l+1} violates the weight axiom at level " +
                              std::to_string(n_wt + l);
        return cert;
      }
      Matrix induced = gr_hi.induced_map(Npow, gr_lo);
      Subspace prim = Subspace::span(gr_hi.dim(), induced.kernel_basis());

      // Hodge pieces of the primitive part, p + q = n + l.
      Subspace accum = Subspace::zero(gr_hi.dim());
      std::size_t accum_dim = 0;
      for (const auto& [pq, piece] : sp.splitting->pieces) {
        (void)piece;
        const long p = pq.first, q = pq.second;
        if (p + q != n_wt + l) continue;
        Subspace Fbar_p = induced_on_gr(F.at(p), gr_hi);
        Subspace Fbar_q_conj = induced_on_gr(F.at(q), gr_hi).conj();
        Subspace hodge = prim.intersect(Fbar_p).intersect(Fbar_q_conj);
        if (hodge.is_zero()) continue;
        if (!accum.intersect(hodge).is_zero()) {
          cert.failure_axiom = "polarization";
          cert.failure_detail = "primitive part not pure at level " +
                                std::to_string(n_wt + l);
          return cert;
        }
        accum = accum.sum(hodge);
        accum_dim += hodge.dim();

        // Gram matrix of i^{p-q} Q(u, N^l conj(v)) on lifted vectors.
        Matrix H(hodge.dim(), hodge.dim());
        Matrix Nl = N.power(static_cast<std::size_t>(l));
        GaussRat scale = i_power(p - q);
        std::vector<Vec> lifts;
        for (std::size_t r = 0; r < hodge.dim(); ++r)
          lifts.push_back(gr_hi.lift_vector(hodge.basis().row(r)));
        for (std::size_t a = 0; a < hodge.dim(); ++a)
          for (std::size_t b = 0; b < hodge.dim(); ++b) {
            Vec w = lifts[b];
            for (auto& x : w) x = x.conj();
            H(a, b) = scale * L.form(lifts[a], Nl.apply(w));
          }
        if (!positivity_check(H)) {
          cert.failure_axiom = "polarization";
          cert.failure_detail = "Q_" + std::to_string(l) +
                                " not positive on primitive (" + std::to_string(p) +
                                "," + std::to_string(q) + ") piece for N=" + N.str();
          return cert;
        }
      }
      if (accum_dim != prim.dim() || accum != prim) {
        cert.failure_axiom = "polarization";
        cert.failure_detail =
            "primitive part at level " + std::to_string(n_wt + l) +
            " is not the sum of its Hodge pieces";
        return cert;
      }
    }
  }

  cert.certified = true;
  cert.weight = std::move(Wn);
  cert.r_split = is_r_split(*sp.splitting);
  cert.splitting = std::move(sp.splitting);
  return cert;
}

std::string lattice_key(const PolarizedLattice& L) {
  std::string k = "L[" + std::to_string(L.dim) + "," + std::to_string(L.weight) +
                  "," + L.Q.str() + ",h:";
  for (auto [p, h] : L.hodge_numbers)
    k += std::to_string(p) + ":" + std::to_string(h) + ";";
  return k + "]";
}

const OrbitCertificate& certify_orbit_pair_cached(const PolarizedLattice& L,
                                                  const NilpotentCone& sigma,
                                                  const HodgeFlag& F) {
  static std::mutex mu;
  static std::unordered_map<std::string, OrbitCertificate> cache;
  std::string key = lattice_key(L) + "|" + sigma.key() + "|" + F.key();
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  OrbitCertificate cert = certify_orbit_pair(L, sigma, F);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::move(key), std::move(cert)).first->second;
}

std::vector<bool> sample_orbit_membership(const PolarizedLattice& L,
                                          const NilpotentCone& sigma,
                                          const HodgeFlag& F,
                                          const std::vector<Rat>& heights) {
  Matrix sum = Matrix::zero(L.dim, L.dim);
  for (const Matrix& g : sigma.generators) sum += g;
  std::vector<bool> out;
  out.reserve(heights.size());
  for (const Rat& t : heights) {
    Matrix E = nilpotent_exp(GaussRat(Rat(0), t) * sum);
    HodgeFlag moved = F.apply(E);
    bool ok = in_compact_dual(L, moved) && in_period_domain(L, moved);
    out.push_back(ok);
  }
  return out;
}

}  // namespace weakfan
