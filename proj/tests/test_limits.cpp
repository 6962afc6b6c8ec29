#include <doctest.h>

#include "test_util.hpp"
#include "weakfan/errors.hpp"
#include "weakfan/limits.hpp"

using namespace weakfan;
using wftest::c;
using wftest::mati;
using wftest::r;

namespace {

Subspace sp(const std::vector<Vec>& rows, std::size_t n) {
  return Subspace::span_of(rows, n);
}

Vec e(int k, std::size_t n) {
  Vec v(n);
  v[static_cast<std::size_t>(k)] = GaussRat(1);
  return v;
}

}  // namespace

TEST_CASE("weight filtration of the zero map") {
  WeightFiltration W = weight_filtration(Matrix::zero(2, 2));
  CHECK(W.center == 0);
  CHECK(W.at(-1).is_zero());
  CHECK(W.at(0).is_full());
}

TEST_CASE("weight filtration of Jordan blocks") {
  // 2x2 block: W_{-1} = W_0 = span{e1}, W_1 = V.
  WeightFiltration W2 = weight_filtration(mati({{0, 1}, {0, 0}}));
  CHECK(W2.at(-2).is_zero());
  CHECK(W2.at(-1) == sp({e(0, 2)}, 2));
  CHECK(W2.at(0) == sp({e(0, 2)}, 2));
  CHECK(W2.at(1).is_full());

  // 3x3 block: W_{-2} = W_{-1} = span{e1}, W_0 = W_1 = span{e1,e2}, W_2 = V.
  WeightFiltration W3 = weight_filtration(mati({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
  CHECK(W3.at(-3).is_zero());
  CHECK(W3.at(-2) == sp({e(0, 3)}, 3));
  CHECK(W3.at(-1) == sp({e(0, 3)}, 3));
  CHECK(W3.at(0) == sp({e(0, 3), e(1, 3)}, 3));
  CHECK(W3.at(1) == sp({e(0, 3), e(1, 3)}, 3));
  CHECK(W3.at(2).is_full());

  CHECK_THROWS_AS(weight_filtration(Matrix::identity(2)), NotNilpotentError);
}

TEST_CASE("weight filtration agrees with the Jordan-chain oracle") {
  wftest::Rng rng(101);
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& type : wftest::partitions(n))
      for (int trial = 0; trial < 3; ++trial) {
        Matrix N = wftest::random_nilpotent(type, rng);
        CHECK(weight_filtration(N) == wftest::jordan_weight_filtration(N));
      }
}

TEST_CASE("weight filtration is the unique axiom solution (brute force, dims <= 4)") {
  wftest::Rng rng(103);
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& type : wftest::partitions(n)) {
      Matrix N = wftest::random_nilpotent(type, rng);
      auto [count, found] = wftest::brute_force_weight_filtrations(N);
      CHECK(count == 1);
      CHECK(found == weight_filtration(N));
    }
}

TEST_CASE("cone weight filtration: single ray") {
  PolarizedLattice L = wftest::elliptic_lattice();
  NilpotentCone ray = make_cone(L, {wftest::elliptic_N()});
  ConeWeightResult cw = cone_weight_filtration(ray, 4);
  REQUIRE(cw.constant());
  CHECK(*cw.filtration == weight_filtration(wftest::elliptic_N()));
}

TEST_CASE("cone weight filtration: constant on the abelian-surface cone") {
  PolarizedLattice L = wftest::abelian4_lattice();
  Matrix N1 = wftest::block_nilpotent(Matrix::identity(2));
  Matrix N2 = wftest::block_nilpotent(mati({{1, 0}, {0, 2}}));
  NilpotentCone sigma = make_cone(L, {N1, N2});
  ConeWeightResult cw = cone_weight_filtration(sigma, 5);
  REQUIRE(cw.constant());
  // Same value at the explicit points N1 + N2 and N1 + 2 N2.
  CHECK(*cw.filtration == weight_filtration(N1 + N2));
  CHECK(*cw.filtration == weight_filtration(N1 + N2 + N2));
  CHECK(cw.filtration->at(-1) == sp({e(0, 4), e(1, 4)}, 4));
  CHECK(cw.filtration->at(0) == sp({e(0, 4), e(1, 4)}, 4));
}

TEST_CASE("cone weight filtration: NotConstant across Jordan types") {
  PolarizedLattice L = wftest::abelian4_lattice();
  Matrix N1 = wftest::block_nilpotent(mati({{1, 0}, {0, 0}}));
  Matrix N2 = wftest::block_nilpotent(mati({{0, 0}, {0, 1}}));
  NilpotentCone sigma = make_cone(L, {N1, N2});
  ConeWeightResult cw = cone_weight_filtration(sigma, 3);
  CHECK(!cw.constant());
  REQUIRE(cw.witnesses);
  CHECK(weight_filtration(cw.witnesses->first) !=
        weight_filtration(cw.witnesses->second));
}

TEST_CASE("cone weight filtration of the zero cone") {
  PolarizedLattice L = wftest::elliptic_lattice();
  NilpotentCone zero = make_cone(L, {});
  ConeWeightResult cw = cone_weight_filtration(zero, 2);
  REQUIRE(cw.constant());
  CHECK(cw.filtration->at(-1).is_zero());
  CHECK(cw.filtration->at(0).is_full());
}

TEST_CASE("deligne splitting: pure Hodge structure") {
  // Trivial W at center 1: the splitting is the Hodge decomposition.
  WeightFiltration W(Filtration(2, FiltDirection::Increasing,
                                {{0, Subspace::zero(2)}, {1, Subspace::full(2)}}),
                     1);
  HodgeFlag F = wftest::elliptic_interior_flag();
  SplittingResult spr = deligne_splitting(W, F.steps);
  REQUIRE(spr.ok());
  CHECK(spr.splitting->pieces.size() == 2);
  CHECK(spr.splitting->piece(1, 0) == F.at(1));
  CHECK(spr.splitting->piece(0, 1) == F.at(1).conj());
  CHECK(is_r_split(*spr.splitting));
}

TEST_CASE("deligne splitting: elliptic limit MHS") {
  // W[-1]: W_0 = W_1 = span{e1}, W_2 = V; F^1 = span{e2}.
  WeightFiltration W = weight_filtration(wftest::elliptic_N()).shifted_to(1);
  SplittingResult spr = deligne_splitting(W, wftest::elliptic_limit_flag().steps);
  REQUIRE(spr.ok());
  CHECK(spr.splitting->piece(0, 0) == sp({e(0, 2)}, 2));
  CHECK(spr.splitting->piece(1, 1) == sp({e(1, 2)}, 2));
  CHECK(is_r_split(*spr.splitting));
}

TEST_CASE("deligne splitting: NotMHS when F falls into W_0") {
  WeightFiltration W = weight_filtration(wftest::elliptic_N()).shifted_to(1);
  HodgeFlag F(Filtration(2, FiltDirection::Decreasing,
                         {{1, sp({e(0, 2)}, 2)}}));
  SplittingResult spr = deligne_splitting(W, F.steps);
  CHECK(!spr.ok());
  REQUIRE(spr.failure);
  CHECK(spr.failure->detail != "");
}

TEST_CASE("deligne splitting reconstruction identities hold exactly") {
  PolarizedLattice L = wftest::abelian4_lattice();
  Matrix N1 = wftest::block_nilpotent(Matrix::identity(2));
  Matrix N2 = wftest::block_nilpotent(mati({{1, 0}, {0, 2}}));
  NilpotentCone sigma = make_cone(L, {N1, N2});
  WeightFiltration W = cone_weight_filtration(sigma, 2).filtration->shifted_to(1);
  HodgeFlag F = wftest::abelian4_limit_flag();
  SplittingResult spr = deligne_splitting(W, F.steps);
  REQUIRE(spr.ok());
  // F^k = sum of pieces with p >= k, W_l = sum of pieces with p+q <= l.
  for (long k = 0; k <= 2; ++k) {
    Subspace acc = Subspace::zero(4);
    for (const auto& [pq, piece] : spr.splitting->pieces)
      if (pq.first >= k) acc = acc.sum(piece);
    CHECK(acc == F.at(k));
  }
  for (long l = -1; l <= 3; ++l) {
    Subspace acc = Subspace::zero(4);
    for (const auto& [pq, piece] : spr.splitting->pieces)
      if (pq.first + pq.second <= l) acc = acc.sum(piece);
    CHECK(acc == W.at(l));
  }
}

TEST_CASE("is_r_split distinguishes the twisted extension") {
  WeightFiltration W = weight_filtration(wftest::elliptic_N()).shifted_to(1);
  // F^1 = span{e2 + i e1} mixes the weight levels with an imaginary part.
  HodgeFlag twisted(Filtration(
      2, FiltDirection::Decreasing,
      {{1, sp({{GaussRat::i(), GaussRat(1)}}, 2)}}));
  SplittingResult spr = deligne_splitting(W, twisted.steps);
  REQUIRE(spr.ok());
  CHECK(!is_r_split(*spr.splitting));

  // The rational extension stays split.
  HodgeFlag shifted(Filtration(
      2, FiltDirection::Decreasing,
      {{1, sp({{GaussRat(3), GaussRat(1)}}, 2)}}));
  SplittingResult spr2 = deligne_splitting(W, shifted.steps);
  REQUIRE(spr2.ok());
  CHECK(is_r_split(*spr2.splitting));
}

TEST_CASE("grading element of the elliptic limit MHS") {
  WeightFiltration W = weight_filtration(wftest::elliptic_N()).shifted_to(1);
  SplittingResult spr = deligne_splitting(W, wftest::elliptic_limit_flag().steps);
  REQUIRE(spr.ok());
  GradingElement Y = grading_element(*spr.splitting);
  CHECK(Y.Y == mati({{-1, 0}, {0, 1}}));
  CHECK(Y.is_rational());
  // [Y, N] = -2N, equivalently ad_N(Y) = 2N.
  Matrix N = wftest::elliptic_N();
  CHECK(Y.Y.commutator(N) == GaussRat(-2) * N);
  CHECK(N.commutator(Y.Y) == GaussRat(2) * N);
}

TEST_CASE("grading element of a pure structure is zero") {
  WeightFiltration W(Filtration(2, FiltDirection::Increasing,
                                {{0, Subspace::zero(2)}, {1, Subspace::full(2)}}),
                     1);
  SplittingResult spr =
      deligne_splitting(W, wftest::elliptic_interior_flag().steps);
  REQUIRE(spr.ok());
  CHECK(grading_element(*spr.splitting).Y.is_zero());
}

TEST_CASE("grading element of the weight-2 Jordan block") {
  Matrix N = mati({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  WeightFiltration W = weight_filtration(N).shifted_to(2);
  HodgeFlag F(Filtration(3, FiltDirection::Decreasing,
                         {{2, sp({e(2, 3)}, 3)},
                          {1, sp({e(1, 3), e(2, 3)}, 3)}}));
  SplittingResult spr = deligne_splitting(W, F.steps);
  REQUIRE(spr.ok());
  GradingElement Y = grading_element(*spr.splitting);
  CHECK(Y.Y == mati({{-2, 0, 0}, {0, 0, 0}, {0, 0, 2}}));
}

TEST_CASE("grading element eigenspaces reproduce the splitting") {
  PolarizedLattice L = wftest::abelian4_lattice();
  Matrix N1 = wftest::block_nilpotent(Matrix::identity(2));
  Matrix N2 = wftest::block_nilpotent(mati({{1, 0}, {0, 2}}));
  NilpotentCone sigma = make_cone(L, {N1, N2});
  WeightFiltration W = cone_weight_filtration(sigma, 2).filtration->shifted_to(1);
  SplittingResult spr = deligne_splitting(W, wftest::abelian4_limit_flag().steps);
  REQUIRE(spr.ok());
  GradingElement Y = grading_element(*spr.splitting);
  for (const auto& [pq, piece] : spr.splitting->pieces) {
    GaussRat ev(Rat(pq.first + pq.second - spr.splitting->weight));
    for (std::size_t rr = 0; rr < piece.dim(); ++rr) {
      Vec v = piece.basis().row(rr);
      Vec Yv = Y.Y.apply(v);
      for (std::size_t k = 0; k < v.size(); ++k) CHECK(Yv[k] == ev * v[k]);
    }
  }
}

TEST_CASE("rationalize_grading: elliptic fixed point and perturbation") {
  PolarizedLattice L = wftest::elliptic_lattice();
  Matrix N = wftest::elliptic_N();
  Matrix Y0 = mati({{-1, 0}, {0, 1}});
  auto Y = rationalize_grading(Y0, {N}, L);
  REQUIRE(Y);
  CHECK(*Y == Y0);

  // Perturbed off the solution affine space: the pre-check fails.
  Matrix bad = mati({{-1, 0}, {0, 2}});
  CHECK(!rationalize_grading(bad, {N}, L));
}

TEST_CASE("rationalize_grading: two-generator system in the abelian lattice") {
  PolarizedLattice L = wftest::abelian4_lattice();
  Matrix N1 = wftest::block_nilpotent(Matrix::identity(2));
  Matrix N2 = wftest::block_nilpotent(mati({{1, 0}, {0, 2}}));
  Matrix Y0(4, 4);
  Y0(0, 0) = GaussRat(-1);
  Y0(1, 1) = GaussRat(-1);
  Y0(2, 2) = GaussRat(1);
  Y0(3, 3) = GaussRat(1);
  auto Y = rationalize_grading(Y0, {N1, N2}, L);
  REQUIRE(Y);
  CHECK(Y->is_rational());
  CHECK(N1.commutator(*Y) == GaussRat(2) * N1);
  CHECK(N2.commutator(*Y) == GaussRat(2) * N2);
}

TEST_CASE("certify_orbit_pair: elliptic certified example") {
  PolarizedLattice L = wftest::elliptic_lattice();
  NilpotentCone sigma = make_cone(L, {wftest::elliptic_N()});
  HodgeFlag F = wftest::elliptic_limit_flag();
  OrbitCertificate cert = certify_orbit_pair(L, sigma, F);
  CHECK(cert.certified);
  REQUIRE(cert.weight);
  CHECK(cert.weight->center == 1);
  REQUIRE(cert.splitting);
  CHECK(cert.r_split);

  // Companion check: exp(z N) F is in D at z = i, 2i, 10i.
  auto member = sample_orbit_membership(L, sigma, F, {Rat(1), Rat(2), Rat(10)});
  CHECK(member == std::vector<bool>{true, true, true});
}

TEST_CASE("certify_orbit_pair: sign flip refutes at polarization") {
  PolarizedLattice L = wftest::elliptic_lattice();
  NilpotentCone sigma = make_cone(L, {-wftest::elliptic_N()});
  HodgeFlag F = wftest::elliptic_limit_flag();
  OrbitCertificate cert = certify_orbit_pair(L, sigma, F);
  CHECK(!cert.certified);
  CHECK(cert.failure_axiom == "polarization");

  auto member = sample_orbit_membership(L, sigma, F, {Rat(1), Rat(2), Rat(10)});
  CHECK(member == std::vector<bool>{false, false, false});
}

TEST_CASE("certify_orbit_pair: zero cone with an interior flag") {
  PolarizedLattice L = wftest::elliptic_lattice();
  NilpotentCone zero = make_cone(L, {});
  HodgeFlag F = wftest::elliptic_interior_flag();
  OrbitCertificate cert = certify_orbit_pair(L, zero, F);
  CHECK(cert.certified);

  // The zero cone with the limit flag is refuted (the flag is not in D).
  OrbitCertificate limit = certify_orbit_pair(L, zero, wftest::elliptic_limit_flag());
  CHECK(!limit.certified);

  // exp = identity: sampling repeats in_period_domain(F).
  auto member = sample_orbit_membership(L, zero, F, {Rat(1), Rat(5)});
  CHECK(member == std::vector<bool>{true, true});
}

TEST_CASE("certify_orbit_pair: abelian-surface cone") {
  PolarizedLattice L = wftest::abelian4_lattice();
  Matrix N1 = wftest::block_nilpotent(Matrix::identity(2));
  Matrix N2 = wftest::block_nilpotent(mati({{1, 0}, {0, 2}}));
  NilpotentCone sigma = make_cone(L, {N1, N2});
  HodgeFlag F = wftest::abelian4_limit_flag();
  OrbitCertificate cert = certify_orbit_pair(L, sigma, F);
  CHECK(cert.certified);
  CHECK(cert.r_split);

  auto member = sample_orbit_membership(L, sigma, F, {Rat(1), Rat(2), Rat(10)});
  CHECK(member == std::vector<bool>{true, true, true});

  NilpotentCone neg = make_cone(L, {-N1, -N2});
  OrbitCertificate refuted = certify_orbit_pair(L, neg, F);
  CHECK(!refuted.certified);
  CHECK(refuted.failure_axiom == "polarization");
  auto neg_member = sample_orbit_membership(L, neg, F, {Rat(1), Rat(2), Rat(10)});
  CHECK(neg_member == std::vector<bool>{false, false, false});
}

TEST_CASE("certify_orbit_pair: horizontality failure is caught first") {
  // Weight 3, maximal Jordan block. F^3 = span{e4}, F^2 = span{e4, e2}
  // is isotropic and satisfies the first bilinear relation, but
  // N e4 = e3 is not in F^2.
  PolarizedLattice L = wftest::weight3_lattice();
  Matrix N = mati({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}});
  NilpotentCone sigma = make_cone(L, {N});
  HodgeFlag F(Filtration(4, FiltDirection::Decreasing,
                         {{3, sp({e(3, 4)}, 4)},
                          {2, sp({e(1, 4), e(3, 4)}, 4)},
                          {1, sp({e(1, 4), e(2, 4), e(3, 4)}, 4)}}));
  REQUIRE(in_compact_dual(L, F));
  OrbitCertificate cert = certify_orbit_pair(L, sigma, F);
  CHECK(!cert.certified);
  CHECK(cert.failure_axiom == "horizontality");
}

TEST_CASE("certify_orbit_pair: weight-3 maximal degeneration certifies") {
  PolarizedLattice L = wftest::weight3_lattice();
  Matrix N = mati({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}});
  NilpotentCone sigma = make_cone(L, {N});
  HodgeFlag F(Filtration(4, FiltDirection::Decreasing,
                         {{3, sp({e(3, 4)}, 4)},
                          {2, sp({e(2, 4), e(3, 4)}, 4)},
                          {1, sp({e(1, 4), e(2, 4), e(3, 4)}, 4)}}));
  REQUIRE(in_compact_dual(L, F));
  OrbitCertificate cert = certify_orbit_pair(L, sigma, F);
  if (!cert.certified) {
    INFO(cert.failure_axiom, ": ", cert.failure_detail);
  }
  CHECK(cert.certified);
  auto member = sample_orbit_membership(L, sigma, F, {Rat(1), Rat(2), Rat(10)});
  CHECK(member == std::vector<bool>{true, true, true});
}

TEST_CASE("certify_orbit_pair: weight-2 Jordan orbit certifies") {
  PolarizedLattice L = wftest::weight2_jordan_lattice();
  Matrix N = mati({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  NilpotentCone sigma = make_cone(L, {N});
  HodgeFlag F(Filtration(3, FiltDirection::Decreasing,
                         {{2, sp({e(2, 3)}, 3)},
                          {1, sp({e(1, 3), e(2, 3)}, 3)}}));
  REQUIRE(in_compact_dual(L, F));
  OrbitCertificate cert = certify_orbit_pair(L, sigma, F);
  if (!cert.certified) {
    INFO(cert.failure_axiom, ": ", cert.failure_detail);
  }
  CHECK(cert.certified);
  auto member = sample_orbit_membership(L, sigma, F, {Rat(1), Rat(2), Rat(10)});
  CHECK(member == std::vector<bool>{true, true, true});
}

TEST_CASE("certified implies sampled membership at heights >= 1") {
  PolarizedLattice L = wftest::elliptic_lattice();
  NilpotentCone sigma = make_cone(L, {wftest::elliptic_N()});
  HodgeFlag F = wftest::elliptic_limit_flag();
  REQUIRE(certify_orbit_pair(L, sigma, F).certified);
  auto member =
      sample_orbit_membership(L, sigma, F, {Rat(1), Rat(3, 2), Rat(7), Rat(100)});
  for (bool b : member) CHECK(b);
}
