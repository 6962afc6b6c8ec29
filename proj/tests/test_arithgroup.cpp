#include <doctest.h>

#include <algorithm>

#include "test_util.hpp"
#include "weakfan/arithgroup.hpp"
#include "weakfan/errors.hpp"

using namespace weakfan;
using wftest::mati;
using wftest::r;

namespace {

// Block-diagonal (g, (g^T)^{-1}) element of Sp_4(Z); Ad acts on the
// symmetric matrix A of a block nilpotent by A -> g A g^T.
Matrix block_sp(const Matrix& g) {
  Matrix out(4, 4);
  Matrix h = g.inverse()->transpose();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      out(i, j) = g(i, j);
      out(2 + i, 2 + j) = h(i, j);
    }
  return out;
}

std::vector<std::string> cone_keys(const std::vector<NilpotentCone>& cones) {
  std::vector<std::string> keys;
  for (const NilpotentCone& c : cones) keys.push_back(c.key());
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

TEST_CASE("word_ball enumerates distinct matrices breadth-first") {
  PolarizedLattice L = wftest::elliptic_lattice();
  Matrix T = nilpotent_exp(wftest::elliptic_N());  // [[1,1],[0,1]]
  auto ball = word_ball(L, {T}, 3);
  CHECK(ball.size() == 7);  // id, T^{+-1}, T^{+-2}, T^{+-3}
  CHECK(ball[0].matrix == Matrix::identity(2));
  // Word matrices equal the product of their letters.
  for (const GroupElement& g : ball) {
    Matrix prod = Matrix::identity(2);
    for (auto [gi, e] : g.word) {
      CHECK(gi == 0);
      prod = prod * (e == 1 ? T : *T.inverse());
    }
    CHECK(prod == g.matrix);
  }
}

TEST_CASE("is_gamma_member: identity and centralizing elements") {
  PolarizedLattice L = wftest::elliptic_lattice();
  NilpotentCone ray = make_cone(L, {wftest::elliptic_N()});
  std::vector<HodgeFlag> pool = {wftest::elliptic_limit_flag()};

  CHECK(is_gamma_member(L, Matrix::identity(2), ray, ray, pool));
  CHECK(is_gamma_member(L, nilpotent_exp(wftest::elliptic_N()), ray, ray, pool));
  CHECK_THROWS_AS(
      is_gamma_member(L, GaussRat(3) * Matrix::identity(2), ray, ray, pool),
      DomainError);
}

TEST_CASE("is_gamma_member: weight pre-filter rejects level swaps") {
  PolarizedLattice L = wftest::elliptic_lattice();
  NilpotentCone ray = make_cone(L, {wftest::elliptic_N()});
  // gamma = [[0,1],[-1,0]] preserves Q and exchanges the two W-levels.
  Matrix gamma = mati({{0, 1}, {-1, 0}});
  REQUIRE(in_gamma_group(L, gamma));
  std::vector<HodgeFlag> pool = {wftest::elliptic_limit_flag(),
                                 wftest::elliptic_interior_flag()};
  CHECK(!is_gamma_member(L, gamma, ray, ray, pool));
}

TEST_CASE("enumerate_gamma on the elliptic ray") {
  PolarizedLattice L = wftest::elliptic_lattice();
  NilpotentCone ray = make_cone(L, {wftest::elliptic_N()});
  std::vector<HodgeFlag> pool = {wftest::elliptic_limit_flag()};

  // No generators: only the identity.
  GammaWitnessSet w0 = enumerate_gamma(L, ray, ray, {}, 4, pool);
  CHECK(w0.elements.size() == 1);
  CHECK(w0.elements[0].matrix == Matrix::identity(2));

  // Generated by exp(N): every word centralizes the ray.
  Matrix T = nilpotent_exp(wftest::elliptic_N());
  GammaWitnessSet w = enumerate_gamma(L, ray, ray, {T}, 3, pool);
  CHECK(w.elements.size() == 7);
  auto inter = intersection_set(L, w);
  CHECK(inter.size() == 1);
  CHECK(inter[0] == ray);
}

TEST_CASE("enumerate_gamma: distinct Jordan types give the empty set") {
  PolarizedLattice L4 = wftest::abelian4_lattice();
  NilpotentCone rank1 = make_cone(L4, {wftest::block_nilpotent(mati({{1, 0}, {0, 0}}))});
  NilpotentCone rank2 = make_cone(L4, {wftest::block_nilpotent(Matrix::identity(2))});
  std::vector<HodgeFlag> pool = {wftest::abelian4_limit_flag()};
  Matrix T = block_sp(mati({{1, 1}, {0, 1}}));
  GammaWitnessSet w = enumerate_gamma(L4, rank1, rank2, {T}, 3, pool);
  CHECK(w.elements.empty());
  CHECK(intersection_set(L4, w).empty());
}

TEST_CASE("two distinct intersection rays and their coset buckets") {
  PolarizedLattice L4 = wftest::abelian4_lattice();
  // sigma = cone{3I - X, 3X - I} with X = g I g^T for the shear g; both I
  // and X generate rays interior to sigma.
  Matrix g = mati({{1, 1}, {0, 1}});
  Matrix I2 = Matrix::identity(2);
  Matrix X = g * I2 * g.transpose();
  Matrix G1 = GaussRat(3) * I2 - X;
  Matrix G2 = GaussRat(3) * X - I2;
  NilpotentCone sigma =
      make_cone(L4, {wftest::block_nilpotent(G1), wftest::block_nilpotent(G2)});
  NilpotentCone tau = make_cone(L4, {wftest::block_nilpotent(I2)});
  std::vector<HodgeFlag> pool = {wftest::abelian4_limit_flag()};

  Matrix gamma = block_sp(g);
  GammaWitnessSet w = enumerate_gamma(L4, sigma, tau, {gamma}, 2, pool);
  // id and gamma are members; gamma^2 and inverses push tau outside sigma.
  CHECK(w.elements.size() == 2);
  auto inter = intersection_set(L4, w);
  CHECK(inter.size() == 2);
  CHECK(cone_keys(inter) ==
        cone_keys({make_cone(L4, {wftest::block_nilpotent(I2)}),
                   make_cone(L4, {wftest::block_nilpotent(X)})}));

  // Different buckets are certified distinct double cosets.
  CosetBuckets buckets = coset_buckets(L4, w, {}, {}, 1);
  CHECK(buckets.buckets.size() == 2);
  CHECK(buckets.probes.empty());
}

TEST_CASE("coset buckets resolve centralizer translates as Same") {
  PolarizedLattice L = wftest::elliptic_lattice();
  NilpotentCone ray = make_cone(L, {wftest::elliptic_N()});
  std::vector<HodgeFlag> pool = {wftest::elliptic_limit_flag()};
  Matrix T = nilpotent_exp(wftest::elliptic_N());
  GammaWitnessSet w = enumerate_gamma(L, ray, ray, {T}, 2, pool);
  REQUIRE(w.elements.size() == 5);

  CosetBuckets buckets = coset_buckets(L, w, {T}, {T}, 4);
  CHECK(buckets.buckets.size() == 1);
  CHECK(buckets.probes.size() == 10);  // all pairs in the single bucket
  for (const CosetProbe& p : buckets.probes) CHECK(p.same);

  // Without centralizer generators every pair stays Unknown.
  CosetBuckets blind = coset_buckets(L, w, {}, {}, 2);
  for (const CosetProbe& p : blind.probes) CHECK(!p.same);
}

TEST_CASE("symmetry law: inversion maps witness sets to the swapped pair") {
  PolarizedLattice L4 = wftest::abelian4_lattice();
  Matrix g = mati({{1, 1}, {0, 1}});
  Matrix I2 = Matrix::identity(2);
  Matrix X = g * I2 * g.transpose();
  NilpotentCone sigma = make_cone(
      L4, {wftest::block_nilpotent(GaussRat(3) * I2 - X),
           wftest::block_nilpotent(GaussRat(3) * X - I2)});
  NilpotentCone tau = make_cone(L4, {wftest::block_nilpotent(I2)});
  std::vector<HodgeFlag> pool = {wftest::abelian4_limit_flag()};
  Matrix gamma = block_sp(g);
  GammaWitnessSet w = enumerate_gamma(L4, sigma, tau, {gamma}, 2, pool);

  for (const GroupElement& el : w.elements) {
    Matrix inv = *el.matrix.inverse();
    CHECK(is_gamma_member(L4, inv, tau, sigma, pool));
    // tau n sigma_{gamma^{-1}} = Ad_{gamma^{-1}}(sigma n tau_gamma).
    auto lhs = intersect_cones(tau, conjugate(L4, inv, sigma));
    auto rhs = intersect_cones(sigma, conjugate(L4, el.matrix, tau));
    REQUIRE(lhs);
    REQUIRE(rhs);
    CHECK(*lhs == conjugate(L4, inv, *rhs));
  }
}

TEST_CASE("translation law: I is invariant under right translation of tau") {
  PolarizedLattice L4 = wftest::abelian4_lattice();
  Matrix g = mati({{1, 1}, {0, 1}});
  Matrix I2 = Matrix::identity(2);
  Matrix X = g * I2 * g.transpose();
  NilpotentCone sigma = make_cone(
      L4, {wftest::block_nilpotent(GaussRat(3) * I2 - X),
           wftest::block_nilpotent(GaussRat(3) * X - I2)});
  NilpotentCone tau = make_cone(L4, {wftest::block_nilpotent(I2)});
  std::vector<HodgeFlag> pool = {wftest::abelian4_limit_flag()};
  Matrix gamma = block_sp(g);

  GammaWitnessSet w = enumerate_gamma(L4, sigma, tau, {gamma}, 2, pool);
  // beta = gamma^{-1}: tau' = Ad_beta(tau); right translation preserves I.
  Matrix beta = *gamma.inverse();
  NilpotentCone tau_b = conjugate(L4, beta, tau);
  GammaWitnessSet wb;
  wb.sigma = sigma;
  wb.tau = tau_b;
  for (const GroupElement& el : w.elements) {
    Matrix translated = el.matrix * *beta.inverse();
    CHECK(is_gamma_member(L4, translated, sigma, tau_b, pool));
    wb.elements.push_back(GroupElement{translated, {}});
  }
  CHECK(cone_keys(intersection_set(L4, wb)) == cone_keys(intersection_set(L4, w)));
}

TEST_CASE("intersection sets grow monotonically and saturate") {
  PolarizedLattice L4 = wftest::abelian4_lattice();
  Matrix g = mati({{1, 1}, {0, 1}});
  Matrix I2 = Matrix::identity(2);
  Matrix X = g * I2 * g.transpose();
  NilpotentCone sigma = make_cone(
      L4, {wftest::block_nilpotent(GaussRat(3) * I2 - X),
           wftest::block_nilpotent(GaussRat(3) * X - I2)});
  NilpotentCone tau = make_cone(L4, {wftest::block_nilpotent(I2)});
  std::vector<HodgeFlag> pool = {wftest::abelian4_limit_flag()};
  Matrix gamma = block_sp(g);

  std::size_t prev = 0;
  for (std::size_t len = 0; len <= 4; ++len) {
    GammaWitnessSet w = enumerate_gamma(L4, sigma, tau, {gamma}, len, pool);
    std::size_t card = intersection_set(L4, w).size();
    CHECK(card >= prev);
    prev = card;
  }
  CHECK(prev == 2);  // saturated well below the bound
}
