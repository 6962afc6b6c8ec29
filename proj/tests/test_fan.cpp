#include <doctest.h>

#include <algorithm>

#include "test_util.hpp"
#include "weakfan/errors.hpp"
#include "weakfan/fan.hpp"

using namespace weakfan;
using wftest::mati;
using wftest::r;

namespace {

Matrix diag_block(long a, long b) {
  return wftest::block_nilpotent(mati({{a, 0}, {0, b}}));
}

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

// Collection over the abelian-surface lattice with the standard limit flag
// on every listed cone and an interior flag reserved for the zero cone.
FanCollection make_fan(const std::vector<NilpotentCone>& reps,
                       const std::vector<Matrix>& pool_elems) {
  FanCollection fan;
  fan.lattice = wftest::abelian4_lattice();
  fan.reps = reps;
  for (const NilpotentCone& c : reps)
    fan.witness_flags.emplace(c.key(), wftest::abelian4_limit_flag());
  NilpotentCone zero;
  zero.ambient = 4;
  fan.witness_flags.emplace(zero.key(), wftest::abelian4_interior_flag());
  for (const Matrix& m : pool_elems) fan.witness_pool.push_back(GroupElement{m, {}});
  validate_collection(fan);
  return fan;
}

std::size_t count_dim(const FanCollection& fan, std::size_t d) {
  std::size_t n = 0;
  for (const NilpotentCone& c : fan.reps) n += c.dim() == d;
  return n;
}

}  // namespace

TEST_CASE("validate_collection restores face closure and certifies") {
  PolarizedLattice L = wftest::abelian4_lattice();
  NilpotentCone sigma = make_cone(L, {diag_block(2, 1), diag_block(1, 2)});
  FanCollection fan = make_fan({sigma}, {});
  // Faces of sigma (two rays + zero) were added automatically.
  CHECK(fan.reps.size() == 4);
  CHECK(count_dim(fan, 0) == 1);
  CHECK(count_dim(fan, 1) == 2);
  CHECK(count_dim(fan, 2) == 1);
  CHECK(fan.witness_pool.size() == 1);  // identity inserted

  // Conjugate representatives are merged.
  Matrix swap = block_sp(mati({{0, 1}, {1, 0}}));
  NilpotentCone sigma_swapped = conjugate(L, swap, sigma);
  CHECK(sigma_swapped == sigma);  // the (1/2, 2) sector is swap-symmetric
  NilpotentCone other = make_cone(L, {diag_block(3, 1), diag_block(1, 1)});
  NilpotentCone other_swapped = conjugate(L, swap, other);
  FanCollection merged = make_fan({other, other_swapped}, {swap});
  CHECK(count_dim(merged, 2) == 1);
}

TEST_CASE("weak_fan_check on the faces of a single cone") {
  PolarizedLattice L = wftest::abelian4_lattice();
  NilpotentCone sigma = make_cone(L, {diag_block(2, 1), diag_block(1, 2)});
  FanCollection fan = make_fan({sigma}, {});
  FanVerdict v = weak_fan_check(fan);
  CHECK(v.ok);
  FanVerdict card = cardinality_criterion(fan);
  CHECK(card.ok);
}

TEST_CASE("overlapping certified sectors violate the weak-fan predicate") {
  PolarizedLattice L = wftest::abelian4_lattice();
  NilpotentCone sigma = make_cone(L, {diag_block(2, 1), diag_block(1, 2)});
  NilpotentCone tau = make_cone(L, {diag_block(3, 1), diag_block(1, 1)});
  FanCollection fan = make_fan({sigma, tau}, {});
  FanVerdict v = weak_fan_check(fan);
  CHECK(!v.ok);
  REQUIRE(v.sigma);
  REQUIRE(v.tau_gamma);
  REQUIRE(v.flag);
  // The violation witness is genuinely a common certifying flag.
  CHECK(certify_orbit_pair_cached(L, *v.sigma, *v.flag).certified);
  CHECK(certify_orbit_pair_cached(L, *v.tau_gamma, *v.flag).certified);
  CHECK(*v.sigma != *v.tau_gamma);
  REQUIRE(intersect_cones(*v.sigma, *v.tau_gamma));

  FanVerdict card = cardinality_criterion(fan);
  CHECK(!card.ok);
}

TEST_CASE("split_cone_by_rays orders sectors by slope") {
  PolarizedLattice L = wftest::abelian4_lattice();
  NilpotentCone quadrant = make_cone(L, {diag_block(1, 0), diag_block(0, 1)});
  NilpotentCone mid = make_cone(L, {diag_block(1, 1)});
  auto parts = split_cone_by_rays(L, quadrant, {mid});
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == make_cone(L, {diag_block(1, 0), diag_block(1, 1)}));
  CHECK(parts[1] == make_cone(L, {diag_block(1, 1), diag_block(0, 1)}));

  // Two rays, slopes 1/2 < 1: three sectors.
  NilpotentCone low = make_cone(L, {diag_block(2, 1)});
  auto parts3 = split_cone_by_rays(L, quadrant, {mid, low});
  REQUIRE(parts3.size() == 3);
  CHECK(parts3[0] == make_cone(L, {diag_block(1, 0), diag_block(2, 1)}));
  CHECK(parts3[1] == make_cone(L, {diag_block(2, 1), diag_block(1, 1)}));
  CHECK(parts3[2] == make_cone(L, {diag_block(1, 1), diag_block(0, 1)}));

  // A boundary ray is rejected.
  NilpotentCone edge = make_cone(L, {diag_block(1, 0)});
  CHECK_THROWS_AS(split_cone_by_rays(L, quadrant, {edge}), DomainError);
}

TEST_CASE("first and second modification repair the overlap example") {
  PolarizedLattice L = wftest::abelian4_lattice();
  NilpotentCone sigma = make_cone(L, {diag_block(2, 1), diag_block(1, 2)});
  NilpotentCone tau = make_cone(L, {diag_block(3, 1), diag_block(1, 1)});
  FanCollection fan = make_fan({sigma, tau}, {});
  REQUIRE(!weak_fan_check(fan).ok);

  auto [after1, report1] = first_modification(fan);
  CHECK(report1.stage == "first");
  CHECK(report1.input_orbits == fan.reps.size());
  // sigma loses the ray diag(1,1), tau loses diag(2,1); one shared sector.
  CHECK(report1.removed_rays.size() == 2);
  CHECK(count_dim(after1, 2) == 3);
  for (const auto& [key, ok] : report1.certified) {
    (void)key;
    CHECK(ok);
  }

  auto [after2, report2] = second_modification(after1);
  CHECK(report2.stage == "second");
  // Nothing left to remove: the sectors are already separated.
  CHECK(after2.reps.size() == after1.reps.size());

  CHECK(weak_fan_check(after2).ok);
  CHECK(cardinality_criterion(after2).ok);
}

TEST_CASE("build_weak_fan is a no-op on an already-weak fan") {
  PolarizedLattice L = wftest::abelian4_lattice();
  NilpotentCone sigma = make_cone(L, {diag_block(2, 1), diag_block(1, 2)});
  FanCollection fan = make_fan({sigma}, {});
  auto [out, reports] = build_weak_fan(fan);
  CHECK(out.reps.size() == fan.reps.size());
  CHECK(reports.size() == 2);
  CHECK(reports[0].removed_rays.empty());
  CHECK(reports[1].removed_rays.empty());
}

TEST_CASE("build_weak_fan with a nontrivial witness pool merges swapped sectors") {
  PolarizedLattice L = wftest::abelian4_lattice();
  Matrix swap = block_sp(mati({{0, 1}, {1, 0}}));
  NilpotentCone sigma = make_cone(L, {diag_block(2, 1), diag_block(1, 2)});
  NilpotentCone tau = make_cone(L, {diag_block(3, 1), diag_block(1, 1)});
  FanCollection fan = make_fan({sigma, tau}, {swap});
  REQUIRE(!weak_fan_check(fan).ok);

  auto [out, reports] = build_weak_fan(fan);
  CHECK(cardinality_criterion(out).ok);
  CHECK(weak_fan_check(out).ok);
  // Sectors (1/2,1) and (1,2) are swap-conjugate: two 2-dim orbits remain,
  // and the rays diag(2,1) ~ diag(1,2) merge as well.
  CHECK(count_dim(out, 2) == 2);
  CHECK(count_dim(out, 1) == 3);
  CHECK(count_dim(out, 0) == 1);
}

TEST_CASE("subdivision outputs partition the inputs exactly") {
  PolarizedLattice L = wftest::abelian4_lattice();
  NilpotentCone sigma = make_cone(L, {diag_block(2, 1), diag_block(1, 2)});
  NilpotentCone tau = make_cone(L, {diag_block(3, 1), diag_block(1, 1)});
  FanCollection fan = make_fan({sigma, tau}, {});
  auto [out, reports] = build_weak_fan(fan);

  // Dense slope sampling: every rational point of each input 2-dim cone
  // lies in exactly one output cone (sector or removed ray).
  for (const NilpotentCone& parent : {sigma, tau}) {
    for (long a = 1; a <= 12; ++a)
      for (long b = 1; b <= 12; ++b) {
        Matrix p = GaussRat(Rat(a)) * parent.generators[0] +
                   GaussRat(Rat(b)) * parent.generators[1];
        std::size_t hits = 0;
        for (const NilpotentCone& c : out.reps)
          if (!c.is_zero() && contains_point(c, p)) ++hits;
        CHECK(hits == 1);
      }
  }
}

TEST_CASE("ray_refine splits the host cone along the new ray") {
  PolarizedLattice L = wftest::abelian4_lattice();
  NilpotentCone sigma = make_cone(L, {diag_block(2, 1), diag_block(1, 2)});
  FanCollection fan = make_fan({sigma}, {});
  NilpotentCone upsilon = make_cone(L, {diag_block(1, 1)});

  auto [out, report] = ray_refine(fan, upsilon);
  CHECK(report.stage == "ray");
  CHECK(count_dim(out, 2) == 2);
  CHECK(count_dim(out, 1) == 3);
  CHECK(out.rep_index(upsilon).has_value());
  CHECK(cardinality_criterion(out).ok);

  // Refining along an existing representative is a no-op.
  auto [again, report2] = ray_refine(out, upsilon);
  CHECK(again.reps.size() == out.reps.size());

  // A ray outside every representative is rejected.
  NilpotentCone outside = make_cone(L, {diag_block(-1, -1)});
  CHECK_THROWS_WITH_AS(ray_refine(fan, outside), doctest::Contains("RayNotInCone"),
                       DomainError);
}

TEST_CASE("star_subdivide inserts the exceptional ray") {
  PolarizedLattice L = wftest::abelian4_lattice();
  NilpotentCone sigma = make_cone(L, {diag_block(2, 1), diag_block(1, 2)});
  FanCollection fan = make_fan({sigma}, {});
  NilpotentCone ray_i = make_cone(L, {diag_block(2, 1)});
  NilpotentCone ray_j = make_cone(L, {diag_block(1, 2)});
  std::size_t i = *fan.rep_index(ray_i);
  std::size_t j = *fan.rep_index(ray_j);

  auto [out, report] = star_subdivide(fan, i, j);
  CHECK(report.stage == "star");
  // sigma_E = span{N_i + N_j} = ray{diag(1,1)} after primitive rescale.
  NilpotentCone sigma_e = make_cone(L, {diag_block(1, 1)});
  CHECK(out.rep_index(sigma_e).has_value());
  CHECK(count_dim(out, 2) == 2);
  CHECK(out.rep_index(make_cone(L, {diag_block(2, 1), diag_block(1, 1)})).has_value());
  CHECK(out.rep_index(make_cone(L, {diag_block(1, 1), diag_block(1, 2)})).has_value());

  // Iterating on the two children produces four chambers.
  std::size_t i2 = *out.rep_index(ray_i);
  std::size_t e2 = *out.rep_index(sigma_e);
  auto [out2, rep2] = star_subdivide(out, i2, e2);
  std::size_t j3 = *out2.rep_index(ray_j);
  std::size_t e3 = *out2.rep_index(sigma_e);
  auto [out3, rep3] = star_subdivide(out2, j3, e3);
  CHECK(count_dim(out3, 2) == 4);

  // Cones not containing both rays are untouched.
  NilpotentCone elsewhere =
      make_cone(L, {wftest::block_nilpotent(mati({{2, 1}, {1, 2}})),
                    wftest::block_nilpotent(Matrix::identity(2))});
  FanCollection mixed = make_fan({sigma, elsewhere}, {});
  std::size_t mi = *mixed.rep_index(ray_i);
  std::size_t mj = *mixed.rep_index(ray_j);
  auto [mout, mrep] = star_subdivide(mixed, mi, mj);
  CHECK(mout.rep_index(elsewhere).has_value());

  // MissingRay when an index is not one-dimensional.
  std::size_t si = *mout.rep_index(make_cone(L, {diag_block(2, 1), diag_block(1, 1)}));
  CHECK_THROWS_WITH_AS(star_subdivide(mout, si, mj), doctest::Contains("MissingRay"),
                       DomainError);
}
