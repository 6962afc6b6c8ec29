#pragma once

// Collections of cone orbit representatives with witness flags and a
// gamma-witness pool; the weak-fan predicate, the two-stage subdivision,
// ray refinement and star subdivision.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weakfan/arithgroup.hpp"

namespace weakfan {

struct FanCollection {
  PolarizedLattice lattice;
  // Orbit representatives: canonical cones, pairwise non-conjugate over
  // the witness pool, closed under faces up to the pool, dim <= 2.
  std::vector<NilpotentCone> reps;
  // Witness flag per cone key; each rep certifies against its flag.
  std::map<std::string, HodgeFlag> witness_flags;
  // Global gamma candidate pool; the identity is always element 0.
  std::vector<GroupElement> witness_pool;

  const HodgeFlag& flag_for(const NilpotentCone& c) const;
  std::optional<std::size_t> rep_index(const NilpotentCone& c) const;
};

// Canonicalizes and checks the collection invariants: pool elements lie in
// G(Z) (identity added if missing), conjugate reps are merged, missing
// faces are added with inherited flags, and every rep must certify against
// its witness flag. Throws DomainError/InputShapeError on violations.
void validate_collection(FanCollection& fan);

// Filtered pool for the ordered pair of reps (i, j).
std::vector<GroupElement> gamma_witnesses(const FanCollection& fan,
                                          std::size_t i, std::size_t j);

struct FanVerdict {
  bool ok = true;
  std::string detail;
  // Violation witness data.
  std::optional<NilpotentCone> sigma, tau_gamma;
  std::optional<Matrix> gamma;
  std::optional<HodgeFlag> flag;
};

// Weak-fan predicate relative to the witness pool: a Violation is a pair
// of distinct intersecting cones sharing a certifying flag.
FanVerdict weak_fan_check(const FanCollection& fan);

// |I_{sigma,sigma}| = 1 and |I_{sigma,tau}| = 0 for distinct orbits, on
// witness data; equivalent to weak_fan_check on valid collections.
FanVerdict cardinality_criterion(const FanCollection& fan);

struct SubdivisionReport {
  std::string stage;  // first | second | ray | star
  std::size_t input_orbits = 0;
  std::size_t output_orbits = 0;
  // Per subdivided 2-dim rep: the removed interior rays, in slope order.
  std::vector<std::pair<std::string, std::vector<NilpotentCone>>> removed_rays;
  // Per output cone: certification against the inherited flag.
  std::vector<std::pair<std::string, bool>> certified;
};

// Stage one: remove the one-dimensional witnessed intersections from every
// two-dimensional rep and replace it by the open complementary sectors;
// the removed rays join the collection as new one-dimensional orbits.
std::pair<FanCollection, SubdivisionReport> first_modification(const FanCollection& fan);

// Stage two: remove the witnessed conjugates of the one-dimensional reps
// from every two-dimensional rep and replace it by the open sectors.
std::pair<FanCollection, SubdivisionReport> second_modification(const FanCollection& fan);

// Both stages, with the cardinality criterion asserted on the result.
std::pair<FanCollection, std::vector<SubdivisionReport>> build_weak_fan(
    const FanCollection& fan);

// Adds the orbit of the ray upsilon (contained in the closure of some rep)
// and splits every rep meeting witnessed conjugates of upsilon.
std::pair<FanCollection, SubdivisionReport> ray_refine(const FanCollection& fan,
                                                       const NilpotentCone& upsilon);

// Star subdivision at the rays reps[i], reps[j]: adds the exceptional ray
// span{N_i + N_j} and replaces cone{N_i, N_j} by the two chambers.
std::pair<FanCollection, SubdivisionReport> star_subdivide(const FanCollection& fan,
                                                           std::size_t i,
                                                           std::size_t j);

// Open sectors of a 2-dim cone cut by interior rays, in slope order.
std::vector<NilpotentCone> split_cone_by_rays(const PolarizedLattice& L,
                                              const NilpotentCone& sigma,
                                              std::vector<NilpotentCone> rays);

}  // namespace weakfan
