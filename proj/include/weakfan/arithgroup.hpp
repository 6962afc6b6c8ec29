#pragma once

// Integral automorphisms, bounded word enumeration of Gamma_{sigma,tau},
// intersection sets, and double-coset bucketing.

#include <optional>
#include <string>
#include <vector>

#include "weakfan/cones.hpp"
#include "weakfan/limits.hpp"

namespace weakfan {

struct GroupElement {
  Matrix matrix;
  // Provenance word over the supplied generators: (generator index,
  // exponent +1/-1) letters, empty for the identity.
  std::vector<std::pair<std::size_t, int>> word;

  std::string key() const { return matrix.str(); }
};

struct GammaWitnessSet {
  NilpotentCone sigma, tau;
  std::vector<GroupElement> elements;  // each passes is_gamma_member
  std::size_t search_bound = 0;
};

// Membership test for Gamma_{sigma,tau}: the weight-filtration pre-filter
// W(sigma) = gamma W(tau), then nonempty open intersection, then a common
// certifying flag from flag_pool plus the gamma-translate of tau_flag.
bool is_gamma_member(const PolarizedLattice& L, const Matrix& gamma,
                     const NilpotentCone& sigma, const NilpotentCone& tau,
                     const std::vector<HodgeFlag>& flag_pool,
                     const std::optional<HodgeFlag>& tau_flag = std::nullopt);

// All words of length <= max_word_len over the generators (letters are
// generators and their inverses), deduplicated by matrix, filtered by
// is_gamma_member; breadth-first deterministic order.
GammaWitnessSet enumerate_gamma(const PolarizedLattice& L,
                                const NilpotentCone& sigma,
                                const NilpotentCone& tau,
                                const std::vector<Matrix>& generators,
                                std::size_t max_word_len,
                                const std::vector<HodgeFlag>& flag_pool,
                                const std::optional<HodgeFlag>& tau_flag = std::nullopt);

// {sigma n Ad_gamma(tau)} deduplicated; a lower approximation of the
// paper-level intersection collection, sorted by canonical key.
std::vector<NilpotentCone> intersection_set(const PolarizedLattice& L,
                                            const GammaWitnessSet& W);

struct CosetProbe {
  std::size_t i = 0, j = 0;  // indices into the witness set
  bool same = false;         // true = certified equal double coset; false = Unknown
};

struct CosetBuckets {
  // bucket key (canonical intersection cone) -> element indices.
  std::vector<std::pair<std::string, std::vector<std::size_t>>> buckets;
  std::vector<CosetProbe> probes;  // one per same-bucket pair
};

// Partition by canonical intersection cone; different buckets are
// certified distinct double cosets. Same-bucket pairs are probed for
// gamma' = z gamma z' with z, z' words of length <= probe_bound over the
// supplied centralizer generators.
CosetBuckets coset_buckets(const PolarizedLattice& L, const GammaWitnessSet& W,
                           const std::vector<Matrix>& centralizer_sigma,
                           const std::vector<Matrix>& centralizer_tau,
                           std::size_t probe_bound);

// All distinct word matrices up to the bound, breadth-first; the identity
// is the first element.
std::vector<GroupElement> word_ball(const PolarizedLattice& L,
                                    const std::vector<Matrix>& generators,
                                    std::size_t max_word_len);

}  // namespace weakfan
