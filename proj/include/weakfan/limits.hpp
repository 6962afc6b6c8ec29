#pragma once

// Relative weight filtrations, Deligne splittings, grading elements, and
// the nilpotent-orbit-pair certificate.

#include <optional>
#include <string>
#include <vector>

#include "weakfan/cones.hpp"
#include "weakfan/domain.hpp"
#include "weakfan/splitting.hpp"

namespace weakfan {

// The unique center-0 increasing filtration with N W_l in W_{l-2} and
// N^l : Gr_l -> Gr_{-l} an isomorphism; both axioms are re-verified before
// returning. Throws NotNilpotentError.
WeightFiltration weight_filtration(const Matrix& N);

struct ConeWeightResult {
  std::optional<WeightFiltration> filtration;  // center 0; set iff constant
  // On NotConstant: two interior/generator points with W(a) != W(b).
  std::optional<std::pair<Matrix, Matrix>> witnesses;
  bool constant() const { return filtration.has_value(); }
};

// Evaluates W at each generator, at the fixed deterministic interior set
// (pairwise sums, barycenter) and at `samples` seeded random interior
// points; returns the common value or the NotConstant witnesses.
ConeWeightResult cone_weight_filtration(const NilpotentCone& sigma,
                                        std::size_t samples);

struct SplittingFailure {
  long p = 0, q = 0;
  std::string detail;
};

struct SplittingResult {
  std::optional<DeligneSplitting> splitting;
  std::optional<SplittingFailure> failure;
  bool ok() const { return splitting.has_value(); }
};

// Deligne's I^{p,q} for the pair (W, F), W increasing with center
// W.center; verifies the reconstruction identities and reports the first
// failing piece when (W, F) is not a mixed Hodge structure.
SplittingResult deligne_splitting(const WeightFiltration& W, const Filtration& F);

bool is_r_split(const DeligneSplitting& S);

// The operator acting by p+q-n on I^{p,q}.
GradingElement grading_element(const DeligneSplitting& S);

// Rational point of {Y' in I_R : ad_M(Y') = 2M for all generators M},
// I = intersection of im(ad_M); nullopt when the system is inconsistent
// (including when Y0 fails the [M, Y0] = 2M pre-check).
std::optional<Matrix> rationalize_grading(const Matrix& Y0,
                                          const std::vector<Matrix>& cone_generators,
                                          const PolarizedLattice& L);

struct OrbitCertificate {
  bool certified = false;
  std::optional<WeightFiltration> weight;       // shifted to center n
  std::optional<DeligneSplitting> splitting;
  bool r_split = false;
  // On Refuted: which axiom failed and a witness description.
  std::string failure_axiom;   // horizontality | weight-constancy | mhs | polarization
  std::string failure_detail;
};

// Decision procedure for the orbit-pair conditions: (a) N F^p in F^{p-1},
// (b) constant cone weight filtration, (c) (W(sigma)[-n], F) is an MHS,
// (d) each primitive graded piece carries a pure Hodge structure polarized
// by Q(., N^l .), positivity tested exactly. Throws DomainError when the
// preconditions (commuting generators, F in the compact dual) fail.
OrbitCertificate certify_orbit_pair(const PolarizedLattice& L,
                                    const NilpotentCone& sigma,
                                    const HodgeFlag& F);

// Memoized wrapper keyed on the canonical forms of (L, sigma, F).
const OrbitCertificate& certify_orbit_pair_cached(const PolarizedLattice& L,
                                                  const NilpotentCone& sigma,
                                                  const HodgeFlag& F);

// in_period_domain(exp(i t sum N_j) . F) at each height t.
std::vector<bool> sample_orbit_membership(const PolarizedLattice& L,
                                          const NilpotentCone& sigma,
                                          const HodgeFlag& F,
                                          const std::vector<Rat>& heights);

// Generators, pairwise sums, barycenter (the zero matrix for the zero
// cone) - the fixed interior test set used by the certificate.
std::vector<Matrix> tested_interior_points(const NilpotentCone& sigma,
                                           std::size_t ambient_dim);

std::string lattice_key(const PolarizedLattice& L);

}  // namespace weakfan
