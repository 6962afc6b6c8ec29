#include "weakfan/arithgroup.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "weakfan/errors.hpp"
#include "weakfan/parallel.hpp"

namespace weakfan {

std::vector<GroupElement> word_ball(const PolarizedLattice& L,
                                    const std::vector<Matrix>& generators,
                                    std::size_t max_word_len) {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (!in_gamma_group(L, generators[i]))
      throw DomainError("NotInGZ: generator " + std::to_string(i));

  // Letters: g_0, g_0^{-1}, g_1, ... in a fixed order.
  std::vector<std::pair<Matrix, std::pair<std::size_t, int>>> letters;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    letters.push_back({generators[i], {i, +1}});
    Matrix inv = *generators[i].inverse();
    if (inv != generators[i]) letters.push_back({std::move(inv), {i, -1}});
  }

  std::vector<GroupElement> ball;
  std::set<std::string> seen;
  GroupElement id{Matrix::identity(L.dim), {}};
  seen.insert(id.key());
  ball.push_back(std::move(id));
  std::size_t frontier_begin = 0;
  for (std::size_t len = 1; len <= max_word_len; ++len) {
    const std::size_t frontier_end = ball.size();
    for (std::size_t w = frontier_begin; w < frontier_end; ++w)
      for (const auto& [m, letter] : letters) {
        GroupElement next;
        next.matrix = ball[w].matrix * m;
        if (!seen.insert(next.key()).second) continue;
        next.word = ball[w].word;
        next.word.push_back(letter);
        ball.push_back(std::move(next));
      }
    frontier_begin = frontier_end;
  }
  return ball;
}

bool is_gamma_member(const PolarizedLattice& L, const Matrix& gamma,
                     const NilpotentCone& sigma, const NilpotentCone& tau,
                     const std::vector<HodgeFlag>& flag_pool,
                     const std::optional<HodgeFlag>& tau_flag) {
  if (!in_gamma_group(L, gamma))
    throw DomainError("NotInGZ: candidate is not an integral Q-automorphism");

  // Necessary pre-filter: W(sigma) = gamma W(tau).
  ConeWeightResult ws = cone_weight_filtration(sigma, 2);
  ConeWeightResult wt = cone_weight_filtration(tau, 2);
  if (!ws.constant() || !wt.constant()) return false;
  if (ws.filtration->steps != wt.filtration->apply(gamma).steps) return false;

  NilpotentCone tau_g = conjugate(L, gamma, tau);
  if (!intersect_cones(sigma, tau_g)) return false;

  std::vector<HodgeFlag> candidates = flag_pool;
  if (tau_flag) candidates.push_back(tau_flag->apply(gamma));
  for (const HodgeFlag& F : candidates) {
    if (!in_compact_dual(L, F)) continue;
    if (certify_orbit_pair_cached(L, sigma, F).certified &&
        certify_orbit_pair_cached(L, tau_g, F).certified)
      return true;
  }
  return false;
}

GammaWitnessSet enumerate_gamma(const PolarizedLattice& L,
                                const NilpotentCone& sigma,
                                const NilpotentCone& tau,
                                const std::vector<Matrix>& generators,
                                std::size_t max_word_len,
                                const std::vector<HodgeFlag>& flag_pool,
                                const std::optional<HodgeFlag>& tau_flag) {
  GammaWitnessSet out;
  out.sigma = sigma;
  out.tau = tau;
  out.search_bound = max_word_len;
  std::vector<GroupElement> ball = word_ball(L, generators, max_word_len);
  std::vector<char> member = parallel_map<char>(ball.size(), [&](std::size_t i) {
    return static_cast<char>(
        is_gamma_member(L, ball[i].matrix, sigma, tau, flag_pool, tau_flag));
  });
  for (std::size_t i = 0; i < ball.size(); ++i)
    if (member[i]) out.elements.push_back(ball[i]);
  return out;
}

std::vector<NilpotentCone> intersection_set(const PolarizedLattice& L,
                                            const GammaWitnessSet& W) {
  std::map<std::string, NilpotentCone> dedup;
  for (const GroupElement& g : W.elements) {
    auto cap = intersect_cones(W.sigma, conjugate(L, g.matrix, W.tau));
    if (!cap) continue;  // defensively skip; members always intersect
    dedup.emplace(cap->key(), *cap);
  }
  std::vector<NilpotentCone> out;
  out.reserve(dedup.size());
  for (auto& [k, c] : dedup) out.push_back(std::move(c));
  return out;
}

CosetBuckets coset_buckets(const PolarizedLattice& L, const GammaWitnessSet& W,
                           const std::vector<Matrix>& centralizer_sigma,
                           const std::vector<Matrix>& centralizer_tau,
                           std::size_t probe_bound) {
  CosetBuckets out;
  std::map<std::string, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < W.elements.size(); ++i) {
    auto cap = intersect_cones(W.sigma, conjugate(L, W.elements[i].matrix, W.tau));
    std::string key = cap ? cap->key() : "(empty)";
    buckets[key].push_back(i);
  }
  for (auto& [k, idxs] : buckets) out.buckets.emplace_back(k, idxs);

  std::vector<GroupElement> zs = word_ball(L, centralizer_sigma, probe_bound);
  std::vector<GroupElement> zts = word_ball(L, centralizer_tau, probe_bound);
  for (const auto& [key, idxs] : out.buckets) {
    (void)key;
    for (std::size_t a = 0; a < idxs.size(); ++a)
      for (std::size_t b = a + 1; b < idxs.size(); ++b) {
        const Matrix& ga = W.elements[idxs[a]].matrix;
        const Matrix& gb = W.elements[idxs[b]].matrix;
        bool same = false;
        for (const GroupElement& z : zs) {
          Matrix zg = z.matrix * ga;
          for (const GroupElement& zp : zts) {
            if (zg * zp.matrix == gb) {
              same = true;
              break;
            }
          }
          if (same) break;
        }
        out.probes.push_back(CosetProbe{idxs[a], idxs[b], same});
      }
  }
  return out;
}

}  // namespace weakfan
