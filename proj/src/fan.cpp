#include "weakfan/fan.hpp"

#include <algorithm>
#include <set>

#include "weakfan/errors.hpp"

namespace weakfan {

namespace {

bool cones_pool_conjugate(const PolarizedLattice& L, const NilpotentCone& a,
                          const NilpotentCone& b,
                          const std::vector<GroupElement>& pool) {
  if (a == b) return true;
  for (const GroupElement& g : pool)
    if (conjugate(L, g.matrix, b) == a) return true;
  return false;
}

// Membership relative to the two cones' own witness flags; optionally
// reports the common certifying flag.
bool pair_member(const FanCollection& fan, const NilpotentCone& sigma,
                 const NilpotentCone& tau, const Matrix& gamma,
                 HodgeFlag* found = nullptr) {
  const HodgeFlag& fs = fan.flag_for(sigma);
  const HodgeFlag& ft = fan.flag_for(tau);
  if (!is_gamma_member(fan.lattice, gamma, sigma, tau, {fs}, ft)) return false;
  if (found) {
    NilpotentCone tau_g = conjugate(fan.lattice, gamma, tau);
    for (HodgeFlag cand : {fs, ft.apply(gamma)}) {
      if (in_compact_dual(fan.lattice, cand) &&
          certify_orbit_pair_cached(fan.lattice, sigma, cand).certified &&
          certify_orbit_pair_cached(fan.lattice, tau_g, cand).certified) {
        *found = cand;
        break;
      }
    }
  }
  return true;
}

struct Dir2 {
  Rat x, y;
};

// Sorted deduplicated output order for reps.
void sort_reps(std::vector<NilpotentCone>& reps) {
  std::sort(reps.begin(), reps.end(),
            [](const NilpotentCone& a, const NilpotentCone& b) {
              if (a.dim() != b.dim()) return a.dim() < b.dim();
              return a.key() < b.key();
            });
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
}

}  // namespace

const HodgeFlag& FanCollection::flag_for(const NilpotentCone& c) const {
  auto it = witness_flags.find(c.key());
  if (it == witness_flags.end())
    throw DomainError("fan: no witness flag for cone " + c.key());
  return it->second;
}

std::optional<std::size_t> FanCollection::rep_index(const NilpotentCone& c) const {
  for (std::size_t i = 0; i < reps.size(); ++i)
    if (reps[i] == c) return i;
  return std::nullopt;
}

void validate_collection(FanCollection& fan) {
  fan.lattice.validate();
  for (const NilpotentCone& c : fan.reps)
    if (c.dim() > 2)
      throw DomainError("fan: representative of dimension > 2: " + c.key());

  // Pool: integral Q-automorphisms, identity first.
  for (const GroupElement& g : fan.witness_pool)
    if (!in_gamma_group(fan.lattice, g.matrix))
      throw DomainError("fan: pool element not in G(Z)");
  Matrix id = Matrix::identity(fan.lattice.dim);
  bool has_id = false;
  for (const GroupElement& g : fan.witness_pool) has_id |= g.matrix == id;
  if (!has_id)
    fan.witness_pool.insert(fan.witness_pool.begin(), GroupElement{id, {}});

  // Merge pool-conjugate representatives (keep the first).
  std::vector<NilpotentCone> merged;
  for (const NilpotentCone& c : fan.reps) {
    bool dup = false;
    for (const NilpotentCone& m : merged)
      if (cones_pool_conjugate(fan.lattice, m, c, fan.witness_pool)) {
        dup = true;
        break;
      }
    if (!dup) merged.push_back(c);
  }
  fan.reps = std::move(merged);

  // Face closure up to the pool; faces inherit the parent flag.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < fan.reps.size(); ++i) {
      for (const NilpotentCone& f : faces(fan.reps[i])) {
        bool present = false;
        for (const NilpotentCone& r : fan.reps)
          if (cones_pool_conjugate(fan.lattice, r, f, fan.witness_pool)) {
            present = true;
            break;
          }
        if (!present) {
          if (!fan.witness_flags.count(f.key())) {
            std::vector<HodgeFlag> cands;
            cands.push_back(fan.flag_for(fan.reps[i]));
            for (const auto& [k, fl] : fan.witness_flags) {
              (void)k;
              cands.push_back(fl);
            }
            for (const HodgeFlag& fl : cands)
              if (certify_orbit_pair_cached(fan.lattice, f, fl).certified) {
                fan.witness_flags.emplace(f.key(), fl);
                break;
              }
            if (!fan.witness_flags.count(f.key()))
              throw DomainError("fan: no witness flag certifies the face " +
                                f.key());
          }
          fan.reps.push_back(f);
          changed = true;
        }
      }
    }
  }
  sort_reps(fan.reps);

  // Every rep must certify against its witness flag.
  for (const NilpotentCone& c : fan.reps) {
    const OrbitCertificate& cert =
        certify_orbit_pair_cached(fan.lattice, c, fan.flag_for(c));
    if (!cert.certified)
      throw DomainError("fan: representative " + c.key() +
                        " fails certification: " + cert.failure_axiom + " (" +
                        cert.failure_detail + ")");
  }
}

std::vector<GroupElement> gamma_witnesses(const FanCollection& fan, std::size_t i,
                                          std::size_t j) {
  std::vector<GroupElement> out;
  for (const GroupElement& g : fan.witness_pool)
    if (pair_member(fan, fan.reps[i], fan.reps[j], g.matrix)) out.push_back(g);
  return out;
}

FanVerdict weak_fan_check(const FanCollection& fan) {
  FanVerdict v;
  for (std::size_t i = 0; i < fan.reps.size(); ++i)
    for (std::size_t j = 0; j < fan.reps.size(); ++j)
      for (const GroupElement& g : fan.witness_pool) {
        HodgeFlag common;
        if (!pair_member(fan, fan.reps[i], fan.reps[j], g.matrix, &common))
          continue;
        NilpotentCone tau_g = conjugate(fan.lattice, g.matrix, fan.reps[j]);
        if (tau_g != fan.reps[i]) {
          v.ok = false;
          v.detail = "cones " + fan.reps[i].key() + " and " + tau_g.key() +
                     " intersect and share a certifying flag";
          v.sigma = fan.reps[i];
          v.tau_gamma = tau_g;
          v.gamma = g.matrix;
          v.flag = common;
          return v;
        }
      }
  return v;
}

FanVerdict cardinality_criterion(const FanCollection& fan) {
  FanVerdict v;
  for (std::size_t i = 0; i < fan.reps.size(); ++i)
    for (std::size_t j = 0; j < fan.reps.size(); ++j) {
      std::set<std::string> inter;
      std::optional<NilpotentCone> sample;
      for (const GroupElement& g : fan.witness_pool) {
        if (!pair_member(fan, fan.reps[i], fan.reps[j], g.matrix)) continue;
        auto cap =
            intersect_cones(fan.reps[i], conjugate(fan.lattice, g.matrix, fan.reps[j]));
        if (cap) {
          inter.insert(cap->key());
          if (!sample) sample = *cap;
        }
      }
      if (i == j) {
        if (inter.size() != 1 || *inter.begin() != fan.reps[i].key()) {
          v.ok = false;
          v.detail = "|I(sigma,sigma)| != 1 for " + fan.reps[i].key();
          v.sigma = fan.reps[i];
          return v;
        }
      } else if (!inter.empty()) {
        v.ok = false;
        v.detail = "|I(sigma,tau)| = " + std::to_string(inter.size()) +
                   " for distinct orbits " + fan.reps[i].key() + ", " +
                   fan.reps[j].key();
        v.sigma = fan.reps[i];
        v.tau_gamma = sample;
        return v;
      }
    }
  return v;
}

std::vector<NilpotentCone> split_cone_by_rays(const PolarizedLattice& L,
                                              const NilpotentCone& sigma,
                                              std::vector<NilpotentCone> rays) {
  if (sigma.dim() != 2)
    throw InputShapeError("split_cone_by_rays: cone must be 2-dimensional");
  const Matrix& G1 = sigma.generators[0];
  const Matrix& G2 = sigma.generators[1];
  Matrix chart =
      Matrix::col_vector(flatten(G1)).hstack(Matrix::col_vector(flatten(G2)));

  std::vector<std::pair<Dir2, NilpotentCone>> cuts;
  std::set<std::string> seen;
  for (NilpotentCone& r : rays) {
    if (r.dim() != 1)
      throw InputShapeError("split_cone_by_rays: removed cone is not a ray");
    if (!seen.insert(r.key()).second) continue;
    auto sol = solve_linear(chart, flatten(r.generators[0]));
    if (!sol) throw DomainError("split_cone_by_rays: ray outside the cone plane");
    Rat a = sol->particular[0].re, b = sol->particular[1].re;
    if (!sol->particular[0].im.is_zero() || !sol->particular[1].im.is_zero() ||
        a.sign() <= 0 || b.sign() <= 0)
      throw DomainError("split_cone_by_rays: ray is not interior");
    cuts.push_back({Dir2{a, b}, std::move(r)});
  }
  // Ascending slope b/a between (1,0) and (0,1).
  std::sort(cuts.begin(), cuts.end(), [](const auto& u, const auto& v) {
    return u.first.y * v.first.x < v.first.y * u.first.x;
  });

  std::vector<Matrix> bounds;
  bounds.push_back(G1);
  for (const auto& [d, r] : cuts) bounds.push_back(r.generators[0]);
  bounds.push_back(G2);

  std::vector<NilpotentCone> out;
  for (std::size_t t = 0; t + 1 < bounds.size(); ++t)
    out.push_back(make_cone(L, {bounds[t], bounds[t + 1]}));
  return out;
}

namespace {

// Shared tail of the subdivision stages: assemble the output collection,
// inherit flags, re-certify, and fill the report.
std::pair<FanCollection, SubdivisionReport> assemble(
    const FanCollection& fan, const std::string& stage,
    const std::map<std::string, std::vector<NilpotentCone>>& removed,
    const std::vector<NilpotentCone>& extra_rays) {
  FanCollection out;
  out.lattice = fan.lattice;
  out.witness_pool = fan.witness_pool;
  out.witness_flags = fan.witness_flags;

  SubdivisionReport report;
  report.stage = stage;
  report.input_orbits = fan.reps.size();

  std::vector<NilpotentCone> next;
  for (const NilpotentCone& rep : fan.reps) {
    auto it = removed.find(rep.key());
    if (rep.dim() != 2 || it == removed.end() || it->second.empty()) {
      next.push_back(rep);
      continue;
    }
    std::vector<NilpotentCone> rays;
    std::set<std::string> seen_rays;
    for (const NilpotentCone& r : it->second)
      if (seen_rays.insert(r.key()).second) rays.push_back(r);
    report.removed_rays.emplace_back(rep.key(), rays);
    for (NilpotentCone& part : split_cone_by_rays(fan.lattice, rep, rays)) {
      if (!out.witness_flags.count(part.key()))
        out.witness_flags.emplace(part.key(), fan.flag_for(rep));
      next.push_back(std::move(part));
    }
    for (const NilpotentCone& ray : rays) {
      if (!out.witness_flags.count(ray.key()))
        out.witness_flags.emplace(ray.key(), fan.flag_for(rep));
      next.push_back(ray);
    }
  }
  for (const NilpotentCone& r : extra_rays) next.push_back(r);

  // Conjugacy dedup over the pool, deterministic keep-first order.
  sort_reps(next);
  std::vector<NilpotentCone> merged;
  for (const NilpotentCone& c : next) {
    bool dup = false;
    for (const NilpotentCone& m : merged)
      if (cones_pool_conjugate(out.lattice, m, c, out.witness_pool)) {
        dup = true;
        break;
      }
    if (!dup) merged.push_back(c);
  }
  out.reps = std::move(merged);
  report.output_orbits = out.reps.size();

  for (const NilpotentCone& c : out.reps) {
    const OrbitCertificate& cert =
        certify_orbit_pair_cached(out.lattice, c, out.flag_for(c));
    report.certified.emplace_back(c.key(), cert.certified);
    if (!cert.certified)
      throw DomainError("subdivision: output cone " + c.key() +
                        " fails certification with inherited flag: " +
                        cert.failure_axiom);
  }
  return {std::move(out), std::move(report)};
}

}  // namespace

std::pair<FanCollection, SubdivisionReport> first_modification(const FanCollection& fan) {
  std::map<std::string, std::vector<NilpotentCone>> removed;
  std::vector<NilpotentCone> new_rays;
  for (const NilpotentCone& sigma : fan.reps) {
    if (sigma.dim() != 2) continue;
    for (const NilpotentCone& tau : fan.reps) {
      for (const GroupElement& g : fan.witness_pool) {
        if (!pair_member(fan, sigma, tau, g.matrix)) continue;
        auto cap = intersect_cones(sigma, conjugate(fan.lattice, g.matrix, tau));
        if (cap && cap->dim() == 1) {
          removed[sigma.key()].push_back(*cap);
          new_rays.push_back(*cap);
        }
      }
    }
  }
  return assemble(fan, "first", removed, new_rays);
}

std::pair<FanCollection, SubdivisionReport> second_modification(const FanCollection& fan) {
  std::map<std::string, std::vector<NilpotentCone>> removed;
  for (const NilpotentCone& rho : fan.reps) {
    if (rho.dim() != 2) continue;
    for (const NilpotentCone& tau : fan.reps) {
      if (tau.dim() != 1) continue;
      for (const GroupElement& g : fan.witness_pool) {
        if (!pair_member(fan, rho, tau, g.matrix)) continue;
        auto cap = intersect_cones(rho, conjugate(fan.lattice, g.matrix, tau));
        if (cap && cap->dim() == 1) removed[rho.key()].push_back(*cap);
      }
    }
  }
  return assemble(fan, "second", removed, {});
}

std::pair<FanCollection, std::vector<SubdivisionReport>> build_weak_fan(
    const FanCollection& fan) {
  FanCollection work = fan;
  validate_collection(work);
  std::vector<SubdivisionReport> reports;
  auto [after_first, r1] = first_modification(work);
  reports.push_back(std::move(r1));
  auto [after_second, r2] = second_modification(after_first);
  reports.push_back(std::move(r2));
  FanVerdict verdict = cardinality_criterion(after_second);
  if (!verdict.ok)
    throw DomainError("build_weak_fan: output fails the cardinality criterion: " +
                      verdict.detail);
  return {std::move(after_second), std::move(reports)};
}

std::pair<FanCollection, SubdivisionReport> ray_refine(const FanCollection& fan,
                                                       const NilpotentCone& upsilon) {
  if (upsilon.dim() != 1)
    throw InputShapeError("ray_refine: upsilon must be one-dimensional");
  FanVerdict pre = cardinality_criterion(fan);
  if (!pre.ok)
    throw DomainError("ray_refine: input is not a weak fan on witness data: " +
                      pre.detail);

  // Unchanged when upsilon is already an orbit representative.
  for (const NilpotentCone& r : fan.reps)
    if (cones_pool_conjugate(fan.lattice, r, upsilon, fan.witness_pool)) {
      SubdivisionReport report;
      report.stage = "ray";
      report.input_orbits = report.output_orbits = fan.reps.size();
      return {fan, report};
    }

  // upsilon must lie in the closure of some representative.
  const NilpotentCone* host = nullptr;
  for (const NilpotentCone& r : fan.reps)
    if (!r.is_zero() && closure_contains_point(r, upsilon.generators[0])) {
      host = &r;
      break;
    }
  if (!host) throw DomainError("RayNotInCone: " + upsilon.key());

  HodgeFlag uflag = fan.flag_for(*host);
  const OrbitCertificate& ucert =
      certify_orbit_pair_cached(fan.lattice, upsilon, uflag);
  if (!ucert.certified)
    throw DomainError("ray_refine: upsilon fails certification with the host flag");

  std::map<std::string, std::vector<NilpotentCone>> removed;
  for (const NilpotentCone& sigma : fan.reps) {
    if (sigma.dim() != 2) continue;
    const HodgeFlag& fs = fan.flag_for(sigma);
    for (const GroupElement& g : fan.witness_pool) {
      if (!is_gamma_member(fan.lattice, g.matrix, sigma, upsilon, {fs}, uflag))
        continue;
      auto cap = intersect_cones(sigma, conjugate(fan.lattice, g.matrix, upsilon));
      if (cap && cap->dim() == 1) removed[sigma.key()].push_back(*cap);
    }
  }
  FanCollection with_flag = fan;
  with_flag.witness_flags.emplace(upsilon.key(), uflag);
  auto result = assemble(with_flag, "ray", removed, {upsilon});
  return result;
}

std::pair<FanCollection, SubdivisionReport> star_subdivide(const FanCollection& fan,
                                                           std::size_t i,
                                                           std::size_t j) {
  if (i >= fan.reps.size() || j >= fan.reps.size() || i == j)
    throw InputShapeError("star_subdivide: bad representative indices");
  const NilpotentCone& ri = fan.reps[i];
  const NilpotentCone& rj = fan.reps[j];
  if (ri.dim() != 1 || rj.dim() != 1)
    throw DomainError("MissingRay: star subdivision requires two ray representatives");
  const Matrix& Ni = ri.generators[0];
  const Matrix& Nj = rj.generators[0];

  NilpotentCone sigma_e = make_cone(fan.lattice, {Ni + Nj});
  NilpotentCone two_dim = make_cone(fan.lattice, {Ni, Nj});

  FanCollection out;
  out.lattice = fan.lattice;
  out.witness_pool = fan.witness_pool;
  out.witness_flags = fan.witness_flags;

  SubdivisionReport report;
  report.stage = "star";
  report.input_orbits = fan.reps.size();

  std::optional<std::size_t> parent = fan.rep_index(two_dim);
  std::vector<NilpotentCone> next;
  for (std::size_t t = 0; t < fan.reps.size(); ++t) {
    if (parent && t == *parent) continue;
    next.push_back(fan.reps[t]);
  }
  if (parent) {
    const HodgeFlag& pf = fan.flag_for(two_dim);
    report.removed_rays.emplace_back(two_dim.key(),
                                     std::vector<NilpotentCone>{sigma_e});
    for (NilpotentCone& part : split_cone_by_rays(fan.lattice, two_dim, {sigma_e})) {
      if (!out.witness_flags.count(part.key()))
        out.witness_flags.emplace(part.key(), pf);
      next.push_back(std::move(part));
    }
    if (!out.witness_flags.count(sigma_e.key()))
      out.witness_flags.emplace(sigma_e.key(), pf);
  } else if (!out.witness_flags.count(sigma_e.key())) {
    // No chamber to inherit from: borrow the first ray flag that certifies.
    for (const NilpotentCone* r : {&ri, &rj}) {
      const HodgeFlag& f = fan.flag_for(*r);
      if (certify_orbit_pair_cached(fan.lattice, sigma_e, f).certified) {
        out.witness_flags.emplace(sigma_e.key(), f);
        break;
      }
    }
    if (!out.witness_flags.count(sigma_e.key()))
      throw DomainError("star_subdivide: no certifying flag for the exceptional ray");
  }
  next.push_back(sigma_e);

  sort_reps(next);
  std::vector<NilpotentCone> merged;
  for (const NilpotentCone& c : next) {
    bool dup = false;
    for (const NilpotentCone& m : merged)
      if (cones_pool_conjugate(out.lattice, m, c, out.witness_pool)) {
        dup = true;
        break;
      }
    if (!dup) merged.push_back(c);
  }
  out.reps = std::move(merged);
  report.output_orbits = out.reps.size();
  for (const NilpotentCone& c : out.reps) {
    const OrbitCertificate& cert =
        certify_orbit_pair_cached(out.lattice, c, out.flag_for(c));
    report.certified.emplace_back(c.key(), cert.certified);
    if (!cert.certified)
      throw DomainError("star_subdivide: output cone " + c.key() +
                        " fails certification");
  }
  return {std::move(out), std::move(report)};
}

}  // namespace weakfan
