#include "weakfan/json_io.hpp"

#include <cstdint>

#include "weakfan/errors.hpp"

namespace weakfan {

Json rat_to_json(const Rat& r) { return r.str(); }

Rat rat_from_json(const Json& j) {
  if (!j.is_string()) throw ParseError("rational must be a string like \"p/q\"");
  return Rat::parse(j.get<std::string>());
}

Json gauss_to_json(const GaussRat& g) {
  if (g.is_rational()) return rat_to_json(g.re);
  return Json{{"re", g.re.str()}, {"im", g.im.str()}};
}

GaussRat gauss_from_json(const Json& j) {
  if (j.is_string()) return GaussRat(rat_from_json(j));
  if (j.is_object()) {
    GaussRat g;
    if (j.contains("re")) g.re = rat_from_json(j.at("re"));
    if (j.contains("im")) g.im = rat_from_json(j.at("im"));
    return g;
  }
  throw ParseError("scalar must be \"p/q\" or {\"re\",\"im\"}");
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(gauss_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("entries"))
    throw ParseError("matrix must carry rows, cols, entries");
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  const Json& e = j.at("entries");
  if (!e.is_array() || e.size() != rows)
    throw ParseError("matrix entries: expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!e[i].is_array() || e[i].size() != cols)
      throw ParseError("matrix entries: row " + std::to_string(i) +
                       " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = gauss_from_json(e[i][c]);
  }
  return m;
}

Json subspace_to_json(const Subspace& s) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < s.ambient_dim(); ++j)
      row.push_back(gauss_to_json(s.basis()(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"ambient", s.ambient_dim()}, {"basis", std::move(rows)}};
}

namespace {

Subspace subspace_rows_from_json(const Json& rows, std::size_t ambient) {
  std::vector<Vec> vecs;
  for (const Json& row : rows) {
    if (!row.is_array() || row.size() != ambient)
      throw ParseError("basis row length must equal the ambient dimension");
    Vec v(ambient);
    for (std::size_t j = 0; j < ambient; ++j) v[j] = gauss_from_json(row[j]);
    vecs.push_back(std::move(v));
  }
  return Subspace::span_of(vecs, ambient);
}

}  // namespace

Json filtration_to_json(const Filtration& f) {
  Json steps = Json::array();
  for (const auto& [idx, s] : f.jumps()) {
    steps.push_back(Json{{"index", idx}, {"basis", subspace_to_json(s).at("basis")}});
  }
  return Json{{"ambient", f.ambient_dim()},
              {"direction",
               f.direction() == FiltDirection::Increasing ? "increasing" : "decreasing"},
              {"steps", std::move(steps)}};
}

Filtration filtration_from_json(const Json& j, std::size_t ambient,
                                FiltDirection dir) {
  const Json& steps = j.is_object() && j.contains("steps") ? j.at("steps") : j;
  if (!steps.is_array()) throw ParseError("filtration steps must be an array");
  std::vector<std::pair<long, Subspace>> out;
  for (const Json& st : steps) {
    if (!st.is_object()) throw ParseError("filtration step must be an object");
    long idx;
    if (st.contains("index")) idx = st.at("index").get<long>();
    else if (st.contains("p")) idx = st.at("p").get<long>();
    else throw ParseError("filtration step needs an index");
    out.emplace_back(idx, subspace_rows_from_json(st.at("basis"), ambient));
  }
  return Filtration(ambient, dir, std::move(out));
}

Json weight_filtration_to_json(const WeightFiltration& w) {
  Json j = filtration_to_json(w.steps);
  j["center"] = w.center;
  return j;
}

Json flag_to_json(const HodgeFlag& f) { return filtration_to_json(f.steps); }

HodgeFlag flag_from_json(const Json& j, std::size_t ambient) {
  return HodgeFlag(filtration_from_json(j, ambient, FiltDirection::Decreasing));
}

Json lattice_to_json(const PolarizedLattice& L) {
  Json hodge = Json::array();
  for (auto [p, h] : L.hodge_numbers) hodge.push_back(Json::array({p, h}));
  return Json{{"dim", L.dim},
              {"weight", L.weight},
              {"hodgeNumbers", std::move(hodge)},
              {"Q", matrix_to_json(L.Q)}};
}

PolarizedLattice lattice_from_json(const Json& j) {
  PolarizedLattice L;
  L.dim = j.at("dim").get<std::size_t>();
  L.weight = j.at("weight").get<long>();
  for (const Json& pair : j.at("hodgeNumbers")) {
    if (!pair.is_array() || pair.size() != 2)
      throw ParseError("hodgeNumbers entries must be [p, h] pairs");
    L.hodge_numbers.emplace_back(pair[0].get<long>(), pair[1].get<long>());
  }
  L.Q = matrix_from_json(j.at("Q"));
  L.validate();
  return L;
}

Json cone_to_json(const NilpotentCone& c) {
  Json gens = Json::array();
  for (const Matrix& g : c.generators) gens.push_back(matrix_to_json(g));
  return Json{{"ambient", c.ambient}, {"dim", c.dim()}, {"generators", std::move(gens)}};
}

Json splitting_to_json(const DeligneSplitting& s) {
  Json pieces = Json::array();
  for (const auto& [pq, piece] : s.pieces) {
    pieces.push_back(Json{{"p", pq.first},
                          {"q", pq.second},
                          {"basis", subspace_to_json(piece).at("basis")}});
  }
  return Json{{"ambient", s.ambient}, {"weight", s.weight}, {"pieces", std::move(pieces)}};
}

Json orbit_certificate_to_json(const OrbitCertificate& c) {
  Json j{{"verdict", c.certified ? "Certified" : "Refuted"}};
  if (c.weight) j["weight"] = weight_filtration_to_json(*c.weight);
  if (c.splitting) {
    j["splitting"] = splitting_to_json(*c.splitting);
    j["rSplit"] = c.r_split;
  }
  if (!c.certified) {
    j["failureAxiom"] = c.failure_axiom;
    j["failureWitness"] = c.failure_detail;
  }
  return j;
}

Json fan_verdict_to_json(const FanVerdict& v) {
  Json j{{"verdict", v.ok ? "WeakFan" : "Violation"}};
  if (!v.ok) {
    j["detail"] = v.detail;
    if (v.sigma) j["sigma"] = cone_to_json(*v.sigma);
    if (v.tau_gamma) j["tauGamma"] = cone_to_json(*v.tau_gamma);
    if (v.gamma) j["gamma"] = matrix_to_json(*v.gamma);
    if (v.flag) j["commonFlag"] = flag_to_json(*v.flag);
  }
  return j;
}

Json subdivision_report_to_json(const SubdivisionReport& r) {
  Json removed = Json::array();
  for (const auto& [key, rays] : r.removed_rays) {
    Json list = Json::array();
    for (const NilpotentCone& ray : rays) list.push_back(cone_to_json(ray));
    removed.push_back(Json{{"cone", key}, {"rays", std::move(list)}});
  }
  Json certified = Json::array();
  for (const auto& [key, ok] : r.certified)
    certified.push_back(Json{{"cone", key}, {"certified", ok}});
  return Json{{"stage", r.stage},
              {"inputOrbits", r.input_orbits},
              {"outputOrbits", r.output_orbits},
              {"removedRays", std::move(removed)},
              {"certified", std::move(certified)}};
}

Json fan_collection_to_json(const FanCollection& f) {
  Json reps = Json::array();
  for (const NilpotentCone& c : f.reps) {
    Json entry = cone_to_json(c);
    auto it = f.witness_flags.find(c.key());
    if (it != f.witness_flags.end()) entry["witnessFlag"] = flag_to_json(it->second);
    reps.push_back(std::move(entry));
  }
  return Json{{"orbitReps", std::move(reps)},
              {"witnessPoolSize", f.witness_pool.size()}};
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace weakfan
