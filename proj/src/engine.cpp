#include "weakfan/engine.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "weakfan/errors.hpp"
#include "weakfan/json_io.hpp"
#include "weakfan/session.hpp"

namespace weakfan {

namespace {

struct Args {
  std::vector<std::string> positional;
  std::map<std::string, std::string> options;
  std::string echo;  // command echo without the session path

  const std::string& need(const std::string& key) const {
    auto it = options.find(key);
    if (it == options.end()) throw ParseError("missing required option --" + key);
    return it->second;
  }
  std::optional<std::string> get(const std::string& key) const {
    auto it = options.find(key);
    if (it == options.end()) return std::nullopt;
    return it->second;
  }
};

Args parse_args(const std::vector<std::string>& argv) {
  Args a;
  std::vector<std::string> echo_parts;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    const std::string& t = argv[i];
    if (t.rfind("--", 0) == 0) {
      std::string key = t.substr(2);
      if (i + 1 >= argv.size()) throw ParseError("option " + t + " needs a value");
      a.options[key] = argv[++i];
      if (key != "session" && key != "output") {
        echo_parts.push_back(t);
        echo_parts.push_back(argv[i]);
      }
    } else {
      a.positional.push_back(t);
      echo_parts.push_back(t);
    }
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < echo_parts.size(); ++i) {
    if (i) os << ' ';
    os << echo_parts[i];
  }
  a.echo = os.str();
  return a;
}

Json base_certificate(const Args& a, const Session& s) {
  return Json{{"command", a.echo},
              {"inputDigest", "fnv1a:" + fnv1a_hex(s.raw)},
              {"toolVersion", kToolVersion}};
}

RunResult emit(const Args& a, Json cert, int code) {
  if (a.get("output").value_or("json") == "summary") {
    std::string verdict = cert.contains("verdict") ? cert["verdict"].get<std::string>()
                                                   : std::string("done");
    return RunResult{code, "verdict: " + verdict + "\n"};
  }
  return RunResult{code, cert.dump(2) + "\n"};
}

RunResult cmd_orbit_check(const Args& a, const Session& s) {
  const NilpotentCone& cone = s.cone(a.need("cone"));
  const HodgeFlag& flag = s.flag(a.need("flag"));
  OrbitCertificate cert = certify_orbit_pair(s.lattice, cone, flag);
  Json j = base_certificate(a, s);
  j.update(orbit_certificate_to_json(cert));
  return emit(a, j, cert.certified ? 0 : 1);
}

RunResult cmd_wf_compute(const Args& a, const Session& s) {
  const NilpotentCone& cone = s.cone(a.need("nilpotent"));
  if (cone.dim() != 1)
    throw ParseError("wf compute: --nilpotent must name a single-generator cone");
  WeightFiltration w = weight_filtration(cone.generators[0]);
  Json j = base_certificate(a, s);
  j["verdict"] = "Computed";
  j["weight"] = weight_filtration_to_json(w);
  return emit(a, j, 0);
}

RunResult cmd_wf_cone(const Args& a, const Session& s) {
  const NilpotentCone& cone = s.cone(a.need("cone"));
  std::size_t samples = 3;
  if (auto v = a.get("samples")) samples = std::stoul(*v);
  ConeWeightResult r = cone_weight_filtration(cone, samples);
  Json j = base_certificate(a, s);
  if (r.constant()) {
    j["verdict"] = "Constant";
    j["weight"] = weight_filtration_to_json(*r.filtration);
    return emit(a, j, 0);
  }
  j["verdict"] = "NotConstant";
  j["witnessA"] = matrix_to_json(r.witnesses->first);
  j["witnessB"] = matrix_to_json(r.witnesses->second);
  return emit(a, j, 1);
}

RunResult cmd_split(const Args& a, const Session& s) {
  const NilpotentCone& cone = s.cone(a.need("cone"));
  const HodgeFlag& flag = s.flag(a.need("flag"));
  ConeWeightResult r = cone_weight_filtration(cone, 2);
  Json j = base_certificate(a, s);
  if (!r.constant()) {
    j["verdict"] = "NotConstant";
    j["witnessA"] = matrix_to_json(r.witnesses->first);
    j["witnessB"] = matrix_to_json(r.witnesses->second);
    return emit(a, j, 1);
  }
  SplittingResult sp =
      deligne_splitting(r.filtration->shifted_to(s.lattice.weight), flag.steps);
  if (sp.ok()) {
    j["verdict"] = "MHS";
    j["splitting"] = splitting_to_json(*sp.splitting);
    j["rSplit"] = is_r_split(*sp.splitting);
    return emit(a, j, 0);
  }
  j["verdict"] = "NotMHS";
  j["failureWitness"] = Json{{"p", sp.failure->p},
                             {"q", sp.failure->q},
                             {"detail", sp.failure->detail}};
  return emit(a, j, 1);
}

RunResult cmd_grading(const Args& a, const Session& s) {
  const NilpotentCone& cone = s.cone(a.need("cone"));
  const HodgeFlag& flag = s.flag(a.need("flag"));
  ConeWeightResult r = cone_weight_filtration(cone, 2);
  Json j = base_certificate(a, s);
  if (!r.constant()) {
    j["verdict"] = "NotConstant";
    return emit(a, j, 1);
  }
  SplittingResult sp =
      deligne_splitting(r.filtration->shifted_to(s.lattice.weight), flag.steps);
  if (!sp.ok()) {
    j["verdict"] = "NotMHS";
    j["failureWitness"] = Json{{"p", sp.failure->p},
                               {"q", sp.failure->q},
                               {"detail", sp.failure->detail}};
    return emit(a, j, 1);
  }
  GradingElement Y = grading_element(*sp.splitting);
  j["Y"] = matrix_to_json(Y.Y);
  auto Yq = rationalize_grading(Y.Y, cone.generators, s.lattice);
  if (!Yq) {
    j["verdict"] = "NoSolution";
    return emit(a, j, 1);
  }
  j["verdict"] = "Computed";
  j["rationalY"] = matrix_to_json(*Yq);
  return emit(a, j, 0);
}

RunResult cmd_cones_intersect(const Args& a, const Session& s) {
  const NilpotentCone& left = s.cone(a.need("left"));
  NilpotentCone right = s.cone(a.need("right"));
  Json j = base_certificate(a, s);
  if (auto g = a.get("gamma"))
    right = conjugate(s.lattice, s.gamma(*g), right);
  auto cap = intersect_cones(left, right);
  if (cap) {
    j["verdict"] = "Nonempty";
    j["intersection"] = cone_to_json(*cap);
  } else {
    j["verdict"] = "Empty";
  }
  return emit(a, j, 0);
}

RunResult cmd_gamma_enumerate(const Args& a, const Session& s) {
  const NilpotentCone& left = s.cone(a.need("left"));
  const NilpotentCone& right = s.cone(a.need("right"));
  std::size_t maxlen = std::stoul(a.need("max-word-len"));
  std::vector<Matrix> gens;
  for (const auto& [name, m] : s.gamma_generators) {
    (void)name;
    gens.push_back(m);
  }
  std::optional<HodgeFlag> tau_flag;
  if (s.fan) {
    for (const auto& [cname, fname] : s.fan->flags)
      if (s.cone(cname) == right) tau_flag = s.flag(fname);
  }
  GammaWitnessSet w =
      enumerate_gamma(s.lattice, left, right, gens, maxlen, s.flag_pool(), tau_flag);
  Json j = base_certificate(a, s);
  j["verdict"] = "Enumerated";
  j["searchBound"] = w.search_bound;
  Json elems = Json::array();
  for (const GroupElement& g : w.elements) {
    Json word = Json::array();
    for (auto [gi, e] : g.word) word.push_back(Json::array({gi, e}));
    elems.push_back(Json{{"matrix", matrix_to_json(g.matrix)}, {"word", word}});
  }
  j["elements"] = std::move(elems);
  Json inter = Json::array();
  for (const NilpotentCone& c : intersection_set(s.lattice, w))
    inter.push_back(cone_to_json(c));
  j["intersectionSet"] = std::move(inter);
  j["intersectionCardinality"] = j["intersectionSet"].size();
  return emit(a, j, 0);
}

RunResult cmd_fan_check(const Args& a, const Session& s) {
  FanCollection fan = build_fan(s);
  FanVerdict wf = weak_fan_check(fan);
  FanVerdict card = cardinality_criterion(fan);
  if (wf.ok != card.ok)
    throw DomainError("internal: weak_fan_check and cardinality_criterion disagree");
  Json j = base_certificate(a, s);
  j.update(fan_verdict_to_json(wf));
  j["cardinalityCriterion"] = card.ok ? "holds" : card.detail;
  j["collection"] = fan_collection_to_json(fan);
  return emit(a, j, wf.ok ? 0 : 1);
}

RunResult cmd_fan_build(const Args& a, const Session& s) {
  FanCollection fan = build_fan(s);
  Json j = base_certificate(a, s);
  try {
    auto [out, reports] = build_weak_fan(fan);
    j["verdict"] = "WeakFan";
    Json reps = Json::array();
    for (const SubdivisionReport& r : reports)
      reps.push_back(subdivision_report_to_json(r));
    j["reports"] = std::move(reps);
    j["collection"] = fan_collection_to_json(out);
    return emit(a, j, 0);
  } catch (const DomainError& e) {
    j["verdict"] = "Failed";
    j["detail"] = e.what();
    return emit(a, j, 1);
  }
}

RunResult cmd_fan_ray_refine(const Args& a, const Session& s) {
  FanCollection fan = build_fan(s);
  const NilpotentCone& ray = s.cone(a.need("ray"));
  Json j = base_certificate(a, s);
  try {
    auto [out, report] = ray_refine(fan, ray);
    j["verdict"] = "Refined";
    j["report"] = subdivision_report_to_json(report);
    j["collection"] = fan_collection_to_json(out);
    return emit(a, j, 0);
  } catch (const DomainError& e) {
    std::string msg = e.what();
    if (msg.rfind("RayNotInCone", 0) == 0) throw;
    j["verdict"] = "Failed";
    j["detail"] = msg;
    return emit(a, j, 1);
  }
}

RunResult cmd_fan_star(const Args& a, const Session& s) {
  FanCollection fan = build_fan(s);
  const NilpotentCone& ci = s.cone(a.need("i"));
  const NilpotentCone& cj = s.cone(a.need("j"));
  auto i = fan.rep_index(ci);
  auto jdx = fan.rep_index(cj);
  if (!i || !jdx)
    throw ParseError("fan star: --i/--j must name representatives of the fan");
  Json j = base_certificate(a, s);
  auto [out, report] = star_subdivide(fan, *i, *jdx);
  j["verdict"] = "Subdivided";
  j["sigmaE"] = cone_to_json(make_cone(
      s.lattice, {ci.generators.at(0) + cj.generators.at(0)}));
  j["report"] = subdivision_report_to_json(report);
  j["collection"] = fan_collection_to_json(out);
  return emit(a, j, 0);
}

}  // namespace

RunResult run_command(const std::vector<std::string>& argv) {
  try {
    Args a = parse_args(argv);
    if (a.positional.empty()) throw ParseError("no subcommand given");
    std::string cmd = a.positional[0];
    if (a.positional.size() > 1) cmd += " " + a.positional[1];

    Session s = load_session(a.need("session"));

    if (cmd == "orbit check") return cmd_orbit_check(a, s);
    if (cmd == "wf compute") return cmd_wf_compute(a, s);
    if (cmd == "wf cone") return cmd_wf_cone(a, s);
    if (cmd == "split") return cmd_split(a, s);
    if (cmd == "grading") return cmd_grading(a, s);
    if (cmd == "cones intersect") return cmd_cones_intersect(a, s);
    if (cmd == "gamma enumerate") return cmd_gamma_enumerate(a, s);
    if (cmd == "fan check") return cmd_fan_check(a, s);
    if (cmd == "fan build") return cmd_fan_build(a, s);
    if (cmd == "fan ray-refine") return cmd_fan_ray_refine(a, s);
    if (cmd == "fan star") return cmd_fan_star(a, s);
    throw ParseError("unknown subcommand '" + cmd + "'");
  } catch (const ParseError& e) {
    return RunResult{2, std::string("error: ") + e.what() + "\n"};
  } catch (const InputShapeError& e) {
    return RunResult{2, std::string("error: ") + e.what() + "\n"};
  } catch (const DomainError& e) {
    return RunResult{2, std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace weakfan
