// Python bindings: the CLI surface (run) plus direct entry points for the
// main operations, JSON strings in and out.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weakfan/engine.hpp"
#include "weakfan/json_io.hpp"
#include "weakfan/session.hpp"

namespace py = pybind11;
using namespace weakfan;

namespace {

std::string weight_filtration_json(const std::string& matrix_json) {
  Matrix N = matrix_from_json(Json::parse(matrix_json));
  return weight_filtration_to_json(weight_filtration(N)).dump(2);
}

std::string orbit_check_json(const std::string& session_text,
                             const std::string& cone, const std::string& flag) {
  Session s = parse_session(session_text);
  OrbitCertificate cert = certify_orbit_pair(s.lattice, s.cone(cone), s.flag(flag));
  return orbit_certificate_to_json(cert).dump(2);
}

std::string intersect_json(const std::string& session_text, const std::string& left,
                           const std::string& right) {
  Session s = parse_session(session_text);
  auto cap = intersect_cones(s.cone(left), s.cone(right));
  if (!cap) return Json{{"verdict", "Empty"}}.dump(2);
  return Json{{"verdict", "Nonempty"}, {"intersection", cone_to_json(*cap)}}.dump(2);
}

std::string fan_check_json(const std::string& session_text) {
  Session s = parse_session(session_text);
  FanCollection fan = build_fan(s);
  return fan_verdict_to_json(weak_fan_check(fan)).dump(2);
}

std::string fan_build_json(const std::string& session_text) {
  Session s = parse_session(session_text);
  FanCollection fan = build_fan(s);
  auto [out, reports] = build_weak_fan(fan);
  Json j{{"verdict", "WeakFan"}, {"collection", fan_collection_to_json(out)}};
  Json reps = Json::array();
  for (const SubdivisionReport& r : reports)
    reps.push_back(subdivision_report_to_json(r));
  j["reports"] = std::move(reps);
  return j.dump(2);
}

}  // namespace

PYBIND11_MODULE(_weakfan, m) {
  m.doc() = "Exact nilpotent-orbit certification and weak-fan subdivision";
  m.attr("__version__") = kToolVersion;

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        RunResult r = run_command(args);
        return py::make_tuple(r.exit_code, r.output);
      },
      py::arg("args"),
      "Run a CLI command; returns (exit_code, output). Args as for the "
      "weakfan binary, e.g. ['orbit', 'check', '--session', 'f.json', "
      "'--cone', 'sigma', '--flag', 'F'].");

  m.def("weight_filtration", &weight_filtration_json, py::arg("matrix_json"),
        "Weight filtration (center 0) of a nilpotent matrix given as "
        "canonical matrix JSON; returns filtration JSON.");
  m.def("orbit_check", &orbit_check_json, py::arg("session"), py::arg("cone"),
        py::arg("flag"), "Certify an orbit pair from session text.");
  m.def("cones_intersect", &intersect_json, py::arg("session"), py::arg("left"),
        py::arg("right"), "Exact open-cone intersection.");
  m.def("fan_check", &fan_check_json, py::arg("session"),
        "Weak-fan predicate on the session's fan assembly.");
  m.def("fan_build", &fan_build_json, py::arg("session"),
        "Two-stage subdivision to a weak fan.");
}
