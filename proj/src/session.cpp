#include "weakfan/session.hpp"

#include <fstream>
#include <sstream>

#include "weakfan/errors.hpp"

namespace weakfan {

const NilpotentCone& Session::cone(const std::string& name) const {
  auto it = cones.find(name);
  if (it == cones.end()) throw ParseError("session: unknown cone '" + name + "'");
  return it->second;
}

const HodgeFlag& Session::flag(const std::string& name) const {
  auto it = flags.find(name);
  if (it == flags.end()) throw ParseError("session: unknown flag '" + name + "'");
  return it->second;
}

const Matrix& Session::gamma(const std::string& name) const {
  auto it = gamma_generators.find(name);
  if (it == gamma_generators.end())
    throw ParseError("session: unknown gamma generator '" + name + "'");
  return it->second;
}

std::vector<HodgeFlag> Session::flag_pool() const {
  std::vector<HodgeFlag> out;
  out.reserve(flags.size());
  for (const auto& [name, f] : flags) {
    (void)name;
    out.push_back(f);
  }
  return out;
}

Session parse_session(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("session: invalid JSON: ") + e.what());
  }
  Session s;
  s.raw = text;
  if (!j.contains("lattice")) throw ParseError("session: missing 'lattice'");
  s.lattice = lattice_from_json(j.at("lattice"));

  if (j.contains("cones")) {
    for (const auto& [name, spec] : j.at("cones").items()) {
      if (!spec.is_object() || !spec.contains("generators"))
        throw ParseError("session: cone '" + name + "' needs 'generators'");
      std::vector<Matrix> gens;
      for (const Json& g : spec.at("generators")) gens.push_back(matrix_from_json(g));
      try {
        s.cones.emplace(name, make_cone(s.lattice, std::move(gens)));
      } catch (const DomainError& e) {
        throw ParseError("session: cone '" + name + "': " + e.what());
      }
    }
  }
  if (j.contains("flags")) {
    for (const auto& [name, spec] : j.at("flags").items())
      s.flags.emplace(name, flag_from_json(spec, s.lattice.dim));
  }
  if (j.contains("gammaGenerators")) {
    for (const auto& [name, spec] : j.at("gammaGenerators").items()) {
      Matrix m = matrix_from_json(spec);
      if (!in_gamma_group(s.lattice, m))
        throw ParseError("session: gammaGenerators." + name +
                         " is not an integral Q-automorphism");
      s.gamma_generators.emplace(name, std::move(m));
    }
  }
  if (j.contains("centralizerGenerators")) {
    for (const auto& [name, spec] : j.at("centralizerGenerators").items()) {
      Matrix m = matrix_from_json(spec);
      if (!in_gamma_group(s.lattice, m))
        throw ParseError("session: centralizerGenerators." + name +
                         " is not an integral Q-automorphism");
      s.centralizer_generators.emplace(name, std::move(m));
    }
  }
  if (j.contains("fan")) {
    const Json& f = j.at("fan");
    FanAssembly a;
    if (!f.contains("cones")) throw ParseError("session: fan needs 'cones'");
    for (const Json& name : f.at("cones")) a.cones.push_back(name.get<std::string>());
    if (f.contains("flags"))
      for (const auto& [cname, fname] : f.at("flags").items())
        a.flags.emplace(cname, fname.get<std::string>());
    if (f.contains("witnesses")) {
      const Json& w = f.at("witnesses");
      if (w.contains("elements"))
        for (const Json& name : w.at("elements"))
          a.witness_elements.push_back(name.get<std::string>());
      if (w.contains("generators"))
        for (const Json& name : w.at("generators"))
          a.witness_generators.push_back(name.get<std::string>());
      if (w.contains("maxWordLen"))
        a.max_word_len = w.at("maxWordLen").get<std::size_t>();
    }
    if (f.contains("zeroFlag")) a.zero_flag = f.at("zeroFlag").get<std::string>();
    s.fan = std::move(a);
  }
  return s;
}

Session load_session(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("session: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_session(buf.str());
}

FanCollection build_fan(const Session& s) {
  if (!s.fan) throw ParseError("session: no fan assembly present");
  const FanAssembly& a = *s.fan;
  FanCollection fan;
  fan.lattice = s.lattice;
  for (const std::string& cname : a.cones) {
    const NilpotentCone& c = s.cone(cname);
    fan.reps.push_back(c);
    auto it = a.flags.find(cname);
    if (it != a.flags.end())
      fan.witness_flags.emplace(c.key(), s.flag(it->second));
  }
  if (a.zero_flag) {
    NilpotentCone zero;
    zero.ambient = s.lattice.dim;
    fan.witness_flags.emplace(zero.key(), s.flag(*a.zero_flag));
  }
  for (const std::string& gname : a.witness_elements)
    fan.witness_pool.push_back(GroupElement{s.gamma(gname), {}});
  if (!a.witness_generators.empty()) {
    std::vector<Matrix> gens;
    for (const std::string& gname : a.witness_generators)
      gens.push_back(s.gamma(gname));
    for (GroupElement& g : word_ball(s.lattice, gens, a.max_word_len))
      fan.witness_pool.push_back(std::move(g));
  }
  validate_collection(fan);
  return fan;
}

}  // namespace weakfan
