#pragma once

// Session files: the JSON schema binding a lattice, named cones, flags and
// group elements, plus an optional fan assembly.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weakfan/fan.hpp"
#include "weakfan/json_io.hpp"

namespace weakfan {

struct FanAssembly {
  std::vector<std::string> cones;             // cone names
  std::map<std::string, std::string> flags;   // cone name -> flag name
  std::vector<std::string> witness_elements;  // gammaGenerator names, verbatim
  std::vector<std::string> witness_generators;  // names to enumerate words over
  std::size_t max_word_len = 0;
  std::optional<std::string> zero_flag;       // flag name for the zero cone
};

struct Session {
  PolarizedLattice lattice;
  std::map<std::string, NilpotentCone> cones;
  std::map<std::string, HodgeFlag> flags;
  std::map<std::string, Matrix> gamma_generators;
  std::map<std::string, Matrix> centralizer_generators;
  std::optional<FanAssembly> fan;
  std::string raw;  // original bytes, for the input digest

  const NilpotentCone& cone(const std::string& name) const;
  const HodgeFlag& flag(const std::string& name) const;
  const Matrix& gamma(const std::string& name) const;
  std::vector<HodgeFlag> flag_pool() const;  // all flags in name order
};

Session parse_session(const std::string& text);
Session load_session(const std::string& path);

// Resolve the fan assembly into a validated collection.
FanCollection build_fan(const Session& s);

}  // namespace weakfan
