#pragma once

// Canonical JSON (de)serialization: rationals as reduced "p/q" strings,
// Gaussian rationals as {"re","im"} objects, matrices as row-major nested
// arrays with explicit dimensions. Serialization is canonical so that
// certificates are byte-stable.

#include <string>

#include <json.hpp>

#include "weakfan/arithgroup.hpp"
#include "weakfan/domain.hpp"
#include "weakfan/fan.hpp"
#include "weakfan/limits.hpp"

namespace weakfan {

using Json = nlohmann::json;

Json rat_to_json(const Rat& r);
Rat rat_from_json(const Json& j);

Json gauss_to_json(const GaussRat& g);
GaussRat gauss_from_json(const Json& j);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json subspace_to_json(const Subspace& s);

Json filtration_to_json(const Filtration& f);
Filtration filtration_from_json(const Json& j, std::size_t ambient,
                                FiltDirection dir);

Json weight_filtration_to_json(const WeightFiltration& w);

Json flag_to_json(const HodgeFlag& f);
HodgeFlag flag_from_json(const Json& j, std::size_t ambient);

Json lattice_to_json(const PolarizedLattice& L);
PolarizedLattice lattice_from_json(const Json& j);

Json cone_to_json(const NilpotentCone& c);

Json splitting_to_json(const DeligneSplitting& s);

Json orbit_certificate_to_json(const OrbitCertificate& c);

Json fan_verdict_to_json(const FanVerdict& v);

Json subdivision_report_to_json(const SubdivisionReport& r);

Json fan_collection_to_json(const FanCollection& f);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace weakfan
