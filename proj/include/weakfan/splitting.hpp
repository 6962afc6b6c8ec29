#pragma once

// Value types shared by the limit-mixed-Hodge machinery and the cone
// module: weight filtrations, Deligne splittings, grading elements.

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "weakfan/filtration.hpp"

namespace weakfan {

struct WeightFiltration {
  Filtration steps;  // increasing, rational
  long center = 0;   // 0 for W(N); n after the [-n] shift

  WeightFiltration() = default;
  WeightFiltration(Filtration f, long c) : steps(std::move(f)), center(c) {}

  const Subspace& at(long idx) const { return steps.at(idx); }
  WeightFiltration shifted_to(long new_center) const {
    return WeightFiltration(steps.shifted(new_center - center), new_center);
  }
  WeightFiltration apply(const Matrix& g) const {
    return WeightFiltration(steps.apply(g), center);
  }
  std::string key() const { return std::to_string(center) + "|" + steps.str(); }

  friend bool operator==(const WeightFiltration& a, const WeightFiltration& b) {
    return a.center == b.center && a.steps == b.steps;
  }
  friend bool operator!=(const WeightFiltration& a, const WeightFiltration& b) {
    return !(a == b);
  }
};

struct DeligneSplitting {
  std::size_t ambient = 0;
  long weight = 0;  // the center n of the underlying MHS
  std::map<std::pair<long, long>, Subspace> pieces;  // nonzero I^{p,q} only

  const Subspace piece(long p, long q) const {
    auto it = pieces.find({p, q});
    return it == pieces.end() ? Subspace::zero(ambient) : it->second;
  }
};

struct GradingElement {
  Matrix Y;
  bool is_rational() const { return Y.is_rational(); }
};

}  // namespace weakfan
