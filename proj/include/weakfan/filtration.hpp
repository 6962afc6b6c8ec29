#pragma once

// Exhaustive increasing/decreasing filtrations of Q(i)^n with integer
// indices. Steps are stored sorted by index; value queries clamp to the
// zero/full ends, and equality compares jump profiles.

#include <string>
#include <utility>
#include <vector>

#include "weakfan/subspace.hpp"

namespace weakfan {

enum class FiltDirection { Increasing, Decreasing };

class Filtration {
 public:
  Filtration() : ambient_(0), dir_(FiltDirection::Increasing) {}
  Filtration(std::size_t ambient_dim, FiltDirection dir,
             std::vector<std::pair<long, Subspace>> steps);

  std::size_t ambient_dim() const { return ambient_; }
  FiltDirection direction() const { return dir_; }
  const std::vector<std::pair<long, Subspace>>& steps() const { return steps_; }

  // W_idx (increasing) or F^idx (decreasing), clamped beyond stored range.
  const Subspace& at(long idx) const;

  long min_index() const { return steps_.front().first; }
  long max_index() const { return steps_.back().first; }

  // Indices where the subspace changes, plus the extremes.
  std::vector<std::pair<long, Subspace>> jumps() const;

  Filtration shifted(long offset) const;            // index i -> i + offset
  Filtration apply(const Matrix& g) const;          // transport by invertible g

  friend bool operator==(const Filtration& a, const Filtration& b);
  friend bool operator!=(const Filtration& a, const Filtration& b) { return !(a == b); }

  std::string str() const;

 private:
  std::size_t ambient_;
  FiltDirection dir_;
  std::vector<std::pair<long, Subspace>> steps_;  // ascending index
  Subspace zero_, full_;
};

}  // namespace weakfan
