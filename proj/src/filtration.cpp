#include "weakfan/filtration.hpp"

#include <algorithm>
#include <sstream>

#include "weakfan/errors.hpp"

namespace weakfan {

Filtration::Filtration(std::size_t ambient_dim, FiltDirection dir,
                       std::vector<std::pair<long, Subspace>> steps)
    : ambient_(ambient_dim), dir_(dir), steps_(std::move(steps)),
      zero_(Subspace::zero(ambient_dim)), full_(Subspace::full(ambient_dim)) {
  std::sort(steps_.begin(), steps_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i + 1 < steps_.size(); ++i)
    if (steps_[i].first == steps_[i + 1].first)
      throw InputShapeError("filtration: duplicate step index");
  for (const auto& [idx, s] : steps_) {
    (void)idx;
    if (s.ambient_dim() != ambient_)
      throw InputShapeError("filtration: step ambient mismatch");
  }
  // Nesting.
  for (std::size_t i = 0; i + 1 < steps_.size(); ++i) {
    const Subspace& lo = steps_[i].second;
    const Subspace& hi = steps_[i + 1].second;
    bool ok = dir_ == FiltDirection::Increasing ? hi.contains(lo) : lo.contains(hi);
    if (!ok) throw InputShapeError("filtration: steps are not nested");
  }
  // Normalize the terminal step so that values persist rightward: an
  // increasing filtration ends at the full space, a decreasing one at zero.
  const Subspace& terminal = dir_ == FiltDirection::Increasing ? full_ : zero_;
  if (steps_.empty())
    steps_.emplace_back(0, terminal);
  else if (!(steps_.back().second == terminal))
    steps_.emplace_back(steps_.back().first + 1, terminal);
}

const Subspace& Filtration::at(long idx) const {
  if (steps_.empty()) return zero_;  // default-constructed placeholder
  // Below the stored range the value is the initial clamp; otherwise the
  // value at the largest stored index <= idx (steps persist rightward).
  if (idx < steps_.front().first)
    return dir_ == FiltDirection::Increasing ? zero_ : full_;
  const Subspace* best = nullptr;
  for (const auto& [i, s] : steps_) {
    if (i <= idx) best = &s;
    else break;
  }
  return *best;
}

std::vector<std::pair<long, Subspace>> Filtration::jumps() const {
  std::vector<std::pair<long, Subspace>> out;
  for (const auto& [i, s] : steps_) {
    if (!out.empty() && out.back().second == s) continue;
    out.emplace_back(i, s);
  }
  return out;
}

Filtration Filtration::shifted(long offset) const {
  std::vector<std::pair<long, Subspace>> steps;
  steps.reserve(steps_.size());
  for (const auto& [i, s] : steps_) steps.emplace_back(i + offset, s);
  return Filtration(ambient_, dir_, std::move(steps));
}

Filtration Filtration::apply(const Matrix& g) const {
  std::vector<std::pair<long, Subspace>> steps;
  steps.reserve(steps_.size());
  for (const auto& [i, s] : steps_) steps.emplace_back(i, s.apply(g));
  return Filtration(ambient_, dir_, std::move(steps));
}

bool operator==(const Filtration& a, const Filtration& b) {
  if (a.ambient_ != b.ambient_ || a.dir_ != b.dir_) return false;
  // Compare values over the union of jump indices.
  std::vector<long> idxs;
  for (const auto& [i, s] : a.jumps()) { (void)s; idxs.push_back(i); }
  for (const auto& [i, s] : b.jumps()) { (void)s; idxs.push_back(i); }
  std::sort(idxs.begin(), idxs.end());
  idxs.erase(std::unique(idxs.begin(), idxs.end()), idxs.end());
  for (long i : idxs)
    if (a.at(i) != b.at(i)) return false;
  return true;
}

std::string Filtration::str() const {
  std::ostringstream os;
  os << (dir_ == FiltDirection::Increasing ? "W" : "F") << "{";
  bool first = true;
  for (const auto& [i, s] : jumps()) {
    if (!first) os << ";";
    first = false;
    os << i << ":" << s.str();
  }
  os << "}";
  return os.str();
}

}  // namespace weakfan
