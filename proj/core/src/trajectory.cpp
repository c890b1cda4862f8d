#include "nlds/trajectory.hpp"

#include <algorithm>
#include <string>

#include "nlds/error.hpp"

namespace nlds {

void Trajectory::push(double stamp, GridFunction state, double coeff, double linf_peak) {
  if (!stamps_.empty() && !(stamp > stamps_.back())) {
    throw SequencingError("trajectory stamp " + std::to_string(stamp) +
                          " does not exceed the last stamp " + std::to_string(stamps_.back()));
  }
  if (!states_.empty() && !(state.grid() == states_.front().grid())) {
    throw ParameterError("trajectory states must share one grid");
  }
  const Norms n = norms(state);
  diagnostics_.push_back({n.l2, n.h10, n.linf, coeff, std::max(linf_peak, n.linf)});
  stamps_.push_back(stamp);
  states_.push_back(std::move(state));
}

GridFunction Trajectory::at(double stamp) const {
  if (stamps_.empty() || !(stamp >= stamps_.front() && stamp <= stamps_.back())) {
    const double lo = stamps_.empty() ? 0.0 : stamps_.front();
    const double hi = stamps_.empty() ? 0.0 : stamps_.back();
    throw RangeError("trajectory queried at " + std::to_string(stamp) + " outside [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]",
                     stamp, lo, hi);
  }
  const auto it = std::lower_bound(stamps_.begin(), stamps_.end(), stamp);
  const auto j = static_cast<std::size_t>(it - stamps_.begin());
  if (*it == stamp) return states_[j];
  const double w = (stamp - stamps_[j - 1]) / (stamps_[j] - stamps_[j - 1]);
  return lerp(states_[j - 1], states_[j], w);
}

}  // namespace nlds
