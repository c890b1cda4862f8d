#include "nlds/history.hpp"

#include <algorithm>
#include <string>

#include "nlds/error.hpp"

namespace nlds {

HistoryBuffer::HistoryBuffer(const InitialFunction& phi)
    : stamps_(phi.stamps().begin(), phi.stamps().end()),
      states_(phi.states().begin(), phi.states().end()) {}

void HistoryBuffer::record(double tau, GridFunction state) {
  if (!(tau > stamps_.back())) {
    throw SequencingError("history stamp " + std::to_string(tau) +
                          " does not exceed the newest stamp " + std::to_string(stamps_.back()));
  }
  stamps_.push_back(tau);
  states_.push_back(std::move(state));
}

GridFunction HistoryBuffer::eval(double tau) const {
  if (!(tau >= stamps_.front() && tau <= stamps_.back())) {
    throw RangeError("history queried at tau = " + std::to_string(tau) + " outside [" +
                         std::to_string(stamps_.front()) + ", " +
                         std::to_string(stamps_.back()) + "]",
                     tau, stamps_.front(), stamps_.back());
  }
  const auto it = std::lower_bound(stamps_.begin(), stamps_.end(), tau);
  const auto j = static_cast<std::size_t>(it - stamps_.begin());
  if (*it == tau) return states_[j];
  const double w = (tau - stamps_[j - 1]) / (stamps_[j] - stamps_[j - 1]);
  return lerp(states_[j - 1], states_[j], w);
}

void HistoryBuffer::evict_before(double tau_min) {
  while (stamps_.size() > 2 && stamps_[1] <= tau_min) {
    stamps_.pop_front();
    states_.pop_front();
  }
}

std::vector<GridFunction> HistoryBuffer::segment(double tau_end, double rho, int samples) const {
  if (samples < 2) throw ParameterError("history segment needs at least 2 samples");
  std::vector<GridFunction> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    const double tau = j + 1 == samples ? tau_end : tau_end - rho + rho * j / (samples - 1);
    out.push_back(eval(tau));
  }
  return out;
}

GridFunction history_eval(const HistoryBuffer& buf, double tau) { return buf.eval(tau); }

}  // namespace nlds
