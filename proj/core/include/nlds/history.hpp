#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "nlds/grid.hpp"
#include "nlds/model.hpp"

namespace nlds {

/// τ-stamped record of past states, seeded with the samples of φ on [-ρ, 0].
/// Lookups interpolate linearly in time and are exact at stamps.
class HistoryBuffer {
 public:
  explicit HistoryBuffer(const InitialFunction& phi);

  /// Appends a state; `tau` must exceed the newest stamp.
  void record(double tau, GridFunction state);

  GridFunction eval(double tau) const;

  /// Drops old entries while keeping the newest entry stamped at or before `tau_min`.
  void evict_before(double tau_min);

  /// `samples` states evenly spaced on [tau_end - rho, tau_end], oldest first.
  std::vector<GridFunction> segment(double tau_end, double rho, int samples) const;

  double front_stamp() const noexcept { return stamps_.front(); }
  double back_stamp() const noexcept { return stamps_.back(); }
  std::size_t size() const noexcept { return stamps_.size(); }

 private:
  std::deque<double> stamps_;
  std::deque<GridFunction> states_;
};

/// Lookup with the semantics of HistoryBuffer::eval.
GridFunction history_eval(const HistoryBuffer& buf, double tau);

}  // namespace nlds
