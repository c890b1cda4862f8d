#pragma once

#include <cstddef>
#include <vector>

#include "nlds/grid.hpp"

namespace nlds {

struct StampDiagnostics {
  double l2 = 0.0;
  double h10 = 0.0;
  double linf = 0.0;
  /// Diffusion coefficient a(l(u)) used by the step that produced this state.
  double coeff = 0.0;
  /// Largest ‖u‖_∞ over every step since the previous recorded stamp.
  double linf_peak = 0.0;
};

/// Recorded solution path: one state per strictly increasing stamp.
class Trajectory {
 public:
  void push(double stamp, GridFunction state, double coeff, double linf_peak = -1.0);

  std::size_t size() const noexcept { return stamps_.size(); }
  bool empty() const noexcept { return stamps_.empty(); }

  const std::vector<double>& stamps() const noexcept { return stamps_; }
  const std::vector<GridFunction>& states() const noexcept { return states_; }
  const std::vector<StampDiagnostics>& diagnostics() const noexcept { return diagnostics_; }

  double front_stamp() const { return stamps_.front(); }
  double back_stamp() const { return stamps_.back(); }
  const GridFunction& back_state() const { return states_.back(); }

  /// Linear interpolation between bracketing stamps; exact at stamps.
  GridFunction at(double stamp) const;

 private:
  std::vector<double> stamps_;
  std::vector<GridFunction> states_;
  std::vector<StampDiagnostics> diagnostics_;
};

}  // namespace nlds
