#pragma once

#include <span>
#include <vector>

#include "nlds/model.hpp"

namespace nlds {

struct Knot {
  double t = 0.0;
  double alpha = 0.0;
};

/// Monotone, piecewise-linear map t ↦ α(t) with chord slopes confined to
/// [slope_lo, slope_hi]. Knots are append-only.
class TimeChange {
 public:
  TimeChange(Knot origin, double slope_lo, double slope_hi);
  /// Build from a complete knot list (validated).
  TimeChange(std::vector<Knot> knots, double slope_lo, double slope_hi);

  /// Appends (t_new, α_last + coeff·(t_new - t_last)); left-endpoint rule.
  void append(double t_new, double coeff);

  /// Piecewise-linear inverse; exact on knot images.
  double invert(double tau) const;
  /// Piecewise-linear forward evaluation; exact on knots.
  double eval(double t) const;

  std::span<const Knot> knots() const noexcept { return knots_; }
  const Knot& front() const noexcept { return knots_.front(); }
  const Knot& back() const noexcept { return knots_.back(); }
  double slope_lo() const noexcept { return slope_lo_; }
  double slope_hi() const noexcept { return slope_hi_; }

 private:
  std::vector<Knot> knots_;
  double slope_lo_;
  double slope_hi_;
};

/// Returns a copy of `map` extended by one knot.
TimeChange accumulate_alpha(TimeChange map, double t_new, double coeff);

double invert_alpha(const TimeChange& map, double tau);

struct Alpha0 {
  /// α₀⁻¹(-ρ) < 0.
  double t_start = 0.0;
  /// α₀ on [t_start, 0], slope bounds [m, M].
  TimeChange map;
  /// ∫_{-ρ}^{0} 1 / a(l(φ(σ))) dσ by the trapezoid rule on the σ-samples of φ,
  /// the same length written as a quadrature.
  double reciprocal_integral = 0.0;
};

/// Integrates α'(s) = a(l(φ(α(s)))), α(0) = 0, backward in s with step ds
/// until α reaches -ρ; the last sub-step is shortened so α(t_start) = -ρ exactly.
Alpha0 compute_alpha0(const InitialFunction& phi, const ProblemSpec& spec, double ds);

}  // namespace nlds
