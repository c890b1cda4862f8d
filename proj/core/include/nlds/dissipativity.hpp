#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlds/grid.hpp"
#include "nlds/model.hpp"
#include "nlds/trajectory.hpp"

namespace nlds {

/// Symmetric scan [-half_width, half_width] with spacing `step`.
struct ScanRange {
  double half_width = 1e3;
  double step = 1e-2;
  /// Margins up to this value count as holding (rounding in the tight case).
  double tolerance = 1e-12;
};

struct SCheck {
  bool holds = false;
  /// max over the scan and both ν of u f(u) + ν C₀ u² - C₁|u|; holds when <= scan.tolerance.
  double worst_margin = 0.0;
  double witness = 0.0;
};

/// Dense scan of the structural inequality for ν = m/λ and ν = M/λ, with a
/// local refinement around the coarse maximizer.
SCheck check_S(const ProblemSpec& spec, double c0, double c1, const ScanRange& scan = {});

struct DCheck {
  /// π² + C₀ and its discrete counterpart on the spec's grid.
  double omega = 0.0;
  double omega_discrete = 0.0;
  /// e^{-ωρ/m} + γ/(ωm).
  double d_lhs = 0.0;
  /// e^{-ωρ/M} + γ/(ωm), the form the absorbing estimate uses.
  double d_lhs_derived = 0.0;
  bool d_holds = false;
  bool derived_holds = false;
  std::vector<std::string> diagnostics;
};

DCheck check_D(const ProblemSpec& spec, double c0);

/// K = (C₁/ω) / (1 - e^{-ωρ/M} - γ/(mω)) · (1 + margin); empty when the
/// denominator is not positive.
std::optional<double> compute_K_abs(double c1, double omega, double rho, double gamma, double m,
                                    double M, double margin = 0.01);

/// Discrete solution of -θ'' + C₀θ = C₁*, θ(0) = θ(1) = 0.
GridFunction solve_theta(double c0, double c1_star, const Grid& grid);

/// Closed form of the same boundary value problem at x ∈ [0, 1].
double theta_closed_form(double c0, double c1_star, double x);

struct ThetaBound {
  double max_violation = 0.0;
  std::optional<double> first_violation_stamp;
};

/// max |u| - θ over all stamps when `phi_inside`, else over the trailing
/// `tail_fraction` of stamps (limsup surrogate).
ThetaBound check_theta_bound(const Trajectory& traj, const GridFunction& theta, bool phi_inside,
                             double tail_fraction = 0.2);

struct DissipativityReport {
  DCheck conditions;
  StructuralConstants constants;
  SCheck s_check;
  std::optional<double> k_abs;
  /// (γK/M + C₁, γK/m + C₁) at K = K_abs.
  double c1_star_best = 0.0;
  double c1_star_worst = 0.0;
  /// θ for the worst-case C₁*; empty when K_abs is.
  std::optional<GridFunction> theta;
  std::vector<std::string> diagnostics;
};

DissipativityReport build_dissipativity_report(const ProblemSpec& spec,
                                               const ScanRange& scan = {});

struct AbsorbingEntry {
  std::optional<double> t_entry_linf;
  std::optional<double> t_entry_h10;
  /// H¹₀ radius used for the second entry time (the empirical post-entry sup
  /// unless supplied).
  double k_h10 = 0.0;
};

/// First stamps after which ‖u‖_∞ <= K_abs (resp. ‖u‖_{H¹₀} <= K_h10) for all
/// remaining stamps.
AbsorbingEntry absorbing_norm_bounds(const Trajectory& traj, double k_abs,
                                     std::optional<double> k_h10 = std::nullopt);

}  // namespace nlds
