#pragma once

#include <vector>

#include "nlds/integrator.hpp"
#include "nlds/model.hpp"
#include "nlds/timechange.hpp"
#include "nlds/trajectory.hpp"

namespace nlds {

/// Shifted nonlinearities of the sub/super-solution problems:
///   f⁻(u) = (λ f(u) - γK)/M,   f⁺(u) = (λ f(u) + γK)/m.
double f_minus(const ProblemSpec& spec, double K, double u) noexcept;
double f_plus(const ProblemSpec& spec, double K, double u) noexcept;

struct EnvelopePair {
  /// Solution of u_t = Δu + f⁻(u) from the constant -K.
  Trajectory lower;
  /// Solution of u_t = Δu + f⁺(u) from the constant +K.
  Trajectory upper;
  double K = 0.0;
};

/// Both envelope problems on [t0, t0 + T] with the semilinear IMEX scheme and
/// step dt. The constants ±K on interior nodes violate the boundary condition
/// at t0; the Dirichlet values apply from the first step on.
EnvelopePair solve_envelope(const ProblemSpec& spec, double K, double T, double dt,
                            const SolveOptions& opts = {}, double t0 = 0.0);

/// max over mid's stamps strictly after the envelopes' first stamp (and inside
/// their range) of max(lower - mid, mid - upper, 0); envelopes are interpolated.
double check_sandwich(const Trajectory& lower, const Trajectory& mid, const Trajectory& upper);

/// K_n = sup ‖u‖_∞ over the n-th rescaled interval [map⁻¹((n-1)ρ), map⁻¹(nρ)],
/// n = 1..n_steps, using each stamp's step-resolved peak.
std::vector<double> stepwise_constants(const Trajectory& traj, const TimeChange& map, double rho,
                                       int n_steps);

struct IntervalSandwich {
  int index = 0;
  double t_begin = 0.0;
  double t_end = 0.0;
  /// Constant bracketing this interval's initial value and delayed input.
  double K = 0.0;
  /// sup |u| over this interval (the next interval's K).
  double K_next = 0.0;
  double violation = 0.0;
};

struct RebasedSandwich {
  std::vector<IntervalSandwich> intervals;
  double max_violation = 0.0;
};

/// Runs the semilinear solution together with envelope pairs re-based on each
/// delay interval: interval n uses K_{n-1}, the sup of |u| over interval n-1
/// (K_0 = sup |φ|), and starts from the first step whose τ-clock reaches (n-1)ρ.
/// Violations are measured step by step on the shared stamps.
RebasedSandwich rebased_sandwich(const ProblemSpec& spec, const InitialFunction& phi,
                                 int n_intervals, double dt);

}  // namespace nlds
