#pragma once

#include <optional>
#include <vector>

#include "nlds/history.hpp"
#include "nlds/model.hpp"
#include "nlds/timechange.hpp"
#include "nlds/trajectory.hpp"

namespace nlds {

/// Linearly implicit IMEX Euler. The diffusion coefficient is frozen at the
/// start of each step; reaction, delay and forcing enter explicitly.

struct SolveOptions {
  /// Record every k-th step (the final step is always recorded).
  int record_every = 1;
  /// Abort when ‖u‖_∞ exceeds this value.
  double blowup_linf = 1e6;
};

/// w_new = (I - dτ·a·Δ_h)⁻¹ [w + dτ(λ f(w) + γ w(τ-ρ) + h(τ))], a = a(l(w)).
GridFunction step_quasilinear(const GridFunction& state, const HistoryBuffer& buf,
                              const ProblemSpec& spec, double tau, double dtau);

/// Stateful driver for the quasilinear problem in τ.
class QuasilinearStepper {
 public:
  QuasilinearStepper(const ProblemSpec& spec, const InitialFunction& phi, double dtau,
                     double blowup_linf = 1e6);

  void step();

  double tau() const noexcept { return static_cast<double>(steps_) * dtau_; }
  long steps() const noexcept { return steps_; }
  double dtau() const noexcept { return dtau_; }
  const GridFunction& state() const noexcept { return state_; }
  const HistoryBuffer& history() const noexcept { return history_; }
  /// Coefficient a(l(w)) frozen in the most recent step (at τ = 0: a(l(φ(0)))).
  double last_coeff() const noexcept { return last_coeff_; }

 private:
  ProblemSpec spec_;
  double dtau_;
  double blowup_linf_;
  long steps_ = 0;
  GridFunction state_;
  HistoryBuffer history_;
  double last_coeff_;
};

/// Quasilinear trajectory on [0, T] in τ.
Trajectory solve_quasilinear(const ProblemSpec& spec, const InitialFunction& phi, double T,
                             double dtau, const SolveOptions& opts = {});
Trajectory solve_quasilinear(const ProblemSpec& spec, double T, double dtau,
                             const SolveOptions& opts = {});

struct GuardedRun {
  /// Everything recorded before the blow-up (the full path when none occurred).
  Trajectory trajectory;
  std::optional<double> blowup_stamp;
};

/// solve_quasilinear that stops at a blow-up instead of throwing.
GuardedRun solve_quasilinear_guarded(const ProblemSpec& spec, const InitialFunction& phi, double T,
                                     double dtau, const SolveOptions& opts = {});

/// Stateful driver for the time-rescaled semilinear problem
///   u_t = Δu + (λ f(u) + γ w(τ(t) - ρ) + h(τ(t))) / a(l(u)),
/// whose τ-clock advances as dτ/dt = 1/a(l(u)). History is kept in τ-stamps.
class SemilinearStepper {
 public:
  SemilinearStepper(const ProblemSpec& spec, const InitialFunction& phi, double dt,
                    double blowup_linf = 1e6);

  void step();

  double t() const noexcept { return static_cast<double>(steps_) * dt_; }
  double tau() const noexcept { return clock_.back().alpha; }
  long steps() const noexcept { return steps_; }
  double dt() const noexcept { return dt_; }
  const GridFunction& state() const noexcept { return state_; }
  const HistoryBuffer& history() const noexcept { return history_; }
  const TimeChange& clock() const noexcept { return clock_; }
  double last_coeff() const noexcept { return last_coeff_; }

 private:
  ProblemSpec spec_;
  double dt_;
  double blowup_linf_;
  long steps_ = 0;
  GridFunction state_;
  HistoryBuffer history_;
  TimeChange clock_;
  double last_coeff_;
};

struct SemilinearRun {
  /// States stamped in t.
  Trajectory trajectory;
  /// The run's τ-clock, t ↦ τ.
  TimeChange clock;
  /// α₀ from compute_alpha0 (the delay window of the initial function).
  Alpha0 alpha0;
  /// ∫_{-ρ}^{0} a(l(φ(σ))) dσ: the t-length that the initial segment occupies on
  /// this solver's clock.
  double initial_segment_t_length = 0.0;
};

/// Integrates on t ∈ [0, T_t]; with `tau_stop`, stops at the first step whose
/// τ-clock reaches tau_stop (T_t is then an upper bound).
SemilinearRun solve_semilinear(const ProblemSpec& spec, const InitialFunction& phi, double T_t,
                               double dt, const SolveOptions& opts = {},
                               std::optional<double> tau_stop = std::nullopt);
SemilinearRun solve_semilinear(const ProblemSpec& spec, double T_t, double dt,
                               const SolveOptions& opts = {},
                               std::optional<double> tau_stop = std::nullopt);

/// w(τ) = u(map⁻¹(τ)) on `tau_grid`, interpolating linearly between t-stamps.
Trajectory pushforward(const Trajectory& traj_t, const TimeChange& map,
                       const std::vector<double>& tau_grid);

struct FormulationComparison {
  /// sup over the τ-grid of ‖w_direct(τ) - u(α⁻¹(τ))‖₂.
  double sup_l2 = 0.0;
  /// Quasilinear states on the τ-grid {0, every, 2·every, ..., T}.
  Trajectory direct;
  /// The semilinear clock thinned to every 100th knot (plus the last).
  TimeChange clock{Knot{0.0, 0.0}, 1.0, 1.0};
};

/// Solves both formulations with step spec.disc.dtau (dt = dτ) and compares them
/// on the τ-grid. The semilinear run is streamed: each grid value is interpolated
/// linearly in t between the two steps whose clock values bracket it, which is
/// what pushforward does on a fully recorded run.
FormulationComparison compare_formulations(const ProblemSpec& spec, const InitialFunction& phi,
                                           double T, double every = 0.01);

/// l2 residual of the concatenated variation-of-constants identity at t_probe:
///   u(t) - [e^{tΔ_h} φ(0) + Σ_intervals Σ_steps ∫ e^{(t-s)Δ_h} g(s_j) ds],
/// with the discrete semigroup applied exactly on the sine eigenbasis and g
/// held constant on each step (the scheme's own quadrature). `traj` must be a
/// semilinear run recorded at every step.
double concatenation_check(const Trajectory& traj, const ProblemSpec& spec,
                           const InitialFunction& phi, const TimeChange& map, double t_probe);

}  // namespace nlds
