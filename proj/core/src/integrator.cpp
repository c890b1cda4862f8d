#include "nlds/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <sstream>
#include <string>

#include "nlds/error.hpp"

namespace nlds {

namespace {

// λ f(u) + γ·delayed + h(τ, ·), the explicit part shared by both formulations.
GridFunction explicit_rate(const ProblemSpec& spec, const GridFunction& state,
                           const GridFunction& delayed, double tau) {
  GridFunction rate = eval_f(spec, state);
  const Grid& grid = state.grid();
  const bool forced = !spec.h.is_zero();
  for (std::size_t i = 0; i < rate.size(); ++i) {
    rate[i] = spec.lambda * rate[i] + spec.gamma * delayed[i];
    if (forced) rate[i] += spec.h(tau, grid.x(static_cast<int>(i)));
  }
  return rate;
}

void guard(const GridFunction& state, double stamp, double limit, const char* what) {
  double linf = 0.0;
  bool finite = true;
  for (double v : state.values()) {
    if (!std::isfinite(v)) {
      finite = false;
      break;
    }
    linf = std::max(linf, std::abs(v));
  }
  if (!finite || linf > limit) {
    std::ostringstream msg;
    msg << what << " blew up at stamp " << stamp << " (|u|_inf = "
        << (finite ? linf : std::numeric_limits<double>::infinity()) << ", guard " << limit << ")";
    throw BlowUpError(msg.str(), stamp, finite ? linf : std::numeric_limits<double>::infinity());
  }
}

void check_step(double step, const char* name) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ParameterError(std::string(name) + " must be positive");
  }
}

GridFunction quasilinear_update(const GridFunction& state, const HistoryBuffer& buf,
                                const ProblemSpec& spec, double tau, double dtau,
                                double coeff) {
  GridFunction rhs = explicit_rate(spec, state, buf.eval(tau - spec.rho), tau);
  rhs *= dtau;
  rhs += state;
  return implicit_diffusion_step(rhs, coeff, dtau);
}

}  // namespace

GridFunction step_quasilinear(const GridFunction& state, const HistoryBuffer& buf,
                              const ProblemSpec& spec, double tau, double dtau) {
  check_step(dtau, "dtau");
  GridFunction next =
      quasilinear_update(state, buf, spec, tau, dtau, eval_diffusion(spec, state));
  guard(next, tau + dtau, 1e6, "quasilinear step");
  return next;
}

QuasilinearStepper::QuasilinearStepper(const ProblemSpec& spec, const InitialFunction& phi,
                                       double dtau, double blowup_linf)
    : spec_(spec),
      dtau_(dtau),
      blowup_linf_(blowup_linf),
      state_(phi.at_zero()),
      history_(phi),
      last_coeff_(eval_diffusion(spec, phi.at_zero())) {
  check_step(dtau, "dtau");
  if (std::abs(phi.rho() - spec.rho) > 1e-12 * spec.rho) {
    throw ParameterError("initial function covers [-rho', 0] with rho' != spec.rho");
  }
}

void QuasilinearStepper::step() {
  const double tau_now = tau();
  last_coeff_ = eval_diffusion(spec_, state_);
  GridFunction next = quasilinear_update(state_, history_, spec_, tau_now, dtau_, last_coeff_);
  ++steps_;
  const double tau_next = tau();
  guard(next, tau_next, blowup_linf_, "quasilinear solve");
  history_.record(tau_next, next);
  history_.evict_before(tau_next - spec_.rho - 2.0 * dtau_);
  state_ = std::move(next);
}

namespace {

long step_count(double T, double step) {
  if (!(T > 0.0)) throw ParameterError("integration horizon must be positive");
  return std::max(1L, std::lround(T / step));
}

}  // namespace

Trajectory solve_quasilinear(const ProblemSpec& spec, const InitialFunction& phi, double T,
                             double dtau, const SolveOptions& opts) {
  QuasilinearStepper stepper(spec, phi, dtau, opts.blowup_linf);
  const long n = step_count(T, dtau);
  const int every = std::max(1, opts.record_every);
  Trajectory traj;
  traj.push(0.0, stepper.state(), stepper.last_coeff());
  double peak = 0.0;
  for (long k = 1; k <= n; ++k) {
    stepper.step();
    peak = std::max(peak, norms(stepper.state()).linf);
    if (k % every == 0 || k == n) {
      traj.push(stepper.tau(), stepper.state(), stepper.last_coeff(), peak);
      peak = 0.0;
    }
  }
  return traj;
}

Trajectory solve_quasilinear(const ProblemSpec& spec, double T, double dtau,
                             const SolveOptions& opts) {
  return solve_quasilinear(spec, spec.initial_function(), T, dtau, opts);
}

GuardedRun solve_quasilinear_guarded(const ProblemSpec& spec, const InitialFunction& phi, double T,
                                     double dtau, const SolveOptions& opts) {
  QuasilinearStepper stepper(spec, phi, dtau, opts.blowup_linf);
  const long n = step_count(T, dtau);
  const int every = std::max(1, opts.record_every);
  GuardedRun run;
  run.trajectory.push(0.0, stepper.state(), stepper.last_coeff());
  double peak = 0.0;
  for (long k = 1; k <= n; ++k) {
    try {
      stepper.step();
    } catch (const BlowUpError& e) {
      run.blowup_stamp = e.stamp();
      break;
    }
    peak = std::max(peak, norms(stepper.state()).linf);
    if (k % every == 0 || k == n) {
      run.trajectory.push(stepper.tau(), stepper.state(), stepper.last_coeff(), peak);
      peak = 0.0;
    }
  }
  return run;
}

SemilinearStepper::SemilinearStepper(const ProblemSpec& spec, const InitialFunction& phi,
                                     double dt, double blowup_linf)
    : spec_(spec),
      dt_(dt),
      blowup_linf_(blowup_linf),
      state_(phi.at_zero()),
      history_(phi),
      clock_(Knot{0.0, 0.0}, 1.0 / spec.M, 1.0 / spec.m),
      last_coeff_(eval_diffusion(spec, phi.at_zero())) {
  check_step(dt, "dt");
  if (std::abs(phi.rho() - spec.rho) > 1e-12 * spec.rho) {
    throw ParameterError("initial function covers [-rho', 0] with rho' != spec.rho");
  }
}

void SemilinearStepper::step() {
  const double tau_now = tau();
  last_coeff_ = eval_diffusion(spec_, state_);
  GridFunction rhs = explicit_rate(spec_, state_, history_.eval(tau_now - spec_.rho), tau_now);
  rhs *= dt_ / last_coeff_;
  rhs += state_;
  GridFunction next = implicit_diffusion_step(rhs, 1.0, dt_);
  ++steps_;
  clock_.append(t(), 1.0 / last_coeff_);
  const double tau_next = clock_.back().alpha;
  guard(next, t(), blowup_linf_, "semilinear solve");
  history_.record(tau_next, next);
  history_.evict_before(tau_next - spec_.rho - 2.0 * dt_ / spec_.m);
  state_ = std::move(next);
}

SemilinearRun solve_semilinear(const ProblemSpec& spec, const InitialFunction& phi, double T_t,
                               double dt, const SolveOptions& opts,
                               std::optional<double> tau_stop) {
  Alpha0 alpha0 = compute_alpha0(phi, spec, spec.disc.ds);
  double segment = 0.0;
  const auto& stamps = phi.stamps();
  const auto& states = phi.states();
  for (std::size_t j = 1; j < stamps.size(); ++j) {
    segment += 0.5 * (eval_diffusion(spec, states[j - 1]) + eval_diffusion(spec, states[j])) *
               (stamps[j] - stamps[j - 1]);
  }

  SemilinearStepper stepper(spec, phi, dt, opts.blowup_linf);
  const long n = step_count(T_t, dt);
  const int every = std::max(1, opts.record_every);
  Trajectory traj;
  traj.push(0.0, stepper.state(), stepper.last_coeff());
  double peak = 0.0;
  for (long k = 1; k <= n; ++k) {
    stepper.step();
    peak = std::max(peak, norms(stepper.state()).linf);
    const bool stop = tau_stop && stepper.tau() >= *tau_stop;
    if (k % every == 0 || k == n || stop) {
      traj.push(stepper.t(), stepper.state(), stepper.last_coeff(), peak);
      peak = 0.0;
    }
    if (stop) break;
  }
  return {std::move(traj), stepper.clock(), std::move(alpha0), segment};
}

SemilinearRun solve_semilinear(const ProblemSpec& spec, double T_t, double dt,
                               const SolveOptions& opts, std::optional<double> tau_stop) {
  return solve_semilinear(spec, spec.initial_function(), T_t, dt, opts, tau_stop);
}

Trajectory pushforward(const Trajectory& traj_t, const TimeChange& map,
                       const std::vector<double>& tau_grid) {
  Trajectory out;
  const auto& stamps = traj_t.stamps();
  for (double tau : tau_grid) {
    const double t = map.invert(tau);
    const auto it = std::lower_bound(stamps.begin(), stamps.end(), t);
    const std::size_t j = it == stamps.end() ? stamps.size() - 1
                                             : static_cast<std::size_t>(it - stamps.begin());
    out.push(tau, traj_t.at(t), traj_t.diagnostics()[j].coeff);
  }
  return out;
}

FormulationComparison compare_formulations(const ProblemSpec& spec, const InitialFunction& phi,
                                           double T, double every) {
  const double dtau = spec.disc.dtau;
  FormulationComparison out;
  const int stride = std::max(1, static_cast<int>(std::lround(every / dtau)));
  out.direct = solve_quasilinear(spec, phi, T, dtau, {stride});

  SemilinearStepper semi(spec, phi, dtau);
  GridFunction prev = semi.state();
  double prev_t = 0.0;
  double prev_tau = 0.0;
  std::vector<Knot> thinned{Knot{0.0, 0.0}};
  for (std::size_t j = 0; j < out.direct.size(); ++j) {
    const double target = out.direct.stamps()[j];
    while (semi.tau() < target) {
      prev = semi.state();
      prev_t = semi.t();
      prev_tau = semi.tau();
      semi.step();
      if (semi.steps() % 100 == 0) thinned.push_back(semi.clock().back());
    }
    GridFunction u = semi.state();
    if (semi.steps() > 0 && target > prev_tau) {
      const double t_target = semi.clock().invert(target);
      u = lerp(prev, semi.state(), (t_target - prev_t) / (semi.t() - prev_t));
    }
    out.sup_l2 = std::max(out.sup_l2, norms(out.direct.states()[j] - u).l2);
  }
  if (thinned.back().t != semi.clock().back().t) thinned.push_back(semi.clock().back());
  out.clock = TimeChange(std::move(thinned), semi.clock().slope_lo(), semi.clock().slope_hi());
  return out;
}

double concatenation_check(const Trajectory& traj, const ProblemSpec& spec,
                           const InitialFunction& phi, const TimeChange& map, double t_probe) {
  const Grid grid = phi.grid();
  const std::size_t n = grid.size();
  const double dx = grid.dx();
  const auto& stamps = traj.stamps();
  if (stamps.empty() || t_probe < stamps.front() || t_probe > stamps.back()) {
    throw RangeError("concatenation check probe outside the run", t_probe,
                     stamps.empty() ? 0.0 : stamps.front(), stamps.empty() ? 0.0 : stamps.back());
  }

  // Orthonormal sine eigenbasis of Δ_h under the dx-weighted inner product.
  std::vector<double> basis(n * n);
  std::vector<double> mu(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sin((k + 1) * std::numbers::pi * dx / 2.0);
    mu[k] = 4.0 / (dx * dx) * s * s;
    for (std::size_t i = 0; i < n; ++i) {
      basis[k * n + i] = std::sqrt(2.0) * std::sin((k + 1) * std::numbers::pi * grid.x(static_cast<int>(i)));
    }
  }
  auto project = [&](const GridFunction& v) {
    std::vector<double> c(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      const double* row = &basis[k * n];
      for (std::size_t i = 0; i < n; ++i) acc += row[i] * v[i];
      c[k] = acc * dx;
    }
    return c;
  };

  auto delayed = [&](double tau_lag) {
    if (tau_lag <= 0.0) return phi.eval(tau_lag);
    return traj.at(map.invert(tau_lag));
  };

  // Spectral accumulator, seeded with the free evolution of φ(0).
  std::vector<double> acc = project(phi.at_zero());
  for (std::size_t k = 0; k < n; ++k) acc[k] *= std::exp(-mu[k] * t_probe);

  // Sum over delay intervals [α⁻¹((m-1)ρ), α⁻¹(mρ)] of the per-step integrals.
  std::size_t j = 0;
  int interval = 1;
  while (j + 1 < stamps.size() && stamps[j + 1] <= t_probe * (1.0 + 1e-14)) {
    const double interval_end_tau = interval * spec.rho;
    std::vector<double> part(n, 0.0);
    while (j + 1 < stamps.size() && stamps[j + 1] <= t_probe * (1.0 + 1e-14) &&
           map.eval(stamps[j]) < interval_end_tau) {
      const double s0 = stamps[j];
      const double s1 = stamps[j + 1];
      const GridFunction& u = traj.states()[j];
      const double tau_s = map.eval(s0);
      const double coeff = eval_diffusion(spec, u);
      GridFunction g = explicit_rate(spec, u, delayed(tau_s - spec.rho), tau_s);
      g *= 1.0 / coeff;
      const std::vector<double> gh = project(g);
      for (std::size_t k = 0; k < n; ++k) {
        const double w = (std::exp(-mu[k] * (t_probe - s1)) - std::exp(-mu[k] * (t_probe - s0))) / mu[k];
        part[k] += gh[k] * w;
      }
      ++j;
    }
    for (std::size_t k = 0; k < n; ++k) acc[k] += part[k];
    ++interval;
  }

  const GridFunction u_probe = traj.at(t_probe);
  GridFunction diff(grid);
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    for (std::size_t k = 0; k < n; ++k) v += acc[k] * basis[k * n + i];
    diff[i] = u_probe[i] - v;
  }
  return norms(diff).l2;
}

}  // namespace nlds
