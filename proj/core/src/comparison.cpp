#include "nlds/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlds/error.hpp"

namespace nlds {

double f_minus(const ProblemSpec& spec, double K, double u) noexcept {
  return (spec.lambda * spec.f(u) - spec.gamma * K) / spec.M;
}

double f_plus(const ProblemSpec& spec, double K, double u) noexcept {
  return (spec.lambda * spec.f(u) + spec.gamma * K) / spec.m;
}

namespace {

// One step of u_t = Δu + r(u) with the shared IMEX scheme.
template <typename Rate>
GridFunction envelope_step(const GridFunction& u, double dt, Rate rate) {
  GridFunction rhs(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = u[i] + dt * rate(u[i]);
  return implicit_diffusion_step(rhs, 1.0, dt);
}

GridFunction constant(Grid grid, double value) {
  GridFunction g(grid);
  for (double& v : g.values()) v = value;
  return g;
}

void guard(const GridFunction& u, double t, double limit) {
  const double linf = norms(u).linf;
  if (!u.all_finite() || linf > limit) {
    throw BlowUpError("envelope solve blew up at t = " + std::to_string(t), t, linf);
  }
}

}  // namespace

EnvelopePair solve_envelope(const ProblemSpec& spec, double K, double T, double dt,
                            const SolveOptions& opts, double t0) {
  if (!(K > 0.0)) throw ParameterError("envelope constant K must be positive");
  if (!(dt > 0.0) || !(T > 0.0)) throw ParameterError("envelope solve needs T > 0 and dt > 0");
  const Grid grid = spec.grid();
  const long n = std::max(1L, std::lround(T / dt));
  const int every = std::max(1, opts.record_every);
  auto lo_rate = [&](double u) { return f_minus(spec, K, u); };
  auto hi_rate = [&](double u) { return f_plus(spec, K, u); };

  EnvelopePair out;
  out.K = K;
  GridFunction lo = constant(grid, -K);
  GridFunction hi = constant(grid, K);
  out.lower.push(t0, lo, 1.0);
  out.upper.push(t0, hi, 1.0);
  for (long k = 1; k <= n; ++k) {
    lo = envelope_step(lo, dt, lo_rate);
    hi = envelope_step(hi, dt, hi_rate);
    const double t = t0 + static_cast<double>(k) * dt;
    guard(lo, t, opts.blowup_linf);
    guard(hi, t, opts.blowup_linf);
    if (k % every == 0 || k == n) {
      out.lower.push(t, lo, 1.0);
      out.upper.push(t, hi, 1.0);
    }
  }
  return out;
}

namespace {

double pointwise_violation(const GridFunction& lo, const GridFunction& mid, const GridFunction& hi) {
  double worst = 0.0;
  for (std::size_t i = 0; i < mid.size(); ++i) {
    worst = std::max({worst, lo[i] - mid[i], mid[i] - hi[i]});
  }
  return worst;
}

}  // namespace

double check_sandwich(const Trajectory& lower, const Trajectory& mid, const Trajectory& upper) {
  if (lower.empty() || upper.empty() || mid.empty()) return 0.0;
  const double start = std::max(lower.front_stamp(), upper.front_stamp());
  const double stop = std::min(lower.back_stamp(), upper.back_stamp());
  double worst = 0.0;
  for (std::size_t j = 0; j < mid.size(); ++j) {
    const double s = mid.stamps()[j];
    if (s <= start || s > stop) continue;
    worst = std::max(worst, pointwise_violation(lower.at(s), mid.states()[j], upper.at(s)));
  }
  return worst;
}

std::vector<double> stepwise_constants(const Trajectory& traj, const TimeChange& map, double rho,
                                       int n_steps) {
  if (n_steps < 1) throw ParameterError("stepwise_constants needs n_steps >= 1");
  const double needed = n_steps * rho;
  if (map.back().alpha < needed) {
    throw RangeError("trajectory clock does not reach n_steps * rho", needed, map.front().alpha,
                     map.back().alpha);
  }
  const double t_cover = map.invert(needed);
  if (traj.back_stamp() < t_cover) {
    throw RangeError("trajectory does not cover the requested intervals", t_cover,
                     traj.front_stamp(), traj.back_stamp());
  }
  std::vector<double> ks(static_cast<std::size_t>(n_steps), 0.0);
  const auto& stamps = traj.stamps();
  const auto& diag = traj.diagnostics();
  for (int k = 1; k <= n_steps; ++k) {
    const double t0 = map.invert((k - 1) * rho);
    const double t1 = map.invert(k * rho);
    double sup = 0.0;
    for (std::size_t j = 0; j < stamps.size(); ++j) {
      if (stamps[j] < t0) continue;
      if (stamps[j] > t1) break;
      // The peak covers steps since the previous stamp; use it only when that
      // stamp also lies in the interval.
      const bool whole = j > 0 && stamps[j - 1] >= t0;
      sup = std::max(sup, whole ? diag[j].linf_peak : diag[j].linf);
    }
    ks[static_cast<std::size_t>(k - 1)] = sup;
  }
  return ks;
}

RebasedSandwich rebased_sandwich(const ProblemSpec& spec, const InitialFunction& phi,
                                 int n_intervals, double dt) {
  if (n_intervals < 1) throw ParameterError("rebased_sandwich needs at least one interval");
  SemilinearStepper mid(spec, phi, dt);
  const Grid grid = phi.grid();

  RebasedSandwich report;
  double K = phi.linf_sup();
  // sup |u| over the current interval, seeded by the state that opens it and
  // the last state before it (both feed the delayed input of the next one).
  double prev_linf = norms(phi.at_zero()).linf;
  double running = prev_linf;

  for (int n = 1; n <= n_intervals; ++n) {
    IntervalSandwich iv;
    iv.index = n;
    iv.t_begin = mid.t();
    iv.K = K;
    const double Kpos = std::max(K, 1e-300);
    GridFunction lo = constant(grid, -Kpos);
    GridFunction hi = constant(grid, Kpos);
    auto lo_rate = [&](double u) { return f_minus(spec, Kpos, u); };
    auto hi_rate = [&](double u) { return f_plus(spec, Kpos, u); };

    double last_linf = norms(mid.state()).linf;
    while (true) {
      mid.step();
      lo = envelope_step(lo, dt, lo_rate);
      hi = envelope_step(hi, dt, hi_rate);
      guard(lo, mid.t(), 1e6);
      guard(hi, mid.t(), 1e6);
      iv.violation = std::max(iv.violation, pointwise_violation(lo, mid.state(), hi));
      const double linf = norms(mid.state()).linf;
      running = std::max(running, linf);
      if (mid.tau() >= n * spec.rho) {
        iv.t_end = mid.t();
        // Next interval opens at this state; its bracketing window starts with
        // the previous state.
        iv.K_next = running;
        running = std::max(last_linf, linf);
        break;
      }
      last_linf = linf;
    }
    report.max_violation = std::max(report.max_violation, iv.violation);
    K = iv.K_next;
    report.intervals.push_back(iv);
  }
  return report;
}

}  // namespace nlds
