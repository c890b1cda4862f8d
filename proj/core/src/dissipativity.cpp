#include "nlds/dissipativity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlds/error.hpp"

namespace nlds {

namespace {

double s_expression(const ProblemSpec& spec, double nu, double c0, double c1, double u) {
  return u * spec.f(u) + nu * c0 * u * u - c1 * std::abs(u);
}

}  // namespace

SCheck check_S(const ProblemSpec& spec, double c0, double c1, const ScanRange& scan) {
  if (!(scan.half_width > 0.0) || !(scan.step > 0.0)) {
    throw ParameterError("check_S needs a positive scan width and step");
  }
  const double nus[2] = {spec.m / spec.lambda, spec.M / spec.lambda};
  const auto n = static_cast<long>(std::ceil(scan.half_width / scan.step));
  SCheck out;
  out.worst_margin = -std::numeric_limits<double>::infinity();
  for (double nu : nus) {
    double best = -std::numeric_limits<double>::infinity();
    double arg = 0.0;
    for (long i = -n; i <= n; ++i) {
      const double u = std::clamp(static_cast<double>(i) * scan.step, -scan.half_width, scan.half_width);
      const double v = s_expression(spec, nu, c0, c1, u);
      if (v > best) {
        best = v;
        arg = u;
      }
    }
    // Refine around the coarse maximizer on successively finer local grids.
    double h = scan.step;
    for (int level = 0; level < 6; ++level) {
      const double lo = std::max(-scan.half_width, arg - h);
      const double hi = std::min(scan.half_width, arg + h);
      const double sub = (hi - lo) / 200.0;
      for (int k = 0; k <= 200; ++k) {
        const double u = lo + k * sub;
        const double v = s_expression(spec, nu, c0, c1, u);
        if (v > best) {
          best = v;
          arg = u;
        }
      }
      h = 2.0 * sub;
    }
    if (best > out.worst_margin) {
      out.worst_margin = best;
      out.witness = arg;
    }
  }
  out.holds = out.worst_margin <= scan.tolerance;
  return out;
}

DCheck check_D(const ProblemSpec& spec, double c0) {
  DCheck out;
  out.omega = continuum_first_eigenvalue(c0);
  out.omega_discrete = discrete_first_eigenvalue(spec.grid(), c0);
  if (!(out.omega > 0.0)) {
    out.diagnostics.emplace_back("omega = pi^2 + C0 is not positive: no exponential decay");
    return out;
  }
  const double w = out.omega;
  out.d_lhs = std::exp(-w * spec.rho / spec.m) + spec.gamma / (w * spec.m);
  out.d_lhs_derived = std::exp(-w * spec.rho / spec.M) + spec.gamma / (w * spec.m);
  out.d_holds = out.d_lhs < 1.0;
  out.derived_holds = out.d_lhs_derived < 1.0;
  if (!out.d_holds) out.diagnostics.emplace_back("condition (D) fails: e^{-w rho/m} + gamma/(w m) >= 1");
  if (!out.derived_holds) {
    out.diagnostics.emplace_back("derived condition fails: e^{-w rho/M} + gamma/(w m) >= 1");
  }
  return out;
}

std::optional<double> compute_K_abs(double c1, double omega, double rho, double gamma, double m,
                                    double M, double margin) {
  if (!(omega > 0.0) || !(m > 0.0) || !(M >= m)) return std::nullopt;
  const double denom = 1.0 - std::exp(-omega * rho / M) - gamma / (m * omega);
  if (!(denom > 0.0)) return std::nullopt;
  return (c1 / omega) / denom * (1.0 + margin);
}

GridFunction solve_theta(double c0, double c1_star, const Grid& grid) {
  if (c0 < 0.0) throw ParameterError("solve_theta needs C0 >= 0");
  GridFunction rhs(grid);
  for (double& v : rhs.values()) v = c1_star;
  return solve_shifted_poisson(rhs, c0);
}

double theta_closed_form(double c0, double c1_star, double x) {
  if (c0 == 0.0) return c1_star * x * (1.0 - x) / 2.0;
  const double r = std::sqrt(c0);
  return c1_star / c0 * (1.0 - std::cosh(r * (x - 0.5)) / std::cosh(r / 2.0));
}

ThetaBound check_theta_bound(const Trajectory& traj, const GridFunction& theta, bool phi_inside,
                             double tail_fraction) {
  ThetaBound out;
  if (traj.empty()) return out;
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw ParameterError("tail fraction must lie in (0, 1]");
  }
  const std::size_t n = traj.size();
  std::size_t first = 0;
  if (!phi_inside) {
    const auto tail = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
    first = n - std::max<std::size_t>(1, tail);
  }
  out.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t j = first; j < n; ++j) {
    const GridFunction& u = traj.states()[j];
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u[i]) - theta[i]);
    if (worst > 0.0 && !out.first_violation_stamp) out.first_violation_stamp = traj.stamps()[j];
    out.max_violation = std::max(out.max_violation, worst);
  }
  out.max_violation = std::max(out.max_violation, 0.0);
  return out;
}

DissipativityReport build_dissipativity_report(const ProblemSpec& spec, const ScanRange& scan) {
  DissipativityReport rep;
  rep.conditions = check_D(spec, spec.c0);
  rep.diagnostics = rep.conditions.diagnostics;
  const auto sc = derive_structural_constants(spec);
  if (!sc) {
    rep.diagnostics.emplace_back("no finite C1 satisfies the structural condition for this f and C0");
    rep.constants = {spec.c0, std::numeric_limits<double>::infinity(), spec.m / spec.lambda,
                     spec.M / spec.lambda};
    rep.s_check.worst_margin = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.constants = *sc;
  rep.s_check = check_S(spec, sc->c0, sc->c1, scan);
  if (!rep.s_check.holds) {
    std::ostringstream msg;
    msg << "structural condition violated at u = " << rep.s_check.witness << " by "
        << rep.s_check.worst_margin;
    rep.diagnostics.push_back(msg.str());
  }
  rep.k_abs = compute_K_abs(sc->c1, rep.conditions.omega, spec.rho, spec.gamma, spec.m, spec.M);
  if (!rep.k_abs) {
    rep.diagnostics.emplace_back("no finite absorbing radius from the derived condition");
    return rep;
  }
  const double K = *rep.k_abs;
  rep.c1_star_best = spec.gamma * K / spec.M + sc->c1;
  rep.c1_star_worst = spec.gamma * K / spec.m + sc->c1;
  if (spec.c0 >= 0.0) rep.theta = solve_theta(spec.c0, rep.c1_star_worst, spec.grid());
  return rep;
}

AbsorbingEntry absorbing_norm_bounds(const Trajectory& traj, double k_abs,
                                     std::optional<double> k_h10) {
  AbsorbingEntry out;
  const auto& diag = traj.diagnostics();
  const auto& stamps = traj.stamps();
  // Scan backward: the entry time is the earliest stamp of the trailing run
  // that stays inside the ball.
  auto entry = [&](auto inside) -> std::optional<double> {
    std::optional<double> t;
    for (std::size_t j = diag.size(); j-- > 0;) {
      if (!inside(diag[j])) break;
      t = stamps[j];
    }
    return t;
  };
  out.t_entry_linf = entry([&](const StampDiagnostics& d) { return d.linf <= k_abs; });
  if (k_h10) {
    out.k_h10 = *k_h10;
  } else if (out.t_entry_linf) {
    for (std::size_t j = 0; j < diag.size(); ++j) {
      if (stamps[j] >= *out.t_entry_linf) out.k_h10 = std::max(out.k_h10, diag[j].h10);
    }
  }
  if (k_h10 || out.t_entry_linf) {
    const double r = out.k_h10;
    out.t_entry_h10 = entry([&](const StampDiagnostics& d) { return d.h10 <= r; });
  }
  return out;
}

}  // namespace nlds
