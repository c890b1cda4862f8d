#include "nlds/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlds/attractor.hpp"
#include "nlds/comparison.hpp"
#include "nlds/config.hpp"
#include "nlds/dissipativity.hpp"
#include "nlds/error.hpp"
#include "nlds/integrator.hpp"
#include "nlds/io.hpp"

namespace nlds {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

ProblemSpec with_disc(ProblemSpec s, const Discretization& d) {
  s.disc = d;
  return s;
}

Discretization refined(const Discretization& d, int level) {
  Discretization out = d;
  const int cells = d.n_interior + 1;
  if (level < 0) {
    out.n_interior = cells / 2 - 1;
    out.dtau = d.dtau * 2.0;
  } else if (level > 0) {
    out.n_interior = cells * 2 - 1;
    out.dtau = d.dtau / 2.0;
  }
  out.dt = out.dtau;
  return out;
}

int stride_for(double every, double dt) { return std::max(1, static_cast<int>(std::lround(every / dt))); }

CheckResult check_time_change(const Discretization& d, const std::filesystem::path* dir) {
  CheckResult r{1, "time-change equivalence", false, {}};
  std::vector<double> errors;
  for (int level = -1; level <= 1; ++level) {
    const ProblemSpec spec = with_disc(ProblemSpec::canonical(), refined(d, level));
    FormulationComparison eq = compare_formulations(spec, spec.initial_function(), 2.0);
    errors.push_back(eq.sup_l2);
    if (level == 0 && dir) {
      Trajectory coarse;
      const int stride = stride_for(0.05, 0.01);
      for (std::size_t j = 0; j < eq.direct.size(); j += static_cast<std::size_t>(stride)) {
        coarse.push(eq.direct.stamps()[j], eq.direct.states()[j], eq.direct.diagnostics()[j].coeff);
      }
      write_trajectory_csv(coarse, *dir / "canonical_trajectory.csv");
      write_json(trajectory_summary(eq.direct), *dir / "canonical_summary.json");
      write_timechange_csv(eq.clock, *dir / "timechange.csv");
    }
  }
  const double ratio_lo = errors[0] / errors[1];
  const double ratio_hi = errors[1] / errors[2];
  r.pass = errors[1] <= 5e-3 && ratio_lo >= 1.8 && ratio_hi >= 1.8;
  r.metrics = {{"errors", errors}, {"ratios", {num(ratio_lo), num(ratio_hi)}}, {"tolerance", 5e-3}};
  return r;
}

CheckResult check_delay_window(const Discretization& d, std::uint64_t seed) {
  CheckResult r{2, "delay window", true, {}};
  ProblemSpec spec = with_disc(ProblemSpec::canonical(), d);
  const double ds = 1e-5;
  const double lo = spec.rho / spec.M - ds * spec.M;
  const double hi = spec.rho / spec.m + ds * spec.M;
  json starts = json::array();
  double worst_quadrature_gap = 0.0;
  for (int i = 0; i < 20; ++i) {
    spec.phi = InitialProfile::random(seed * 1000 + static_cast<std::uint64_t>(i), 0.25 + 0.25 * (i % 8));
    const Alpha0 a0 = compute_alpha0(spec.initial_function(), spec, ds);
    const double len = -a0.t_start;
    starts.push_back(len);
    if (!(len >= lo && len <= hi)) r.pass = false;
    worst_quadrature_gap = std::max(worst_quadrature_gap, std::abs(len - a0.reciprocal_integral));
  }
  r.metrics = {{"window", {lo, hi}}, {"lengths", starts}, {"max_quadrature_gap", worst_quadrature_gap}};
  return r;
}

ProblemSpec heat_spec(const Discretization& d) {
  ProblemSpec s = with_disc(ProblemSpec::canonical(), d);
  s.a = Diffusion::constant(1.0);
  s.m = s.M = 1.0;
  s.f = Reaction::zero();
  s.gamma = 0.0;
  s.phi = InitialProfile::sine(1.0);
  return s;
}

CheckResult check_heat(const Discretization& d, const std::filesystem::path* dir) {
  CheckResult r{3, "heat reference", false, {}};
  const ProblemSpec spec = heat_spec(d);
  const Trajectory traj = solve_quasilinear(spec, 0.1, d.dtau, {stride_for(0.005, d.dtau)});
  const double got = traj.diagnostics().back().linf;
  const double exact = std::exp(-kPi * kPi * 0.1);
  const double rel = std::abs(got - exact) / exact;
  r.pass = rel <= 1e-3;
  r.metrics = {{"linf", got}, {"exact", exact}, {"relative_error", rel}, {"tolerance", 1e-3}};
  if (dir) {
    write_trajectory_csv(traj, *dir / "heat_trajectory.csv");
    write_json(trajectory_summary(traj), *dir / "heat_summary.json");
  }
  return r;
}

CheckResult check_delay_mode(const Discretization& d) {
  CheckResult r{4, "delay mode reference", false, {}};
  ProblemSpec spec = heat_spec(d);
  spec.gamma = 1.0;
  spec.rho = 1.0;
  const double T = 3.0;
  const DelayModeReference ref(kPi * kPi, 1.0, 1.0, 1.0, T, 1e-3);
  QuasilinearStepper stepper(spec, spec.initial_function(), d.dtau);
  const Grid grid = spec.grid();
  const long n = std::lround(T / d.dtau);
  double worst = 0.0;
  for (long k = 1; k <= n; ++k) {
    stepper.step();
    const double c = ref(stepper.tau());
    const auto& w = stepper.state();
    for (std::size_t i = 0; i < w.size(); ++i) {
      worst = std::max(worst, std::abs(w[i] - c * std::sin(kPi * grid.x(i))));
    }
  }
  r.pass = worst <= 1e-3;
  r.metrics = {{"linf_mismatch", worst}, {"tolerance", 1e-3}, {"c_final", ref(T)}};
  return r;
}

CheckResult check_sandwich_suite(const Discretization& d, std::uint64_t seed,
                                 const std::filesystem::path* dir) {
  CheckResult r{5, "sandwich", false, {}};
  ProblemSpec spec = with_disc(ProblemSpec::canonical(), d);
  std::vector<InitialProfile> profiles{spec.phi};
  for (int i = 0; i < 5; ++i) {
    profiles.push_back(InitialProfile::random(seed * 2000 + static_cast<std::uint64_t>(i), 1.2 + 0.2 * i));
  }
  double first = 0.0, rebased = 0.0;
  json runs = json::array();
  for (const auto& p : profiles) {
    spec.phi = p;
    const RebasedSandwich rs = rebased_sandwich(spec, spec.initial_function(), 5, d.dtau);
    first = std::max(first, rs.intervals.front().violation);
    rebased = std::max(rebased, rs.max_violation);
    json intervals = json::array();
    for (const auto& iv : rs.intervals) {
      intervals.push_back({{"index", iv.index}, {"t_begin", iv.t_begin}, {"t_end", iv.t_end},
                           {"K", iv.K}, {"K_next", iv.K_next}, {"violation", iv.violation}});
    }
    runs.push_back({{"phi_seed", p.seed}, {"linf_phi", spec.initial_function().linf_sup()},
                    {"intervals", intervals}});
  }
  r.pass = first <= 1e-6 && rebased <= 1e-6;
  r.metrics = {{"first_interval_violation", first}, {"rebased_violation", rebased}, {"tolerance", 1e-6}};
  if (dir) write_json({{"schema_version", 1}, {"runs", runs}}, *dir / "sandwich.json");
  return r;
}

CheckResult check_constants(const Discretization& d, const std::filesystem::path* dir) {
  CheckResult r{6, "conditions and constants", false, {}};
  const ProblemSpec spec = with_disc(ProblemSpec::canonical(), d);
  const DissipativityReport rep = build_dissipativity_report(spec);
  const double omega = kPi * kPi + 1.0;
  const bool omega_ok = std::abs(rep.conditions.omega - omega) <= 4.0 * std::numeric_limits<double>::epsilon() * omega;
  const double c1 = std::max(derive_chafee_constants(spec.c0, spec.M / spec.lambda),
                             derive_chafee_constants(spec.c0, spec.m / spec.lambda));
  const SCheck s = check_S(spec, spec.c0, c1);
  const double d_expected = std::exp(-omega * spec.rho / spec.m) + spec.gamma / (omega * spec.m);
  const bool d_ok = std::abs(rep.conditions.d_lhs - d_expected) <= 1e-4 * d_expected;
  bool k_ok = false;
  if (rep.k_abs) {
    const double K = *rep.k_abs;
    const double rhs = c1 / omega + K * (std::exp(-omega * spec.rho / spec.M) + spec.gamma / (spec.m * omega));
    k_ok = rhs < K;
  }
  r.pass = omega_ok && s.worst_margin <= 1e-9 && d_ok && k_ok;
  r.metrics = {{"omega", rep.conditions.omega},
               {"c1", c1},
               {"s_worst_margin", s.worst_margin},
               {"d_lhs", rep.conditions.d_lhs},
               {"k_abs", rep.k_abs ? json(*rep.k_abs) : json(nullptr)}};
  if (dir) {
    write_json(dissipativity_json(rep), *dir / "dissipativity.json");
    if (rep.theta) write_theta_csv(*rep.theta, *dir / "theta.csv");
  }
  return r;
}

double theta_error(double c0, double c1s, int n) {
  const Grid g(n);
  const GridFunction th = solve_theta(c0, c1s, g);
  double err = 0.0;
  for (std::size_t i = 0; i < th.size(); ++i) err = std::max(err, std::abs(th[i] - theta_closed_form(c0, c1s, g.x(i))));
  return err;
}

CheckResult check_theta(const Discretization& d) {
  CheckResult r{7, "theta", false, {}};
  const ProblemSpec spec = with_disc(ProblemSpec::canonical(), d);
  const DissipativityReport rep = build_dissipativity_report(spec);
  const double c1s = rep.c1_star_worst;
  const int n = d.n_interior;
  const double e_mid = theta_error(spec.c0, c1s, n);
  const double e_lo = theta_error(spec.c0, c1s, (n + 1) / 2 - 1);
  const double e_hi = theta_error(spec.c0, c1s, 2 * (n + 1) - 1);
  double spot_err = std::numeric_limits<double>::infinity();
  if (n % 2 == 1) {
    const GridFunction th0 = solve_theta(0.0, c1s, Grid(n));
    spot_err = std::abs(th0[static_cast<std::size_t>(n / 2)] - c1s / 8.0);
  }
  r.pass = e_mid <= 1e-4 && spot_err <= 1e-12 * c1s && e_lo / e_mid >= 3.5 && e_mid / e_hi >= 3.5;
  r.metrics = {{"c1_star", c1s},
               {"max_error", e_mid},
               {"errors", {e_lo, e_mid, e_hi}},
               {"ratios", {num(e_lo / e_mid), num(e_mid / e_hi)}},
               {"c0_zero_midpoint_error", num(spot_err)}};
  return r;
}

CheckResult check_containment(const Discretization& d, std::uint64_t seed, int threads,
                              const std::filesystem::path* dir) {
  CheckResult r{8, "containment", false, {}};
  ProblemSpec spec = with_disc(ProblemSpec::canonical(), d);
  const DissipativityReport rep = build_dissipativity_report(spec);
  if (!rep.theta || !rep.k_abs) {
    r.metrics = {{"error", "no absorbing radius"}};
    return r;
  }
  const GridFunction& theta = *rep.theta;
  const double T = 4.0;
  std::vector<InitialFunction> inside, outside;
  for (int i = 0; i < 8; ++i) {
    const auto prof = InitialProfile::random(seed * 3000 + static_cast<std::uint64_t>(i), 1.0);
    inside.push_back(inside_envelope_member(prof, theta, spec.rho, spec.dsigma(), 0.9));
    const auto big = InitialProfile::random(seed * 4000 + static_cast<std::uint64_t>(i), 1.5 + 0.2 * i);
    outside.push_back(InitialFunction::sample(big, spec.grid(), spec.rho, spec.dsigma()));
  }
  const BundleOptions bo{5, threads};
  const BundleRun in_run = run_bundle(inside, spec, T, 0.05, bo);
  const BundleRun out_run = run_bundle(outside, spec, T, 0.05, bo);
  const ContainmentReport in_rep = containment_check(in_run, theta, 0.2);
  const auto t_abs = absorption_time(out_run, *rep.k_abs, NormKind::linf);
  const ContainmentReport out_rep = containment_check(out_run, theta, 0.2, t_abs);
  const bool in_ok = in_rep.violation_all <= 1e-6;
  const bool out_ok = t_abs && out_rep.violation_after <= 1e-6 && out_rep.violation_window <= 1e-6;
  r.pass = in_ok && out_ok;
  r.metrics = {{"inside", containment_json(in_rep)},
               {"outside", containment_json(out_rep)},
               {"absorption_time", t_abs ? json(*t_abs) : json(nullptr)},
               {"k_abs", *rep.k_abs},
               {"tolerance", 1e-6}};
  if (dir) {
    write_trajectory_csv(in_run.member_trajectory(0), *dir / "bundle_inside_member0.csv");
    write_trajectory_csv(out_run.member_trajectory(0), *dir / "bundle_outside_member0.csv");
    write_json({{"schema_version", 1}, {"spec_hash", spec_hash(spec)}, {"metrics", r.metrics}},
               *dir / "containment.json");
  }
  return r;
}

CheckResult check_omega_limit(const Discretization& d, std::uint64_t seed, int threads,
                              const std::filesystem::path* dir) {
  CheckResult r{9, "omega-limit", false, {}};
  ProblemSpec spec = with_disc(ProblemSpec::canonical(), d);
  spec.f = Reaction::linear(-1.0);
  spec.gamma = 0.1;
  spec.c0 = 0.5;
  const DissipativityReport rep = build_dissipativity_report(spec);
  std::vector<InitialFunction> members;
  for (int i = 0; i < 8; ++i) {
    const auto prof = InitialProfile::random(seed * 5000 + static_cast<std::uint64_t>(i), 1.0 + i / 7.0);
    members.push_back(InitialFunction::sample(prof, spec.grid(), spec.rho, spec.dsigma()));
  }
  const BundleRun run = run_bundle(members, spec, 5.0, 0.05, BundleOptions{5, threads});
  const auto omega = omega_limit_estimate(run, 0.2);
  double cluster_norm = 0.0;
  for (const auto& w : omega) cluster_norm = std::max(cluster_norm, norms(w).l2);
  const double radius = rep.k_abs.value_or(0.0) + 1e-4;
  const auto t_abs = absorption_time(run, radius, NormKind::linf);
  const Grid g = spec.grid();
  const std::vector<GridFunction> zero{GridFunction(g)};
  const auto series = distance_series(run, zero, NormKind::l2);
  double worst_increase = 0.0;
  for (std::size_t j = 1; j < series.size(); ++j) {
    if (t_abs && run.snapshots[j - 1].stamp >= *t_abs) {
      worst_increase = std::max(worst_increase, series[j] - series[j - 1]);
    }
  }
  r.pass = rep.conditions.d_holds && omega.size() == 1 && cluster_norm <= 1e-4 && t_abs &&
           worst_increase <= 1e-4;
  r.metrics = {{"d_holds", rep.conditions.d_holds},
               {"clusters", omega.size()},
               {"cluster_l2", cluster_norm},
               {"absorption_time", t_abs ? json(*t_abs) : json(nullptr)},
               {"absorption_radius", radius},
               {"max_increase_after_absorption", worst_increase}};
  if (dir) {
    json dist = json::array();
    for (std::size_t j = 0; j < series.size(); ++j) dist.push_back({run.snapshots[j].stamp, series[j]});
    write_json({{"schema_version", 1}, {"spec_hash", spec_hash(spec)}, {"metrics", r.metrics},
                {"distance_to_zero", dist}},
               *dir / "omega_limit.json");
  }
  return r;
}

}  // namespace

DelayModeReference::DelayModeReference(double mu, double g, double rho, double c0, double T, double h)
    : mu_(mu), g_(g), rho_(rho), c0_(c0), h_(h) {
  const long lag = std::lround(rho / h);
  if (lag < 1 || std::abs(lag * h - rho) > 1e-12 * rho) throw ParameterError("rho / h must be an integer");
  const long n = static_cast<long>(std::ceil(T / h - 1e-9));
  c_.assign(static_cast<std::size_t>(n + 1), 0.0);
  dc_.assign(c_.size(), 0.0);
  c_[0] = c0;
  // Delayed values: c0 on [-ρ, 0]; afterwards the Hermite interpolant of the computed steps.
  auto delayed = [&](double tau) { return tau <= 0.0 ? c0_ : (*this)(tau); };
  auto rate = [&](double tau, double c) { return -mu_ * c + g_ * delayed(tau - rho_); };
  for (long k = 0; k < n; ++k) {
    const double t = k * h;
    const double y = c_[static_cast<std::size_t>(k)];
    dc_[static_cast<std::size_t>(k)] = rate(t, y);
    const double k1 = dc_[static_cast<std::size_t>(k)];
    const double k2 = rate(t + h / 2, y + h / 2 * k1);
    const double k3 = rate(t + h / 2, y + h / 2 * k2);
    const double k4 = rate(t + h, y + h * k3);
    c_[static_cast<std::size_t>(k + 1)] = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  dc_[static_cast<std::size_t>(n)] = rate(n * h, c_[static_cast<std::size_t>(n)]);
}

double DelayModeReference::operator()(double tau) const {
  if (tau <= 0.0) return c0_;
  const double pos = tau / h_;
  auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= c_.size()) {
    if (pos > static_cast<double>(c_.size() - 1) + 1e-9) throw RangeError("delay mode reference", tau, 0.0, h_ * (c_.size() - 1));
    k = c_.size() - 2;
  }
  const double s = pos - static_cast<double>(k);
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * c_[k] + h10 * h_ * dc_[k] + h01 * c_[k + 1] + h11 * h_ * dc_[k + 1];
}

bool SelftestReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

json SelftestReport::to_json() const {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"metrics", c.metrics}});
  return {{"all_pass", all_pass()}, {"checks", arr}};
}

SelftestReport run_selftest(const SelftestOptions& opts) {
  const Discretization& d = opts.disc;
  const std::filesystem::path* dir = opts.out_dir ? &*opts.out_dir : nullptr;
  if (dir) ensure_directory(*dir);
  SelftestReport rep;
  rep.checks.push_back(check_time_change(d, dir));
  rep.checks.push_back(check_delay_window(d, opts.seed));
  rep.checks.push_back(check_heat(d, dir));
  rep.checks.push_back(check_delay_mode(d));
  rep.checks.push_back(check_sandwich_suite(d, opts.seed, dir));
  rep.checks.push_back(check_constants(d, dir));
  rep.checks.push_back(check_theta(d));
  rep.checks.push_back(check_containment(d, opts.seed, opts.threads, dir));
  rep.checks.push_back(check_omega_limit(d, opts.seed, opts.threads, dir));
  return rep;
}

}  // namespace nlds
