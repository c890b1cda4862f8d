// nlds: batch driver for the delay problem with nonlocal diffusion.
//
//   nlds <subcommand> [--config FILE] [--out DIR] [--dx H] [--dtau DT] [--seed S]
//
// Exit status: 0 success, 1 usage, 2 invalid configuration (or a failed
// selftest check), 3 blow-up or I/O failure.

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "nlds/attractor.hpp"
#include "nlds/comparison.hpp"
#include "nlds/config.hpp"
#include "nlds/dissipativity.hpp"
#include "nlds/error.hpp"
#include "nlds/integrator.hpp"
#include "nlds/io.hpp"
#include "nlds/selftest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nlds;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kFailure = 3 };

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

struct Context {
  RunConfig cfg;
  fs::path out;
  std::vector<std::string> artifacts;

  void add(const std::string& name) { artifacts.push_back(name); }

  void manifest(const std::string& subcommand, json results) {
    write_json({{"schema_version", kSchemaVersion},
                {"subcommand", subcommand},
                {"spec_hash", spec_hash(cfg.spec)},
                {"config", config_to_json(cfg)},
                {"artifacts", artifacts},
                {"results", std::move(results)}},
               out / "manifest.json");
  }
};

int cmd_simulate(Context& c) {
  const auto& s = c.cfg.spec;
  const auto& p = c.cfg.params;
  const Trajectory traj = solve_quasilinear(s, p.T, s.disc.dtau, {p.record_every});
  write_trajectory_csv(traj, c.out / "trajectory.csv");
  write_json(trajectory_summary(traj), c.out / "summary.json");
  c.add("trajectory.csv");
  c.add("summary.json");
  c.manifest("simulate", {{"stamps", traj.size()}, {"final_linf", traj.diagnostics().back().linf}});
  return kOk;
}

int cmd_transform_check(Context& c) {
  const auto& s = c.cfg.spec;
  const InitialFunction phi = s.initial_function();
  const FormulationComparison cmp = compare_formulations(s, phi, c.cfg.params.T_transform);
  const Alpha0 a0 = compute_alpha0(phi, s, s.disc.ds);
  json report = {{"schema_version", kSchemaVersion},
                 {"T", c.cfg.params.T_transform},
                 {"sup_l2_difference", cmp.sup_l2},
                 {"t_end", cmp.clock.back().t},
                 {"tau_end", cmp.clock.back().alpha},
                 {"alpha0_t_start", a0.t_start}};
  write_json(report, c.out / "equivalence.json");
  write_timechange_csv(cmp.clock, c.out / "timechange.csv");
  c.add("equivalence.json");
  c.add("timechange.csv");
  c.manifest("transform-check", report);
  return kOk;
}

int cmd_delay_window(Context& c) {
  const auto& s = c.cfg.spec;
  const Alpha0 a0 = compute_alpha0(s.initial_function(), s, s.disc.ds);
  const double len = -a0.t_start;
  const double lo = s.rho / s.M;
  const double hi = s.rho / s.m;
  const double slack = s.disc.ds * s.M;
  json report = {{"schema_version", kSchemaVersion},
                 {"t_start", a0.t_start},
                 {"window_length", len},
                 {"bounds", {lo, hi}},
                 {"within_bounds", len >= lo - slack && len <= hi + slack},
                 {"reciprocal_integral", a0.reciprocal_integral},
                 {"ds", s.disc.ds}};
  write_json(report, c.out / "delay_window.json");
  write_timechange_csv(a0.map, c.out / "alpha0.csv");
  c.add("delay_window.json");
  c.add("alpha0.csv");
  c.manifest("delay-window", report);
  return kOk;
}

int cmd_envelope(Context& c) {
  const auto& s = c.cfg.spec;
  const auto& p = c.cfg.params;
  const InitialFunction phi = s.initial_function();
  const double K = p.K.value_or(phi.linf_sup());
  const SemilinearRun mid = solve_semilinear(s, phi, s.rho * s.M * 1.000001 + s.disc.dt, s.disc.dt,
                                             {p.record_every}, s.rho);
  const double T_first = mid.trajectory.back_stamp();
  const EnvelopePair env = solve_envelope(s, K, T_first, s.disc.dt, {p.record_every});
  const double first = check_sandwich(env.lower, mid.trajectory, env.upper);
  const RebasedSandwich rs = rebased_sandwich(s, phi, p.n_intervals, s.disc.dt);
  json intervals = json::array();
  for (const auto& iv : rs.intervals) {
    intervals.push_back({{"index", iv.index}, {"t_begin", iv.t_begin}, {"t_end", iv.t_end},
                         {"K", iv.K}, {"K_next", iv.K_next}, {"violation", iv.violation}});
  }
  json report = {{"schema_version", kSchemaVersion},
                 {"K", K},
                 {"first_interval_end", T_first},
                 {"first_interval_violation", first},
                 {"rebased_violation", rs.max_violation},
                 {"tolerance", p.tolerance},
                 {"holds", first <= p.tolerance && rs.max_violation <= p.tolerance},
                 {"intervals", intervals}};
  write_json(report, c.out / "envelope.json");
  write_trajectory_csv(env.lower, c.out / "envelope_lower.csv");
  write_trajectory_csv(env.upper, c.out / "envelope_upper.csv");
  write_trajectory_csv(mid.trajectory, c.out / "envelope_mid.csv");
  for (const char* f : {"envelope.json", "envelope_lower.csv", "envelope_upper.csv", "envelope_mid.csv"}) c.add(f);
  c.manifest("envelope", {{"first_interval_violation", first}, {"rebased_violation", rs.max_violation}});
  return kOk;
}

int cmd_conditions(Context& c) {
  const auto& s = c.cfg.spec;
  const DissipativityReport rep = build_dissipativity_report(s);
  json report = dissipativity_json(rep);
  if (rep.k_abs) {
    const GuardedRun run = solve_quasilinear_guarded(s, s.initial_function(), c.cfg.params.T,
                                                      s.disc.dtau, {c.cfg.params.record_every});
    const AbsorbingEntry entry = absorbing_norm_bounds(run.trajectory, *rep.k_abs);
    report["absorbing"] = {{"T", c.cfg.params.T},
                           {"t_entry_linf", opt(entry.t_entry_linf)},
                           {"t_entry_h10", opt(entry.t_entry_h10)},
                           {"k_h10", entry.k_h10},
                           {"blowup_stamp", opt(run.blowup_stamp)}};
  } else {
    report["absorbing"] = nullptr;
  }
  write_json(report, c.out / "conditions.json");
  c.add("conditions.json");
  if (rep.theta) {
    write_theta_csv(*rep.theta, c.out / "theta.csv");
    c.add("theta.csv");
  }
  c.manifest("conditions", {{"omega", rep.conditions.omega}, {"d_holds", rep.conditions.d_holds},
                            {"k_abs", opt(rep.k_abs)}});
  return kOk;
}

int cmd_attractor(Context& c) {
  const auto& s = c.cfg.spec;
  const auto& p = c.cfg.params;
  std::vector<InitialFunction> members;
  for (int i = 0; i < p.bundle_size; ++i) {
    const std::uint64_t seed = i < static_cast<int>(p.member_seeds.size())
                                   ? p.member_seeds[static_cast<std::size_t>(i)]
                                   : c.cfg.seed + static_cast<std::uint64_t>(i);
    members.push_back(InitialFunction::sample(InitialProfile::random(seed, p.bundle_amplitude), s.grid(),
                                              s.rho, s.dsigma()));
  }
  const BundleRun run = run_bundle(members, s, p.T, p.snap_every, {p.segment_samples, p.threads});
  const DissipativityReport rep = build_dissipativity_report(s);

  json results = {{"members", p.bundle_size}, {"snapshots", run.snapshots.size()}};
  json stamps = json::array();
  for (const auto& snap : run.snapshots) stamps.push_back(snap.stamp);
  results["stamps"] = stamps;
  std::optional<double> t_abs;
  if (rep.k_abs) t_abs = absorption_time(run, *rep.k_abs, NormKind::linf);
  results["k_abs"] = opt(rep.k_abs);
  results["absorption_time"] = opt(t_abs);
  const std::size_t window = run.snapshots.size() -
      static_cast<std::size_t>(std::ceil(p.window_fraction * static_cast<double>(run.snapshots.size())));
  if (run.snapshots.size() - window >= 10) {
    results["omega_clusters"] = omega_limit_estimate(run, p.window_fraction).size();
  } else {
    results["omega_clusters"] = nullptr;
  }
  if (rep.theta) {
    results["containment"] = containment_json(containment_check(run, *rep.theta, p.window_fraction, t_abs));
  } else {
    results["containment"] = nullptr;
  }
  for (int i = 0; i < p.bundle_size; ++i) {
    const std::string name = "member_" + std::to_string(i) + ".csv";
    write_trajectory_csv(run.member_trajectory(i), c.out / name);
    c.add(name);
  }
  c.manifest("attractor", results);
  return kOk;
}

int cmd_selftest(Context& c) {
  SelftestOptions o;
  o.disc = c.cfg.spec.disc;
  o.seed = c.cfg.seed;
  o.threads = c.cfg.params.threads;
  o.out_dir = c.out;
  const SelftestReport rep = run_selftest(o);
  for (const auto& chk : rep.checks) {
    std::cout << (chk.pass ? "PASS" : "FAIL") << "  " << chk.id << "  " << chk.name << '\n';
  }
  for (const char* f : {"canonical_trajectory.csv", "canonical_summary.json", "timechange.csv",
                        "heat_trajectory.csv", "heat_summary.json", "sandwich.json", "dissipativity.json",
                        "theta.csv", "bundle_inside_member0.csv", "bundle_outside_member0.csv",
                        "containment.json", "omega_limit.json"}) {
    c.add(f);
  }
  c.manifest("selftest", rep.to_json());
  return rep.all_pass() ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay reaction-diffusion with nonlocal diffusion: batch driver"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  std::string out;
  double dx = 0.0, dtau = 0.0;
  std::uint64_t seed = 0;

  const std::map<std::string, std::pair<std::string, std::function<int(Context&)>>> commands{
      {"simulate", {"quasilinear solve to T; trajectory CSV", cmd_simulate}},
      {"transform-check", {"compare the direct and time-rescaled solvers", cmd_transform_check}},
      {"delay-window", {"initial time change and its window bounds", cmd_delay_window}},
      {"envelope", {"sub/super-solution envelopes and the sandwich check", cmd_envelope}},
      {"conditions", {"structural and dissipativity conditions, K_abs, theta", cmd_conditions}},
      {"attractor", {"trajectory bundle, absorption, containment, omega-limit", cmd_attractor}},
      {"selftest", {"validation suite with artifacts", cmd_selftest}},
  };
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "artifact directory (overrides the config)");
    sub->add_option("--dx", dx, "grid spacing, 1/(n+1)");
    sub->add_option("--dtau", dtau, "time step (sets dtau and dt)");
    sub->add_option("--seed", seed, "random seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  if (chosen->count("--out")) ov.out_dir = out;
  if (chosen->count("--dx")) ov.dx = dx;
  if (chosen->count("--dtau")) ov.dtau = dtau;
  if (chosen->count("--seed")) ov.seed = seed;

  try {
    Context ctx;
    if (!config_path.empty()) ctx.cfg = load_config(config_path);
    apply_overrides(ctx.cfg, ov);
    if (auto diag = validate_config(ctx.cfg); !diag.empty()) throw ValidationError(std::move(diag));
    ctx.out = ctx.cfg.out_dir;
    ensure_directory(ctx.out);
    return commands.at(name).second(ctx);
  } catch (const ValidationError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "invalid configuration: " << d << '\n';
    return kInvalid;
  } catch (const ParameterError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kInvalid;
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << '\n';
    return kFailure;
  } catch (const IoError& e) {
    std::cerr << "I/O failure: " << e.what() << '\n';
    return kFailure;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kFailure;
  }
}
