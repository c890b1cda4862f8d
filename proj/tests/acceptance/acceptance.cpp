// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "nlds/attractor.hpp"
#include "nlds/comparison.hpp"
#include "nlds/dissipativity.hpp"
#include "nlds/integrator.hpp"
#include "nlds/selftest.hpp"

using namespace nlds;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ProblemSpec canonical(int n = 255, double dtau = 1e-4) {
  ProblemSpec s = ProblemSpec::canonical();
  s.disc.n_interior = n;
  s.disc.dtau = s.disc.dt = dtau;
  return s;
}

/// Scalar DDE c' = -μ c + g c(τ - ρ), c ≡ 1 on [-ρ, 0], by an exponential
/// integrator with the delayed term linear on each step (grid-aligned lag).
std::vector<double> dde_reference(double mu, double g, double rho, double T, double h) {
  const long lag = std::lround(rho / h);
  const long n = std::lround(T / h);
  std::vector<double> c(static_cast<std::size_t>(n + 1));
  c[0] = 1.0;
  const double E = std::exp(-mu * h);
  const double w1 = 1.0 / mu - (1.0 - E) / (mu * mu * h);
  const double w0 = (1.0 - E) / mu - w1;
  auto past = [&](long k) { return k <= 0 ? 1.0 : c[static_cast<std::size_t>(k)]; };
  for (long k = 0; k < n; ++k) {
    c[static_cast<std::size_t>(k + 1)] = E * c[static_cast<std::size_t>(k)] + g * (w0 * past(k - lag) + w1 * past(k + 1 - lag));
  }
  return c;
}

Outcome criterion1() {
  std::vector<double> err;
  for (int level = 0; level < 3; ++level) {
    const ProblemSpec s = canonical((128 << level) - 1, 2e-4 / (1 << level));
    err.push_back(compare_formulations(s, s.initial_function(), 2.0, 0.01).sup_l2);
  }
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];
  return {err[1] <= 5e-3 && r1 >= 1.8 && r2 >= 1.8,
          fmt("sup l2 error %.3e at dx=1/256 (tol 5e-3); ratios %.3f, %.3f (>= 1.8)", err[1], r1, r2)};
}

Outcome criterion2() {
  ProblemSpec s = canonical();
  const double ds = 1e-5;
  double lo = 1e9, hi = -1e9, gap = 0.0;
  bool ok = true;
  for (int i = 0; i < 20; ++i) {
    s.phi = InitialProfile::random(700 + i, 0.2 + 0.15 * i);
    const InitialFunction phi = s.initial_function();
    const Alpha0 a0 = compute_alpha0(phi, s, ds);
    const double len = -a0.t_start;
    ok = ok && len >= 0.5 - ds * s.M && len <= 1.0 + ds * s.M;
    lo = std::min(lo, len);
    hi = std::max(hi, len);
    // Oracle: Simpson's rule for ∫ 1/a(l(φ(σ))) dσ over the σ-samples.
    const auto& st = phi.states();
    const std::size_t n = st.size() - 1;
    double acc = 0.0;
    const double hs = phi.rho() / static_cast<double>(n);
    for (std::size_t k = 0; k <= n; ++k) {
      double l2 = 0.0;
      for (std::size_t x = 0; x < st[k].size(); ++x) l2 += st[k][x] * st[k][x];
      l2 *= st[k].grid().dx();
      const double a = std::clamp(1.0 + 1.0 / (1.0 + l2), s.m, s.M);
      const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      acc += w / a;
    }
    acc *= hs / 3.0;
    if (n % 2 == 0) gap = std::max(gap, std::abs(len - acc));
  }
  return {ok && gap <= 1e-4,
          fmt("-t_start in [%.5f, %.5f] within [0.5, 1.0] +- ds*M; |len - quadrature| <= %.2e", lo, hi, gap)};
}

Outcome criterion3() {
  ProblemSpec s = canonical();
  s.a = Diffusion::constant(1.0);
  s.m = s.M = 1.0;
  s.f = Reaction::zero();
  s.gamma = 0.0;
  s.phi = InitialProfile::sine(1.0);
  const Trajectory t = solve_quasilinear(s, 0.1, 1e-4, {1000});
  const double got = t.diagnostics().back().linf;
  const double exact = std::exp(-kPi * kPi * 0.1);
  const double rel = std::abs(got - exact) / exact;
  return {rel <= 1e-3 && std::abs(t.back_stamp() - 0.1) < 1e-12,
          fmt("||w(0.1)||_inf = %.6f vs %.6f, relative error %.2e (tol 1e-3)", got, exact, rel)};
}

Outcome criterion4() {
  ProblemSpec s = canonical();
  s.a = Diffusion::constant(1.0);
  s.m = s.M = 1.0;
  s.f = Reaction::zero();
  s.gamma = 1.0;
  s.rho = 1.0;
  s.phi = InitialProfile::sine(1.0);
  const double h_ref = 1e-5;
  const auto ref = dde_reference(kPi * kPi, 1.0, 1.0, 3.0, h_ref);
  const long per = std::lround(s.disc.dtau / h_ref);
  QuasilinearStepper st(s, s.initial_function(), s.disc.dtau);
  const Grid g = s.grid();
  double worst = 0.0;
  for (long k = 1; k <= 30000; ++k) {
    st.step();
    const double c = ref[static_cast<std::size_t>(k * per)];
    for (std::size_t i = 0; i < st.state().size(); ++i) {
      worst = std::max(worst, std::abs(st.state()[i] - c * std::sin(kPi * g.x(static_cast<int>(i)))));
    }
  }
  return {worst <= 1e-3, fmt("l_inf mismatch on [0, 3] = %.3e (tol 1e-3)", worst)};
}

Outcome criterion5() {
  ProblemSpec s = canonical();
  std::vector<InitialProfile> profiles{s.phi};
  for (int i = 0; i < 5; ++i) profiles.push_back(InitialProfile::random(900 + i, 1.2 + 0.2 * i));
  double first = 0.0, rebased = 0.0, first_direct = 0.0;
  for (const auto& p : profiles) {
    s.phi = p;
    const InitialFunction phi = s.initial_function();
    // [0, α⁻¹(ρ)] directly against envelopes started from ±sup|φ|.
    const SemilinearRun mid = solve_semilinear(s, phi, s.rho * s.M + 1.0, s.disc.dt, {10}, s.rho);
    const EnvelopePair env = solve_envelope(s, phi.linf_sup(), mid.trajectory.back_stamp(), s.disc.dt, {10});
    first_direct = std::max(first_direct, check_sandwich(env.lower, mid.trajectory, env.upper));
    const RebasedSandwich rs = rebased_sandwich(s, phi, 5, s.disc.dt);
    first = std::max(first, rs.intervals.front().violation);
    rebased = std::max(rebased, rs.max_violation);
  }
  return {first_direct <= 1e-6 && first <= 1e-6 && rebased <= 1e-6,
          fmt("violation on [0, a^-1(rho)] %.2e (stepwise %.2e); re-based on [0, 5 rho] %.2e (tol 1e-6)",
              first_direct, first, rebased)};
}

Outcome criterion6() {
  const ProblemSpec s = canonical();
  const DissipativityReport rep = build_dissipativity_report(s);
  const double omega = kPi * kPi + 1.0;
  const bool omega_ok = rep.conditions.omega == omega;
  const double c1 = std::max(derive_chafee_constants(1.0, 1.0), derive_chafee_constants(1.0, 2.0));
  const double c1_oracle = 2.0 / (3.0 * std::sqrt(3.0)) * std::pow(1.0 + 2.0, 1.5);
  const SCheck sc = check_S(s, 1.0, c1);
  const double d_formula = std::exp(-omega) + 1.0 / omega;
  const bool d_ok = std::abs(rep.conditions.d_lhs - d_formula) <= 1e-4 * d_formula &&
                    std::abs(rep.conditions.d_lhs - 0.0920) <= 1e-4;
  bool k_ok = false;
  double K = std::numeric_limits<double>::quiet_NaN();
  if (rep.k_abs) {
    K = *rep.k_abs;
    k_ok = c1 / omega + K * (std::exp(-omega / 2.0) + 1.0 / omega) < K;
  }
  const bool ok = omega_ok && std::abs(c1 - c1_oracle) <= 1e-12 && sc.holds && sc.worst_margin <= 1e-9 && d_ok && k_ok;
  return {ok, fmt("omega = %.10f; C1 = %.12f (oracle %.12f), S margin %.1e; d = %.6f; K_abs = %.6f re-substitutes %s",
                  rep.conditions.omega, c1, c1_oracle, sc.worst_margin, rep.conditions.d_lhs, K,
                  k_ok ? "strictly" : "NOT strictly")};
}

double theta_oracle(double c0, double c, double x) {
  if (c0 == 0.0) return c * x * (1.0 - x) / 2.0;
  const double r = std::sqrt(c0);
  return c / c0 * (1.0 - std::cosh(r * (x - 0.5)) / std::cosh(r / 2.0));
}

double theta_err(double c0, double c, int n) {
  const Grid g(n);
  const GridFunction th = solve_theta(c0, c, g);
  double e = 0.0;
  for (std::size_t i = 0; i < th.size(); ++i) e = std::max(e, std::abs(th[i] - theta_oracle(c0, c, g.x(static_cast<int>(i)))));
  return e;
}

Outcome criterion7() {
  const DissipativityReport rep = build_dissipativity_report(canonical());
  const double c = rep.c1_star_worst;
  const double e127 = theta_err(1.0, c, 127), e255 = theta_err(1.0, c, 255), e511 = theta_err(1.0, c, 511);
  const GridFunction flat = solve_theta(0.0, c, Grid(255));
  const double spot = std::abs(flat[127] - c / 8.0);
  const bool ok = e255 <= 1e-4 && spot <= 1e-13 * c && e127 / e255 >= 3.5 && e255 / e511 >= 3.5;
  return {ok, fmt("max error %.2e at n=255 (tol 1e-4); C0=0 midpoint error %.1e; ratios %.3f, %.3f (>= 3.5)",
                  e255, spot, e127 / e255, e255 / e511)};
}

double envelope_excess(const MemberState& m, const GridFunction& theta) {
  double worst = -std::numeric_limits<double>::infinity();
  auto scan = [&](const GridFunction& u) {
    for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u[i]) - theta[i]);
  };
  scan(m.endpoint);
  for (const auto& s : m.segment) scan(s);
  return worst;
}

Outcome criterion8() {
  const ProblemSpec s = canonical();
  const DissipativityReport rep = build_dissipativity_report(s);
  if (!rep.theta || !rep.k_abs) return {false, "no absorbing radius"};
  const GridFunction& theta = *rep.theta;
  std::vector<InitialFunction> inside, outside;
  for (int i = 0; i < 8; ++i) {
    inside.push_back(inside_envelope_member(InitialProfile::random(40 + i, 1.0), theta, s.rho, s.dsigma(), 0.95));
    outside.push_back(InitialFunction::sample(InitialProfile::random(60 + i, 1.0 + 0.25 * i), s.grid(), s.rho, s.dsigma()));
  }
  const BundleRun in_run = run_bundle(inside, s, 4.0, 0.02, {5, 0});
  const BundleRun out_run = run_bundle(outside, s, 4.0, 0.02, {5, 0});
  double in_worst = -1.0;
  for (const auto& snap : in_run.snapshots) {
    for (const auto& m : snap.members) in_worst = std::max(in_worst, envelope_excess(m, theta));
  }
  // Absorption: first snapshot after which every endpoint stays in the K_abs ball.
  std::optional<double> t_abs;
  for (std::size_t j = out_run.snapshots.size(); j-- > 0;) {
    bool all_in = true;
    for (const auto& m : out_run.snapshots[j].members) all_in = all_in && norms(m.endpoint).linf <= *rep.k_abs;
    if (!all_in) break;
    t_abs = out_run.snapshots[j].stamp;
  }
  const std::size_t window = out_run.snapshots.size() - out_run.snapshots.size() / 5;
  double out_worst = -1.0;
  for (std::size_t j = window; j < out_run.snapshots.size(); ++j) {
    if (t_abs && out_run.snapshots[j].stamp - s.rho >= *t_abs) {
      for (const auto& m : out_run.snapshots[j].members) out_worst = std::max(out_worst, envelope_excess(m, theta));
    }
  }
  const bool ok = in_worst <= 1e-6 && t_abs && out_worst <= 1e-6 && t_abs.value() <= out_run.snapshots[window].stamp - s.rho;
  return {ok, fmt("inside: max(|u| - theta) = %.3e; outside: absorbed at %.2f, trailing-window excess %.3e (tol 1e-6)",
                  in_worst, t_abs.value_or(-1.0), out_worst)};
}

Outcome criterion9() {
  ProblemSpec s = canonical();
  s.f = Reaction::linear(-1.0);
  s.gamma = 0.1;
  s.c0 = 0.5;
  const DCheck d = check_D(s, s.c0);
  std::vector<InitialFunction> members;
  for (int i = 0; i < 8; ++i) members.push_back(InitialFunction::sample(InitialProfile::random(80 + i, 1.0 + 0.2 * i), s.grid(), s.rho, s.dsigma()));
  const BundleRun run = run_bundle(members, s, 5.0, 0.05, {2, 0});
  const auto omega = omega_limit_estimate(run, 0.2);
  double cluster = 0.0;
  for (const auto& w : omega) cluster = std::max(cluster, norms(w).l2);
  // dist_H(G(t, B), {0}) = max over members of ‖u‖₂.
  std::vector<double> dist;
  for (const auto& snap : run.snapshots) {
    double mx = 0.0;
    for (const auto& m : snap.members) mx = std::max(mx, norms(m.endpoint).l2);
    dist.push_back(mx);
  }
  const auto t_abs = absorption_time(run, 1e-4, NormKind::linf);
  double rise = 0.0;
  for (std::size_t j = 1; j < dist.size(); ++j) {
    if (t_abs && run.snapshots[j - 1].stamp >= *t_abs) rise = std::max(rise, dist[j] - dist[j - 1]);
  }
  const bool ok = d.d_holds && omega.size() == 1 && cluster <= 1e-4 && t_abs && rise <= 1e-4;
  return {ok, fmt("(D) %s; %zu cluster(s), distance to 0 = %.2e; absorbed at %.2f; max increase afterwards %.1e",
                  d.d_holds ? "holds" : "fails", omega.size(), cluster, t_abs.value_or(-1.0), rise)};
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), a));
  }
  std::size_t count_b = 0;
  for (const auto& e : fs::recursive_directory_iterator(b)) count_b += e.is_regular_file();
  if (files.empty() || files.size() != count_b) {
    why = "file sets differ";
    return false;
  }
  for (const auto& f : files) {
    std::ifstream ia(a / f, std::ios::binary), ib(b / f, std::ios::binary);
    const std::string sa{std::istreambuf_iterator<char>(ia), {}}, sb{std::istreambuf_iterator<char>(ib), {}};
    if (sa != sb) {
      why = f.string() + " differs";
      return false;
    }
  }
  why = std::to_string(files.size()) + " artifacts byte-identical";
  return true;
}

Outcome criterion10() {
  const fs::path root = fs::temp_directory_path() / "nlds_acceptance_determinism";
  fs::remove_all(root);
  SelftestOptions o;
  o.seed = 2024;
  o.out_dir = root / "a";
  const bool pass_a = run_selftest(o).all_pass();
  o.out_dir = root / "b";
  const bool pass_b = run_selftest(o).all_pass();
  std::string why;
  const bool same = same_tree(root / "a", root / "b", why);
  fs::remove_all(root);
  return {same, why + (pass_a && pass_b ? "; selftest checks pass" : "; selftest checks FAIL")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"time-change equivalence", criterion1}, {"delay window", criterion2},
      {"exact heat reference", criterion3},    {"scalar delay mode reference", criterion4},
      {"sandwich", criterion5},                {"conditions and constants", criterion6},
      {"theta", criterion7},                   {"containment", criterion8},
      {"omega-limit", criterion9},             {"determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
