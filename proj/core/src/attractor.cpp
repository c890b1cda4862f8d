#include "nlds/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "nlds/error.hpp"
#include "nlds/integrator.hpp"

namespace nlds {

Trajectory BundleRun::member_trajectory(int id) const {
  Trajectory traj;
  for (const auto& snap : snapshots) {
    for (const auto& m : snap.members) {
      if (m.id == id) traj.push(snap.stamp, m.endpoint, 0.0);
    }
  }
  return traj;
}

namespace {

struct MemberOutcome {
  std::vector<MemberState> states;
  std::vector<double> stamps;
  std::string error;
  double error_stamp = 0.0;
  double error_linf = 0.0;
};

MemberOutcome integrate_member(const ProblemSpec& spec, const InitialFunction& phi, int id,
                               long n_steps, long snap_stride, int samples) {
  MemberOutcome out;
  try {
    QuasilinearStepper stepper(spec, phi, spec.disc.dtau);
    auto snap = [&] {
      MemberState s{id, stepper.state(),
                    stepper.history().segment(stepper.tau(), spec.rho, samples)};
      out.states.push_back(std::move(s));
      out.stamps.push_back(stepper.tau());
    };
    snap();
    for (long k = 1; k <= n_steps; ++k) {
      stepper.step();
      if (k % snap_stride == 0) snap();
    }
  } catch (const BlowUpError& e) {
    out.error = "member " + std::to_string(id) + ": " + e.what();
    out.error_stamp = e.stamp();
    out.error_linf = e.linf();
  }
  return out;
}

}  // namespace

BundleRun run_bundle(const std::vector<InitialFunction>& members, const ProblemSpec& spec,
                     double T, double snap_every, const BundleOptions& opts) {
  if (members.empty()) throw ParameterError("bundle needs at least one member");
  if (!spec.h.is_zero()) throw ParameterError("bundle runs require h == 0");
  if (!(T > 0.0) || !(snap_every > 0.0)) throw ParameterError("bundle needs T > 0 and snap_every > 0");
  const double dtau = spec.disc.dtau;
  const long stride = std::max(1L, std::lround(snap_every / dtau));
  const long n_steps = std::lround(T / dtau / static_cast<double>(stride)) * stride;

  std::vector<MemberOutcome> outcomes(members.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min<std::size_t>(members.size(), opts.threads > 0 ? static_cast<unsigned>(opts.threads) : hw);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < members.size(); i += workers) {
          outcomes[i] = integrate_member(spec, members[i], static_cast<int>(i), n_steps, stride,
                                         opts.segment_samples);
        }
      });
    }
  }

  for (const auto& o : outcomes) {
    if (!o.error.empty()) throw BlowUpError(o.error, o.error_stamp, o.error_linf);
  }

  BundleRun run{spec, members, {}};
  const std::size_t n_snap = outcomes.front().stamps.size();
  run.snapshots.resize(n_snap);
  for (std::size_t s = 0; s < n_snap; ++s) {
    run.snapshots[s].stamp = outcomes.front().stamps[s];
    for (auto& o : outcomes) run.snapshots[s].members.push_back(std::move(o.states[s]));
  }
  return run;
}

namespace {

double element_distance(const MemberState& a, const MemberState& b, NormKind kind,
                        Granularity granularity) {
  if (granularity == Granularity::endpoint) return norm(a.endpoint - b.endpoint, kind);
  if (a.segment.size() != b.segment.size()) {
    throw ParameterError("segment comparison needs equal sample counts");
  }
  double sup = 0.0;
  for (std::size_t j = 0; j < a.segment.size(); ++j) {
    sup = std::max(sup, norm(a.segment[j] - b.segment[j], kind));
  }
  return sup;
}

template <typename A, typename B, typename Dist>
double semidist(const A& a_set, const B& b_set, Dist dist) {
  if (b_set.empty()) throw ParameterError("Hausdorff semidistance to an empty set is undefined");
  double sup = 0.0;
  for (const auto& a : a_set) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : b_set) best = std::min(best, dist(a, b));
    sup = std::max(sup, best);
  }
  return sup;
}

}  // namespace

double hausdorff_semidist(const BundleSnapshot& A, const BundleSnapshot& B, NormKind norm_kind,
                          Granularity granularity) {
  return semidist(A.members, B.members, [&](const MemberState& a, const MemberState& b) {
    return element_distance(a, b, norm_kind, granularity);
  });
}

double hausdorff_semidist(std::span<const GridFunction> A, std::span<const GridFunction> B,
                          NormKind norm_kind) {
  return semidist(A, B, [&](const GridFunction& a, const GridFunction& b) {
    return norm(a - b, norm_kind);
  });
}

std::vector<GridFunction> endpoints(const BundleSnapshot& snap) {
  std::vector<GridFunction> out;
  out.reserve(snap.members.size());
  for (const auto& m : snap.members) out.push_back(m.endpoint);
  return out;
}

namespace {

std::size_t window_start(const BundleRun& run, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction < 1.0)) {
    throw ParameterError("window fraction must lie in (0, 1)");
  }
  const std::size_t n = run.snapshots.size();
  const auto count = static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(n)));
  return n - std::min(n, count);
}

}  // namespace

std::vector<GridFunction> omega_limit_estimate(const BundleRun& run, double window_fraction,
                                               std::optional<double> eps_cluster) {
  const std::size_t first = window_start(run, window_fraction);
  if (run.snapshots.size() - first < 10) {
    throw ParameterError("omega-limit window holds " +
                         std::to_string(run.snapshots.size() - first) +
                         " snapshots; at least 10 are required");
  }
  const double dx = run.spec.grid().dx();
  const double eps = eps_cluster.value_or(10.0 * (run.spec.disc.dtau + dx * dx));
  std::vector<GridFunction> reps;
  for (std::size_t s = first; s < run.snapshots.size(); ++s) {
    for (const auto& m : run.snapshots[s].members) {
      const bool near = std::any_of(reps.begin(), reps.end(), [&](const GridFunction& r) {
        return norms(m.endpoint - r).l2 < eps;
      });
      if (!near) reps.push_back(m.endpoint);
    }
  }
  return reps;
}

std::optional<double> absorption_time(const BundleRun& run, double radius, NormKind norm_kind) {
  std::optional<double> t;
  for (std::size_t s = run.snapshots.size(); s-- > 0;) {
    const auto& snap = run.snapshots[s];
    const bool inside = std::all_of(snap.members.begin(), snap.members.end(),
                                    [&](const MemberState& m) { return norm(m.endpoint, norm_kind) <= radius; });
    if (!inside) break;
    t = snap.stamp;
  }
  return t;
}

std::vector<double> distance_series(const BundleRun& run, std::span<const GridFunction> target,
                                    NormKind norm_kind) {
  std::vector<double> out;
  out.reserve(run.snapshots.size());
  for (const auto& snap : run.snapshots) {
    const auto pts = endpoints(snap);
    out.push_back(hausdorff_semidist(pts, target, norm_kind));
  }
  return out;
}

namespace {

double envelope_excess(const GridFunction& u, const GridFunction& theta) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u[i]) - theta[i]);
  return worst;
}

double snapshot_excess(const BundleSnapshot& snap, const GridFunction& theta) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& m : snap.members) {
    worst = std::max(worst, envelope_excess(m.endpoint, theta));
    for (const auto& s : m.segment) worst = std::max(worst, envelope_excess(s, theta));
  }
  return worst;
}

/// Like snapshot_excess, restricted to segment samples whose own stamp is >= from.
double excess_since(const BundleSnapshot& snap, const GridFunction& theta, double rho, double from) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& m : snap.members) {
    worst = std::max(worst, envelope_excess(m.endpoint, theta));
    const std::size_t n = m.segment.size();
    for (std::size_t j = 0; j < n; ++j) {
      const double tau = snap.stamp - rho + rho * static_cast<double>(j) / static_cast<double>(n - 1);
      if (tau >= from) worst = std::max(worst, envelope_excess(m.segment[j], theta));
    }
  }
  return worst;
}

}  // namespace

ContainmentReport containment_check(const BundleRun& run, const GridFunction& theta,
                                    double window_fraction, std::optional<double> from_stamp) {
  ContainmentReport rep;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  rep.violation_all = rep.violation_window = rep.violation_after = rep.violation_omega = neg_inf;
  const std::size_t first = window_start(run, window_fraction);
  for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
    const double e = snapshot_excess(run.snapshots[s], theta);
    rep.violation_all = std::max(rep.violation_all, e);
    if (s >= first) rep.violation_window = std::max(rep.violation_window, e);
    if (!from_stamp) {
      rep.violation_after = std::max(rep.violation_after, e);
    } else if (run.snapshots[s].stamp >= *from_stamp) {
      rep.violation_after = std::max(rep.violation_after, excess_since(run.snapshots[s], theta, run.spec.rho, *from_stamp));
    }
  }
  if (run.snapshots.size() - first >= 10) {
    const auto omega = omega_limit_estimate(run, window_fraction);
    rep.omega_clusters = omega.size();
    for (const auto& w : omega) rep.violation_omega = std::max(rep.violation_omega, envelope_excess(w, theta));
  }
  return rep;
}

InitialFunction inside_envelope_member(const InitialProfile& profile, const GridFunction& theta,
                                       double rho, double dsigma, double fraction) {
  InitialProfile unit = profile;
  unit.normalize_to = 1.0;
  InitialFunction c = InitialFunction::sample(unit, theta.grid(), rho, dsigma);
  std::vector<GridFunction> states;
  states.reserve(c.states().size());
  for (const auto& s : c.states()) {
    GridFunction v(theta.grid());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fraction * theta[i] * s[i];
    states.push_back(std::move(v));
  }
  return InitialFunction(c.stamps(), std::move(states));
}

}  // namespace nlds
