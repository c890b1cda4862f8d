#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nlds/grid.hpp"
#include "nlds/model.hpp"
#include "nlds/trajectory.hpp"

namespace nlds {

/// How bundle elements are compared: by the segment endpoint w(τ), or by the
/// whole ρ-segment through the sup over its σ-samples.
enum class Granularity { endpoint, segment };

struct MemberState {
  int id = 0;
  GridFunction endpoint;
  /// w(τ + σ) at evenly spaced σ ∈ [-ρ, 0], oldest first; the last entry is the endpoint.
  std::vector<GridFunction> segment;
};

struct BundleSnapshot {
  double stamp = 0.0;
  std::vector<MemberState> members;
};

struct BundleRun {
  ProblemSpec spec;
  std::vector<InitialFunction> members;
  std::vector<BundleSnapshot> snapshots;

  /// Snapshot endpoints of one member as a trajectory.
  Trajectory member_trajectory(int id) const;
};

struct BundleOptions {
  int segment_samples = 5;
  /// Worker threads; 0 uses the hardware concurrency.
  int threads = 0;
};

/// Integrates every member with the quasilinear solver (h must vanish) and
/// snapshots all of them at the multiples of `snap_every` in [0, T].
BundleRun run_bundle(const std::vector<InitialFunction>& members, const ProblemSpec& spec,
                     double T, double snap_every, const BundleOptions& opts = {});

/// dist_H(A, B) = sup_{a ∈ A} min_{b ∈ B} ‖a - b‖.
double hausdorff_semidist(const BundleSnapshot& A, const BundleSnapshot& B, NormKind norm_kind,
                          Granularity granularity = Granularity::endpoint);
double hausdorff_semidist(std::span<const GridFunction> A, std::span<const GridFunction> B,
                          NormKind norm_kind);

/// Endpoints of one snapshot.
std::vector<GridFunction> endpoints(const BundleSnapshot& snap);

/// Greedy l2 clustering (radius eps_cluster) of every state in the trailing
/// `window_fraction` of snapshots. The window must hold at least 10 snapshots.
/// The default radius is 10·(dτ + dx²).
std::vector<GridFunction> omega_limit_estimate(const BundleRun& run, double window_fraction,
                                               std::optional<double> eps_cluster = std::nullopt);

/// Earliest snapshot stamp after which every member stays in the ball of the
/// given radius for all remaining snapshots.
std::optional<double> absorption_time(const BundleRun& run, double radius, NormKind norm_kind);

/// dist_H(G(t_j, B), target) for every snapshot.
std::vector<double> distance_series(const BundleRun& run, std::span<const GridFunction> target,
                                    NormKind norm_kind);

struct ContainmentReport {
  /// max of |u| - θ over all snapshots, members, segment samples and nodes.
  double violation_all = 0.0;
  /// Same over the trailing window.
  double violation_window = 0.0;
  /// Same over snapshots at or after `from_stamp`, counting only segment samples
  /// whose own stamp is at or after it (equals violation_all without one).
  double violation_after = 0.0;
  /// Same over the ω-limit estimate.
  double violation_omega = 0.0;
  std::size_t omega_clusters = 0;
};

ContainmentReport containment_check(const BundleRun& run, const GridFunction& theta,
                                    double window_fraction = 0.2,
                                    std::optional<double> from_stamp = std::nullopt);

/// Member whose profile is scaled pointwise into the envelope: φ = fraction·θ(x)·c(σ, x),
/// where c is `profile` normalized to sup |c| = 1.
InitialFunction inside_envelope_member(const InitialProfile& profile, const GridFunction& theta,
                                       double rho, double dsigma, double fraction);

}  // namespace nlds
