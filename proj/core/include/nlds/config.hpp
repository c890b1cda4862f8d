#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlds/model.hpp"

namespace nlds {

inline constexpr int kSchemaVersion = 1;

/// Subcommand parameters.
struct RunParams {
  /// Horizon in τ for simulate / conditions runs.
  double T = 1.0;
  /// Horizon in τ for transform-check.
  double T_transform = 2.0;
  int record_every = 100;
  /// Envelope constant; sup |φ| when absent.
  std::optional<double> K;
  int n_intervals = 5;
  int bundle_size = 8;
  double bundle_amplitude = 1.0;
  /// Bundle members are drawn from seed + i when empty.
  std::vector<std::uint64_t> member_seeds;
  double snap_every = 0.05;
  int segment_samples = 5;
  double window_fraction = 0.2;
  double tolerance = 1e-6;
  int threads = 0;
};

struct RunConfig {
  ProblemSpec spec = ProblemSpec::canonical();
  RunParams params;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
};

/// Scalar flags that override the config file.
struct Overrides {
  std::optional<double> dx;
  /// Sets both dtau and dt.
  std::optional<double> dtau;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

nlohmann::json spec_to_json(const ProblemSpec& spec);
/// Missing fields keep the canonical values; type errors and unknown keys throw ValidationError.
ProblemSpec spec_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

/// Reads and parses a config file (IoError when unreadable, ValidationError when malformed).
RunConfig load_config(const std::filesystem::path& path);

void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Grid size for a spacing that divides [0, 1] evenly.
int interior_nodes_for_spacing(double dx);

/// validate_spec plus the parameter invariants.
std::vector<std::string> validate_config(const RunConfig& cfg);

/// FNV-1a hash of the canonical JSON dump of the spec, as 16 hex digits.
std::string spec_hash(const ProblemSpec& spec);

}  // namespace nlds
