#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlds/model.hpp"

namespace nlds {

struct SelftestOptions {
  /// Resolution (n_interior, dtau) of the suite; the physics of each check is fixed.
  Discretization disc;
  std::uint64_t seed = 1;
  int threads = 0;
  /// Artifacts are written here when set.
  std::optional<std::filesystem::path> out_dir;
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  nlohmann::json metrics;
};

struct SelftestReport {
  std::vector<CheckResult> checks;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

/// Runs the validation suite (equivalence of the two formulations, delay window,
/// heat and delay-mode references, sandwich, constants, θ, containment, ω-limit).
SelftestReport run_selftest(const SelftestOptions& opts);

/// Scalar reference for c'(τ) = -μ c(τ) + g c(τ - ρ), c ≡ c0 on [-ρ, 0]:
/// classical RK4 with step h (ρ/h integral) and cubic Hermite dense output.
class DelayModeReference {
 public:
  DelayModeReference(double mu, double g, double rho, double c0, double T, double h);
  double operator()(double tau) const;

 private:
  double mu_, g_, rho_, c0_, h_;
  std::vector<double> c_;
  std::vector<double> dc_;
};

}  // namespace nlds
