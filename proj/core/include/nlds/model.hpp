#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlds/grid.hpp"

namespace nlds {

/// The functional l feeding the nonlocal diffusion coefficient a(l(u)).
enum class Functional { l2_norm_sq, h10_norm, mean_integral };

double functional_value(Functional l, const GridFunction& u);

/// Scalar nonlinearity f (without the λ factor).
struct Reaction {
  enum class Kind { zero, linear, chafee_infante, polynomial };

  Kind kind = Kind::chafee_infante;
  /// linear: {c} for f(u) = c·u; polynomial: c_0, c_1, ... in ascending powers.
  std::vector<double> coeffs;

  static Reaction zero() { return {Kind::zero, {}}; }
  static Reaction linear(double c) { return {Kind::linear, {c}}; }
  static Reaction chafee_infante() { return {Kind::chafee_infante, {}}; }
  static Reaction polynomial(std::vector<double> c) { return {Kind::polynomial, std::move(c)}; }

  double operator()(double u) const noexcept;
};

/// Scalar coefficient function a; clamped to [m, M] wherever it is used.
struct Diffusion {
  enum class Kind {
    constant,  // a(s) = p0
    rational,  // a(s) = p0 + (p1 - p0) / (1 + |s|)
    affine,    // a(s) = p0 + p1·s
  };

  Kind kind = Kind::rational;
  double p0 = 1.0;
  double p1 = 2.0;

  static Diffusion constant(double c) { return {Kind::constant, c, 0.0}; }
  static Diffusion rational(double at_infinity, double at_zero) {
    return {Kind::rational, at_infinity, at_zero};
  }
  static Diffusion affine(double offset, double slope) { return {Kind::affine, offset, slope}; }

  double operator()(double s) const noexcept;
};

/// Bounded forcing h(τ, x).
struct Forcing {
  enum class Kind {
    none,
    constant,   // h = amplitude
    separable,  // h = amplitude·cos(frequency·τ)·sin(πx)
  };

  Kind kind = Kind::none;
  double amplitude = 0.0;
  double frequency = 0.0;

  static Forcing none() { return {}; }
  static Forcing constant(double c) { return {Kind::constant, c, 0.0}; }
  static Forcing separable(double amp, double freq) { return {Kind::separable, amp, freq}; }

  bool is_zero() const noexcept { return kind == Kind::none || amplitude == 0.0; }
  double operator()(double tau, double x) const noexcept;
};

/// One separable term A·(1 + slope·σ)·cos(frequency·σ + phase)·sin(kπx).
struct Mode {
  int k = 1;
  double amplitude = 1.0;
  double slope = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
};

/// Closed-form description of an initial history φ(σ, x), σ ∈ [-ρ, 0].
struct InitialProfile {
  std::vector<Mode> modes;
  /// When set, sampling rescales so that sup |φ| over the samples equals this value.
  std::optional<double> normalize_to;
  /// Provenance of randomly drawn profiles (0 when the modes were given directly).
  std::uint64_t seed = 0;

  static InitialProfile zero() { return {}; }
  static InitialProfile sine(double amplitude, int k = 1) { return {{Mode{k, amplitude}}, {}, 0}; }
  /// Random sine modes with random time dependence, normalized to sup |φ| = amplitude.
  static InitialProfile random(std::uint64_t seed, double amplitude, int n_modes = 4);

  double operator()(double sigma, double x) const noexcept;
};

/// Time-sampled initial history on a uniform σ-grid of [-ρ, 0], linear in time.
class InitialFunction {
 public:
  InitialFunction(std::vector<double> stamps, std::vector<GridFunction> states);

  static InitialFunction from_function(Grid grid, double rho, double dsigma,
                                       const std::function<double(double, double)>& fn);
  static InitialFunction sample(const InitialProfile& profile, Grid grid, double rho,
                                double dsigma);
  /// φ(σ) = state for all σ.
  static InitialFunction constant(const GridFunction& state, double rho, double dsigma);

  const Grid& grid() const noexcept { return states_.front().grid(); }
  double rho() const noexcept { return -stamps_.front(); }
  const std::vector<double>& stamps() const noexcept { return stamps_; }
  const std::vector<GridFunction>& states() const noexcept { return states_; }

  GridFunction eval(double sigma) const;
  const GridFunction& at_zero() const noexcept { return states_.back(); }
  /// sup over samples and nodes of |φ|.
  double linf_sup() const noexcept;

 private:
  std::vector<double> stamps_;
  std::vector<GridFunction> states_;
};

struct Discretization {
  int n_interior = 255;
  double dtau = 1e-4;
  double dt = 1e-4;
  double ds = 1e-5;
  /// σ-grid spacing of sampled initial functions; 0 means "use dtau".
  double dsigma = 0.0;
};

/// A complete problem instance plus its discretization.
struct ProblemSpec {
  double lambda = 1.0;
  double gamma = 1.0;
  double rho = 1.0;
  double m = 1.0;
  double M = 2.0;
  /// C₀ of the structural condition on f.
  double c0 = 1.0;
  Reaction f = Reaction::chafee_infante();
  Diffusion a = Diffusion::rational(1.0, 2.0);
  Functional l = Functional::l2_norm_sq;
  InitialProfile phi;
  Forcing h;
  Discretization disc;

  Grid grid() const { return Grid(disc.n_interior); }
  double dsigma() const noexcept { return disc.dsigma > 0.0 ? disc.dsigma : disc.dtau; }
  InitialFunction initial_function() const;

  /// f(u) = u - u³, λ = 1, a(s) = 1 + 1/(1+s), l = ‖·‖²_{L²}, γ = ρ = C₀ = 1.
  static ProblemSpec canonical();
};

/// Pointwise f(u_i); throws BlowUpError naming the first non-finite node.
GridFunction eval_f(const ProblemSpec& spec, const GridFunction& u);

/// clamp(a(l(u)), m, M).
double eval_diffusion(const ProblemSpec& spec, const GridFunction& u);

/// Empty when every invariant holds and a needs no clamping over the sampled l-range.
std::vector<std::string> validate_spec(const ProblemSpec& spec);

/// Minimal C₁ with u(u - u³) <= -ν C₀ u² + C₁|u| for all u; 0 when 1 + ν C₀ <= 0.
double derive_chafee_constants(double c0, double nu);

struct StructuralConstants {
  double c0 = 0.0;
  double c1 = 0.0;
  double nu_lo = 0.0;  // m / λ
  double nu_hi = 0.0;  // M / λ
};

/// C₁ for the spec's f at its C₀, valid for both ν values. Closed form for the
/// zero, linear and Chafee-Infante cases; a scan estimate over [-10³, 10³] for
/// polynomials. Empty when no finite C₁ exists.
std::optional<StructuralConstants> derive_structural_constants(const ProblemSpec& spec);

}  // namespace nlds
