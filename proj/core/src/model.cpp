#include "nlds/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <random>
#include <sstream>

#include "nlds/error.hpp"

namespace nlds {

double functional_value(Functional l, const GridFunction& u) {
  switch (l) {
    case Functional::l2_norm_sq: {
      const double n = norms(u).l2;
      return n * n;
    }
    case Functional::h10_norm:
      return norms(u).h10;
    case Functional::mean_integral: {
      double s = 0.0;
      for (double v : u.values()) s += v;
      return s * u.grid().dx();
    }
  }
  return 0.0;
}

double Reaction::operator()(double u) const noexcept {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::linear: return coeffs.empty() ? 0.0 : coeffs[0] * u;
    case Kind::chafee_infante: return u - u * u * u;
    case Kind::polynomial: {
      double acc = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
      return acc;
    }
  }
  return 0.0;
}

double Diffusion::operator()(double s) const noexcept {
  switch (kind) {
    case Kind::constant: return p0;
    case Kind::rational: return p0 + (p1 - p0) / (1.0 + std::abs(s));
    case Kind::affine: return p0 + p1 * s;
  }
  return p0;
}

double Forcing::operator()(double tau, double x) const noexcept {
  switch (kind) {
    case Kind::none: return 0.0;
    case Kind::constant: return amplitude;
    case Kind::separable:
      return amplitude * std::cos(frequency * tau) * std::sin(std::numbers::pi * x);
  }
  return 0.0;
}

InitialProfile InitialProfile::random(std::uint64_t seed, double amplitude, int n_modes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  InitialProfile p;
  p.seed = seed;
  p.normalize_to = amplitude;
  for (int k = 1; k <= n_modes; ++k) {
    Mode mode;
    mode.k = k;
    mode.amplitude = unit(rng) / k;
    mode.slope = 0.5 * unit(rng);
    mode.frequency = 2.0 * std::numbers::pi * std::abs(unit(rng));
    mode.phase = std::numbers::pi * unit(rng);
    p.modes.push_back(mode);
  }
  return p;
}

double InitialProfile::operator()(double sigma, double x) const noexcept {
  double acc = 0.0;
  for (const Mode& mode : modes) {
    acc += mode.amplitude * (1.0 + mode.slope * sigma) *
           std::cos(mode.frequency * sigma + mode.phase) *
           std::sin(mode.k * std::numbers::pi * x);
  }
  return acc;
}

InitialFunction::InitialFunction(std::vector<double> stamps, std::vector<GridFunction> states)
    : stamps_(std::move(stamps)), states_(std::move(states)) {
  if (stamps_.size() < 2 || stamps_.size() != states_.size()) {
    throw ParameterError("initial function needs at least two samples, one state per stamp");
  }
  if (stamps_.back() != 0.0 || !(stamps_.front() < 0.0)) {
    throw ParameterError("initial function samples must cover [-rho, 0] inclusive");
  }
  for (std::size_t i = 1; i < stamps_.size(); ++i) {
    if (!(stamps_[i] > stamps_[i - 1])) {
      throw ParameterError("initial function stamps must be strictly increasing");
    }
    if (!(states_[i].grid() == states_.front().grid())) {
      throw ParameterError("initial function states live on different grids");
    }
  }
  for (const auto& s : states_) {
    if (!s.all_finite()) throw ParameterError("initial function contains non-finite values");
  }
}

namespace {

std::vector<double> sigma_grid(double rho, double dsigma) {
  if (!(rho > 0.0) || !(dsigma > 0.0)) {
    throw ParameterError("initial function needs rho > 0 and dsigma > 0");
  }
  const auto n = static_cast<std::size_t>(std::ceil(rho / dsigma - 1e-9));
  std::vector<double> stamps(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    stamps[j] = -rho + rho * static_cast<double>(j) / static_cast<double>(n);
  }
  stamps.back() = 0.0;
  return stamps;
}

}  // namespace

InitialFunction InitialFunction::from_function(Grid grid, double rho, double dsigma,
                                               const std::function<double(double, double)>& fn) {
  std::vector<double> stamps = sigma_grid(rho, dsigma);
  std::vector<GridFunction> states;
  states.reserve(stamps.size());
  for (double sigma : stamps) {
    states.push_back(GridFunction::sample(grid, [&](double x) { return fn(sigma, x); }));
  }
  return InitialFunction(std::move(stamps), std::move(states));
}

InitialFunction InitialFunction::sample(const InitialProfile& profile, Grid grid, double rho,
                                        double dsigma) {
  InitialFunction phi = from_function(grid, rho, dsigma, std::cref(profile));
  if (profile.normalize_to) {
    const double sup = phi.linf_sup();
    if (sup > 0.0) {
      const double scale = *profile.normalize_to / sup;
      for (auto& s : phi.states_) s *= scale;
    }
  }
  return phi;
}

InitialFunction InitialFunction::constant(const GridFunction& state, double rho, double dsigma) {
  std::vector<double> stamps = sigma_grid(rho, dsigma);
  std::vector<GridFunction> states(stamps.size(), state);
  return InitialFunction(std::move(stamps), std::move(states));
}

GridFunction InitialFunction::eval(double sigma) const {
  if (sigma < stamps_.front() || sigma > stamps_.back()) {
    throw RangeError("initial function queried outside [-rho, 0]", sigma, stamps_.front(),
                     stamps_.back());
  }
  const auto it = std::lower_bound(stamps_.begin(), stamps_.end(), sigma);
  const auto j = static_cast<std::size_t>(it - stamps_.begin());
  if (*it == sigma) return states_[j];
  const double w = (sigma - stamps_[j - 1]) / (stamps_[j] - stamps_[j - 1]);
  return lerp(states_[j - 1], states_[j], w);
}

double InitialFunction::linf_sup() const noexcept {
  double sup = 0.0;
  for (const auto& s : states_) sup = std::max(sup, norms(s).linf);
  return sup;
}

InitialFunction ProblemSpec::initial_function() const {
  return InitialFunction::sample(phi, grid(), rho, dsigma());
}

ProblemSpec ProblemSpec::canonical() {
  ProblemSpec spec;
  spec.phi.modes = {Mode{1, 1.0, 0.5}, Mode{2, 0.5, -1.0}};
  return spec;
}

GridFunction eval_f(const ProblemSpec& spec, const GridFunction& u) {
  GridFunction out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = spec.f(u[i]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "f produced a non-finite value at node " << i << " (x = " << u.grid().x(static_cast<int>(i))
          << ", u = " << u[i] << ", f(u) = " << v << ")";
      throw BlowUpError(msg.str(), std::numeric_limits<double>::quiet_NaN(), std::abs(u[i]));
    }
    out[i] = v;
  }
  return out;
}

double eval_diffusion(const ProblemSpec& spec, const GridFunction& u) {
  const double raw = spec.a(functional_value(spec.l, u));
  if (std::isnan(raw)) return spec.M;
  return std::clamp(raw, spec.m, spec.M);
}

std::vector<std::string> validate_spec(const ProblemSpec& spec) {
  std::vector<std::string> diags;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) diags.push_back(std::string(name) + " must be positive");
  };
  positive(spec.lambda, "lambda");
  positive(spec.rho, "rho");
  positive(spec.m, "m");
  if (!(spec.gamma >= 0.0) || !std::isfinite(spec.gamma)) {
    diags.emplace_back("gamma must be nonnegative");
  }
  if (!(spec.M >= spec.m) || !std::isfinite(spec.M)) diags.emplace_back("M must satisfy M >= m");
  if (spec.disc.n_interior < 2) diags.emplace_back("n_interior must be at least 2");
  positive(spec.disc.dtau, "dtau");
  positive(spec.disc.dt, "dt");
  positive(spec.disc.ds, "ds");
  if (spec.disc.dsigma < 0.0) diags.emplace_back("dsigma must be nonnegative (0 selects dtau)");
  if (spec.f.kind == Reaction::Kind::linear && spec.f.coeffs.size() != 1) {
    diags.emplace_back("linear f needs exactly one coefficient");
  }
  if (spec.f.kind == Reaction::Kind::polynomial && spec.f.coeffs.empty()) {
    diags.emplace_back("polynomial f needs at least one coefficient");
  }
  if (spec.phi.normalize_to && !(*spec.phi.normalize_to >= 0.0)) {
    diags.emplace_back("phi normalization must be nonnegative");
  }
  if (!diags.empty()) return diags;

  // a must stay inside [m, M] over the sampled l-range without clamping.
  std::vector<double> samples{0.0};
  for (double s = 1e-3; s <= 1e4; s *= 1.25) samples.push_back(s);
  if (spec.l == Functional::mean_integral) {
    const std::size_t n = samples.size();
    for (std::size_t i = 1; i < n; ++i) samples.push_back(-samples[i]);
  }
  if (spec.disc.n_interior <= 4096) {
    const InitialFunction phi = spec.initial_function();
    for (const auto& state : phi.states()) samples.push_back(functional_value(spec.l, state));
  }
  constexpr double slack = 1e-12;
  for (double s : samples) {
    const double v = spec.a(s);
    if (!std::isfinite(v) || v > spec.M + slack || v < spec.m - slack) {
      std::ostringstream msg;
      msg << "a(" << s << ") = " << v << " leaves [m, M] = [" << spec.m << ", " << spec.M
          << "]; clamping is active";
      diags.push_back(msg.str());
      break;
    }
  }
  return diags;
}

double derive_chafee_constants(double c0, double nu) {
  const double k = 1.0 + nu * c0;
  if (k <= 0.0) return 0.0;
  return 2.0 / (3.0 * std::sqrt(3.0)) * k * std::sqrt(k);
}

std::optional<StructuralConstants> derive_structural_constants(const ProblemSpec& spec) {
  StructuralConstants sc;
  sc.c0 = spec.c0;
  sc.nu_lo = spec.m / spec.lambda;
  sc.nu_hi = spec.M / spec.lambda;
  const double nus[2] = {sc.nu_lo, sc.nu_hi};
  switch (spec.f.kind) {
    case Reaction::Kind::chafee_infante:
      sc.c1 = std::max(derive_chafee_constants(spec.c0, nus[0]),
                       derive_chafee_constants(spec.c0, nus[1]));
      return sc;
    case Reaction::Kind::zero:
    case Reaction::Kind::linear: {
      const double c = spec.f.kind == Reaction::Kind::zero ? 0.0 : spec.f.coeffs.at(0);
      // u·f(u) + ν C₀ u² = (c + ν C₀) u² must be nonpositive.
      for (double nu : nus) {
        if (c + nu * spec.c0 > 0.0) return std::nullopt;
      }
      sc.c1 = 0.0;
      return sc;
    }
    case Reaction::Kind::polynomial: {
      // Sup over u != 0 of (u f(u) + ν C₀ u²)/|u| on [-10³, 10³]; rejects when the
      // maximum sits at the scan edge (growth, so no finite C₁).
      constexpr double edge = 1e3;
      constexpr int n = 200000;
      double best = 0.0;
      double witness = 0.0;
      for (double nu : nus) {
        for (int i = -n; i <= n; ++i) {
          if (i == 0) continue;
          const double u = edge * i / n;
          const double v = (u * spec.f(u) + nu * spec.c0 * u * u) / std::abs(u);
          if (v > best) {
            best = v;
            witness = u;
          }
        }
      }
      if (std::abs(witness) > 0.99 * edge) return std::nullopt;
      sc.c1 = best;
      return sc;
    }
  }
  return std::nullopt;
}

}  // namespace nlds
