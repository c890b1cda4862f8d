#include "nlds/timechange.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlds/error.hpp"

namespace nlds {

namespace {

// Chord slopes are compared with a relative allowance for rounding in α.
constexpr double kSlopeSlack = 1e-9;

void check_bounds(double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw ParameterError("time change slope bounds must satisfy 0 < lo <= hi < inf");
  }
}

}  // namespace

TimeChange::TimeChange(Knot origin, double slope_lo, double slope_hi)
    : knots_{origin}, slope_lo_(slope_lo), slope_hi_(slope_hi) {
  check_bounds(slope_lo, slope_hi);
}

TimeChange::TimeChange(std::vector<Knot> knots, double slope_lo, double slope_hi)
    : knots_(std::move(knots)), slope_lo_(slope_lo), slope_hi_(slope_hi) {
  check_bounds(slope_lo, slope_hi);
  if (knots_.empty()) throw ParameterError("time change needs at least one knot");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const double dt = knots_[i].t - knots_[i - 1].t;
    if (!(dt > 0.0)) throw SequencingError("time change knots must have increasing t");
    const double slope = (knots_[i].alpha - knots_[i - 1].alpha) / dt;
    if (slope < slope_lo_ * (1.0 - kSlopeSlack) || slope > slope_hi_ * (1.0 + kSlopeSlack)) {
      throw ParameterError("time change chord slope " + std::to_string(slope) +
                           " outside its bounds");
    }
  }
}

void TimeChange::append(double t_new, double coeff) {
  const Knot& last = knots_.back();
  if (!(t_new > last.t)) {
    throw SequencingError("time change: t_new = " + std::to_string(t_new) +
                          " does not exceed the last knot t = " + std::to_string(last.t));
  }
  if (coeff < slope_lo_ * (1.0 - kSlopeSlack) || coeff > slope_hi_ * (1.0 + kSlopeSlack)) {
    throw ParameterError("time change slope " + std::to_string(coeff) + " outside [" +
                         std::to_string(slope_lo_) + ", " + std::to_string(slope_hi_) + "]");
  }
  knots_.push_back({t_new, last.alpha + coeff * (t_new - last.t)});
}

double TimeChange::invert(double tau) const {
  const double lo = knots_.front().alpha;
  const double hi = knots_.back().alpha;
  if (!(tau >= lo && tau <= hi)) {
    throw RangeError("alpha inverse queried at " + std::to_string(tau) + " outside [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]",
                     tau, lo, hi);
  }
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), tau,
                                   [](const Knot& k, double v) { return k.alpha < v; });
  if (it->alpha == tau) return it->t;
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  return a.t + (tau - a.alpha) / (b.alpha - a.alpha) * (b.t - a.t);
}

double TimeChange::eval(double t) const {
  const double lo = knots_.front().t;
  const double hi = knots_.back().t;
  if (!(t >= lo && t <= hi)) {
    throw RangeError("alpha queried at t = " + std::to_string(t) + " outside [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]",
                     t, lo, hi);
  }
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), t,
                                   [](const Knot& k, double v) { return k.t < v; });
  if (it->t == t) return it->alpha;
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  return a.alpha + (t - a.t) / (b.t - a.t) * (b.alpha - a.alpha);
}

TimeChange accumulate_alpha(TimeChange map, double t_new, double coeff) {
  map.append(t_new, coeff);
  return map;
}

double invert_alpha(const TimeChange& map, double tau) { return map.invert(tau); }

Alpha0 compute_alpha0(const InitialFunction& phi, const ProblemSpec& spec, double ds) {
  if (!(ds > 0.0)) throw ParameterError("compute_alpha0 needs ds > 0");
  const double rho = phi.rho();
  auto slope_at = [&](double sigma) { return eval_diffusion(spec, phi.eval(sigma)); };

  // Walk backward from (0, 0); knots collected in decreasing order.
  std::vector<Knot> rev{{0.0, 0.0}};
  double s = 0.0;
  double alpha = 0.0;
  while (alpha > -rho) {
    const double slope = slope_at(alpha);
    const double next = alpha - ds * slope;
    if (next <= -rho) {
      // Shortened final sub-step lands exactly on -ρ.
      s -= (alpha + rho) / slope;
      alpha = -rho;
    } else {
      s -= ds;
      alpha = next;
    }
    rev.push_back({s, alpha});
  }
  std::reverse(rev.begin(), rev.end());

  double recip = 0.0;
  const auto& stamps = phi.stamps();
  const auto& states = phi.states();
  for (std::size_t j = 1; j < stamps.size(); ++j) {
    const double f0 = 1.0 / eval_diffusion(spec, states[j - 1]);
    const double f1 = 1.0 / eval_diffusion(spec, states[j]);
    recip += 0.5 * (f0 + f1) * (stamps[j] - stamps[j - 1]);
  }

  Alpha0 out{rev.front().t, TimeChange(std::move(rev), spec.m, spec.M), recip};
  return out;
}

}  // namespace nlds
