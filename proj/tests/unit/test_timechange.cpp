#include <doctest.h>

#include <cmath>
#include <random>

#include "nlds/error.hpp"
#include "nlds/history.hpp"
#include "nlds/timechange.hpp"

using namespace nlds;

TEST_CASE("append and invert round-trip on knots") {
  TimeChange tc(Knot{0.0, 0.0}, 0.5, 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> slope(0.5, 1.0);
  for (int k = 1; k <= 200; ++k) tc.append(0.01 * k, slope(rng));
  for (const auto& k : tc.knots()) {
    CHECK(tc.invert(k.alpha) == k.t);
    CHECK(tc.eval(k.t) == k.alpha);
  }
  for (double tau = 0.0; tau < tc.back().alpha; tau += 0.0137) {
    CHECK(tc.eval(tc.invert(tau)) == doctest::Approx(tau).epsilon(1e-13));
  }
}

TEST_CASE("time change errors") {
  TimeChange tc(Knot{0.0, 0.0}, 0.5, 1.0);
  tc.append(1.0, 0.75);
  CHECK_THROWS_AS(tc.invert(2.0), RangeError);
  CHECK_THROWS_AS(tc.invert(-0.1), RangeError);
  CHECK_THROWS_AS(tc.append(0.5, 0.75), SequencingError);
  CHECK_THROWS_AS(tc.append(2.0, 3.0), ParameterError);
  CHECK_THROWS_AS(TimeChange(Knot{0, 0}, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(TimeChange({Knot{0, 0}, Knot{1, 5}}, 0.5, 1.0), ParameterError);
  const auto tc2 = accumulate_alpha(tc, 2.0, 0.5);
  CHECK(tc2.back().alpha == doctest::Approx(1.25));
  CHECK(tc.knots().size() == 2);
  CHECK(invert_alpha(tc2, 1.25) == 2.0);
}

TEST_CASE("initial time change with constant a") {
  ProblemSpec s = ProblemSpec::canonical();
  s.a = Diffusion::constant(1.5);
  s.m = 1.0;
  s.M = 2.0;
  const auto a0 = compute_alpha0(s.initial_function(), s, 1e-4);
  CHECK(a0.t_start == doctest::Approx(-1.0 / 1.5).epsilon(1e-12));
  CHECK(a0.map.front().alpha == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(a0.map.back().alpha == 0.0);
}

TEST_CASE("initial time change length equals the reciprocal integral of a") {
  ProblemSpec s = ProblemSpec::canonical();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    s.phi = InitialProfile::random(seed, 1.5);
    const auto a0 = compute_alpha0(s.initial_function(), s, 1e-5);
    CHECK(-a0.t_start >= s.rho / s.M);
    CHECK(-a0.t_start <= s.rho / s.m);
    CHECK(-a0.t_start == doctest::Approx(a0.reciprocal_integral).epsilon(1e-4));
  }
}

TEST_CASE("history buffer") {
  const Grid g(7);
  const auto phi = InitialFunction::from_function(g, 1.0, 0.5, [](double s, double) { return s; });
  HistoryBuffer h(phi);
  CHECK(h.front_stamp() == -1.0);
  CHECK(h.eval(-0.25)[0] == doctest::Approx(-0.25));
  h.record(0.5, GridFunction::sample(g, [](double) { return 1.0; }));
  CHECK(h.eval(0.25)[3] == doctest::Approx(0.5));
  CHECK_THROWS_AS(h.record(0.5, GridFunction(g)), SequencingError);
  CHECK_THROWS_AS(h.eval(0.75), RangeError);
  h.evict_before(-0.2);
  CHECK(h.front_stamp() == -0.5);
  CHECK(h.eval(-0.2)[0] == doctest::Approx(-0.2));
  const auto seg = h.segment(0.5, 1.0, 3);
  REQUIRE(seg.size() == 3);
  CHECK(seg[1][0] == doctest::Approx(0.0));
  CHECK(seg[2][0] == 1.0);
}
