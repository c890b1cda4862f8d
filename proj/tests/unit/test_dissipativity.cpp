#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlds/dissipativity.hpp"

using namespace nlds;
using std::numbers::pi;

TEST_CASE("check_S is monotone in C1 and tight at the derived constant") {
  const ProblemSpec s = ProblemSpec::canonical();
  const auto tight = check_S(s, 1.0, 2.0);
  CHECK(tight.holds);
  CHECK(std::abs(tight.worst_margin) <= 1e-9);
  CHECK_FALSE(check_S(s, 1.0, 1.99).holds);
  CHECK(check_S(s, 1.0, 3.0).holds);
  const double w1 = check_S(s, 1.0, 1.9).worst_margin, w2 = check_S(s, 1.0, 1.95).worst_margin;
  CHECK(w1 > w2);
  CHECK(w2 > check_S(s, 1.0, 1.99).worst_margin);
}

TEST_CASE("condition (D) on the canonical problem") {
  const auto d = check_D(ProblemSpec::canonical(), 1.0);
  const double w = pi * pi + 1.0;
  CHECK(d.omega == w);
  CHECK(d.d_lhs == doctest::Approx(std::exp(-w) + 1.0 / w));
  CHECK(d.d_lhs == doctest::Approx(0.0920).epsilon(1e-3));
  CHECK(d.d_lhs_derived == doctest::Approx(std::exp(-w / 2) + 1.0 / w));
  CHECK(d.d_holds);
  CHECK(d.omega_discrete < d.omega);
  ProblemSpec strong = ProblemSpec::canonical();
  strong.gamma = 20.0;
  CHECK_FALSE(check_D(strong, 1.0).d_holds);
}

TEST_CASE("absorbing radius") {
  const double w = pi * pi + 1.0;
  const auto K = compute_K_abs(2.0, w, 1.0, 1.0, 1.0, 2.0);
  REQUIRE(K);
  CHECK(*K == doctest::Approx(0.2057).epsilon(1e-3));
  CHECK(2.0 / w + *K * (std::exp(-w / 2) + 1.0 / w) < *K);
  CHECK_FALSE(compute_K_abs(2.0, w, 1.0, 20.0, 1.0, 2.0));
}

TEST_CASE("theta: discrete solve against the closed form") {
  const Grid g(255);
  const auto th = solve_theta(1.0, 2.0, g);
  for (std::size_t i = 0; i < th.size(); ++i) {
    const double x = g.x(static_cast<int>(i));
    const double exact = 2.0 * (1.0 - std::cosh(x - 0.5) / std::cosh(0.5));
    CHECK(th[i] == doctest::Approx(exact).epsilon(1e-5));
    CHECK(th[i] > 0.0);
  }
  const auto flat = solve_theta(0.0, 3.0, g);
  CHECK(flat[127] == doctest::Approx(3.0 / 8.0).epsilon(1e-13));
  CHECK(theta_closed_form(0.0, 3.0, 0.5) == 3.0 / 8.0);
}

TEST_CASE("report on the canonical problem") {
  const auto rep = build_dissipativity_report(ProblemSpec::canonical());
  CHECK(rep.constants.c1 == doctest::Approx(2.0));
  REQUIRE(rep.k_abs);
  REQUIRE(rep.theta);
  CHECK(rep.c1_star_worst == doctest::Approx(*rep.k_abs + 2.0));
  CHECK(rep.c1_star_best == doctest::Approx(*rep.k_abs / 2.0 + 2.0));
  CHECK((*rep.theta)[127] == doctest::Approx(0.2497).epsilon(2e-3));
}

TEST_CASE("absorbing entry and theta bound on a synthetic decay") {
  const Grid g(15);
  Trajectory traj;
  for (int k = 0; k <= 10; ++k) {
    const double amp = std::exp(-k * 1.0);
    traj.push(0.1 * k, GridFunction::sample(g, [amp](double x) { return amp * std::sin(pi * x); }), 1.0);
  }
  const auto entry = absorbing_norm_bounds(traj, 0.1);
  REQUIRE(entry.t_entry_linf);
  CHECK(*entry.t_entry_linf == doctest::Approx(0.3));
  const auto theta = GridFunction::sample(g, [](double x) { return 0.5 * std::sin(pi * x); });
  const auto tail = check_theta_bound(traj, theta, false);
  CHECK(tail.max_violation <= 0.0);
  const auto all = check_theta_bound(traj, theta, true);
  CHECK(all.max_violation > 0.0);
  REQUIRE(all.first_violation_stamp);
  CHECK(*all.first_violation_stamp == 0.0);
  CHECK_FALSE(absorbing_norm_bounds(traj, 1e-9).t_entry_linf);
}
