#include <doctest.h>

#include <cmath>

#include "nlds/attractor.hpp"
#include "nlds/error.hpp"

using namespace nlds;

namespace {

GridFunction constant(const Grid& g, double v) {
  return GridFunction::sample(g, [v](double) { return v; });
}

ProblemSpec small_spec() {
  ProblemSpec s = ProblemSpec::canonical();
  s.disc.n_interior = 31;
  s.disc.dtau = 1e-3;
  return s;
}

std::vector<InitialFunction> members(const ProblemSpec& s, int n, double amp) {
  std::vector<InitialFunction> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(InitialFunction::sample(InitialProfile::random(100 + i, amp), s.grid(), s.rho, s.dsigma()));
  }
  return out;
}

}  // namespace

TEST_CASE("Hausdorff semidistance is asymmetric") {
  const Grid g(3);
  const std::vector<GridFunction> A{constant(g, 0.0)};
  const std::vector<GridFunction> B{constant(g, 0.0), constant(g, 1.0)};
  CHECK(hausdorff_semidist(A, B, NormKind::linf) == 0.0);
  CHECK(hausdorff_semidist(B, A, NormKind::linf) == 1.0);
  CHECK_THROWS_AS(hausdorff_semidist(A, std::vector<GridFunction>{}, NormKind::l2), ParameterError);
}

TEST_CASE("bundles are deterministic and independent of the thread count") {
  const ProblemSpec s = small_spec();
  const auto m = members(s, 5, 1.0);
  const auto a = run_bundle(m, s, 0.5, 0.1, {3, 1});
  const auto b = run_bundle(m, s, 0.5, 0.1, {3, 4});
  REQUIRE(a.snapshots.size() == 6);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t j = 0; j < a.snapshots.size(); ++j) {
    CHECK(a.snapshots[j].stamp == b.snapshots[j].stamp);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(a.snapshots[j].members[i].id == static_cast<int>(i));
      CHECK(a.snapshots[j].members[i].endpoint == b.snapshots[j].members[i].endpoint);
      CHECK(a.snapshots[j].members[i].segment.size() == 3);
    }
  }
  CHECK(hausdorff_semidist(a.snapshots.back(), b.snapshots.back(), NormKind::l2, Granularity::segment) == 0.0);
  CHECK(a.member_trajectory(2).size() == 6);
}

TEST_CASE("bundle preconditions") {
  ProblemSpec s = small_spec();
  CHECK_THROWS_AS(run_bundle({}, s, 1.0, 0.1), ParameterError);
  s.h = Forcing::constant(1.0);
  CHECK_THROWS_AS(run_bundle(members(s, 1, 1.0), s, 1.0, 0.1), ParameterError);
  s = small_spec();
  s.f = Reaction::linear(60.0);
  s.gamma = 0.0;
  CHECK_THROWS_WITH_AS(run_bundle(members(s, 2, 1.0), s, 2.0, 0.1), doctest::Contains("member 0"), BlowUpError);
}

TEST_CASE("omega-limit of a bistable problem: one cluster per stable equilibrium") {
  ProblemSpec s = small_spec();
  s.lambda = 20.0;
  s.gamma = 0.0;
  s.a = Diffusion::constant(1.0);
  s.m = s.M = 1.0;
  std::vector<InitialFunction> m;
  for (double sign : {1.0, -1.0}) {
    for (double amp : {0.3, 0.6}) {
      m.push_back(InitialFunction::sample(InitialProfile::sine(sign * amp), s.grid(), s.rho, s.dsigma()));
    }
  }
  const auto run = run_bundle(m, s, 8.0, 0.1, {2, 0});
  const auto omega = omega_limit_estimate(run, 0.2);
  REQUIRE(omega.size() == 2);
  const auto sum = omega[0] + omega[1];
  CHECK(norms(sum).linf < 1e-6);
  CHECK(norms(omega[0]).linf > 0.8);
  CHECK_THROWS_AS(omega_limit_estimate(run, 0.05), ParameterError);
  CHECK_FALSE(absorption_time(run, 0.1, NormKind::linf));
}

TEST_CASE("absorption and containment on a decaying bundle") {
  const ProblemSpec s = small_spec();
  const auto run = run_bundle(members(s, 4, 2.0), s, 3.0, 0.05, {5, 0});
  const auto t = absorption_time(run, 0.2, NormKind::linf);
  REQUIRE(t);
  CHECK(*t > 0.0);
  const auto theta = constant(s.grid(), 0.5);
  const auto rep = containment_check(run, theta, 0.2, t);
  CHECK(rep.violation_all > 0.0);
  CHECK(rep.violation_after < 0.0);
  CHECK(rep.violation_window < 0.0);
  CHECK(rep.omega_clusters == 1);
  const auto series = distance_series(run, std::vector<GridFunction>{GridFunction(s.grid())}, NormKind::l2);
  CHECK(series.back() < series.front());
}

TEST_CASE("members built inside the envelope stay below it pointwise") {
  const ProblemSpec s = small_spec();
  const auto theta = GridFunction::sample(s.grid(), [](double x) { return x * (1 - x); });
  const auto phi = inside_envelope_member(InitialProfile::random(5, 1.0), theta, s.rho, 0.05, 0.9);
  for (const auto& st : phi.states()) {
    for (std::size_t i = 0; i < st.size(); ++i) CHECK(std::abs(st[i]) <= 0.9 * theta[i] + 1e-15);
  }
}
