#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlds/error.hpp"
#include "nlds/grid.hpp"

using namespace nlds;
using std::numbers::pi;

TEST_CASE("grid geometry") {
  const Grid g(255);
  CHECK(g.dx() == doctest::Approx(1.0 / 256));
  CHECK(g.x(0) == doctest::Approx(1.0 / 256));
  CHECK(g.x(254) == doctest::Approx(255.0 / 256));
  CHECK_THROWS_AS(Grid(1), ParameterError);
  CHECK(Grid::with_spacing(1.0 / 64).n_interior() == 63);
}

TEST_CASE("sine modes are eigenvectors of the discrete Laplacian") {
  const Grid g(63);
  for (int k : {1, 2, 7, 40}) {
    const auto u = GridFunction::sample(g, [k](double x) { return std::sin(k * pi * x); });
    const double mu = 4.0 / (g.dx() * g.dx()) * std::pow(std::sin(k * pi * g.dx() / 2), 2);
    const auto lap = laplacian_apply(u);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(lap[i] == doctest::Approx(-mu * u[i]).epsilon(1e-10));
  }
  CHECK(discrete_first_eigenvalue(g, 1.0) ==
        doctest::Approx(4.0 / (g.dx() * g.dx()) * std::pow(std::sin(pi * g.dx() / 2), 2) + 1.0));
  CHECK(continuum_first_eigenvalue(1.0) == doctest::Approx(pi * pi + 1.0));
}

TEST_CASE("implicit diffusion step inverts I - dt·c·Δ_h") {
  const Grid g(31);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  GridFunction u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = U(rng);
  const double c = 1.7, dt = 3e-3;
  const auto v = implicit_diffusion_step(u, c, dt);
  const auto back = v - laplacian_apply(v) * (dt * c);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-12));
}

TEST_CASE("general tridiagonal solve matches a dense product") {
  const std::vector<double> lo{0, 1, -2, 0.5}, di{4, 5, 6, 3}, up{1, 1, 2, 0}, x{1, -2, 3, 0.25};
  std::vector<double> rhs(4);
  for (int i = 0; i < 4; ++i) {
    rhs[i] = di[i] * x[i] + (i > 0 ? lo[i] * x[i - 1] : 0.0) + (i < 3 ? up[i] * x[i + 1] : 0.0);
  }
  const auto got = solve_tridiagonal(lo, di, up, rhs);
  for (int i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(x[i]).epsilon(1e-13));
}

TEST_CASE("norms of known profiles") {
  const Grid g(1023);
  const auto u = GridFunction::sample(g, [](double x) { return std::sqrt(2.0) * std::sin(pi * x); });
  const auto n = norms(u);
  CHECK(n.l2 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(n.h10 == doctest::Approx(pi).epsilon(1e-5));
  CHECK(n.linf == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
  CHECK(norm(u, NormKind::linf) == n.linf);
  CHECK(inner(u, u) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("shifted Poisson solve is exact for quadratics") {
  const Grid g(15);
  const auto v = solve_shifted_poisson(GridFunction::sample(g, [](double) { return 2.0; }), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = g.x(static_cast<int>(i));
    CHECK(v[i] == doctest::Approx(x * (1 - x)).epsilon(1e-13));
  }
}

TEST_CASE("arithmetic rejects mismatched grids and lerp is exact at ends") {
  GridFunction a(Grid(4)), b(Grid(5));
  CHECK_THROWS_AS(a += b, ParameterError);
  GridFunction p(Grid(3), {1, 2, 3}), q(Grid(3), {3, 2, 1});
  CHECK(lerp(p, q, 0.0) == p);
  CHECK(lerp(p, q, 1.0) == q);
  CHECK(lerp(p, q, 0.5)[0] == 2.0);
}
