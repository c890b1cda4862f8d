#include "nlds/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlds/error.hpp"

namespace nlds {

Grid::Grid(int n_interior) : n_(n_interior), dx_(1.0 / (n_interior + 1)) {
  if (n_interior < 2) {
    throw ParameterError("grid needs at least 2 interior nodes, got " + std::to_string(n_interior));
  }
}

Grid Grid::with_spacing(double dx) {
  if (!(dx > 0.0) || dx > 1.0 / 3.0) {
    throw ParameterError("grid spacing must lie in (0, 1/3], got " + std::to_string(dx));
  }
  return Grid(static_cast<int>(std::lround(1.0 / dx)) - 1);
}

GridFunction::GridFunction(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ParameterError("grid function has " + std::to_string(values_.size()) +
                         " values for a grid with " + std::to_string(grid_.size()) +
                         " interior nodes");
  }
}

GridFunction GridFunction::sample(Grid grid, const std::function<double(double)>& fn) {
  GridFunction u(grid);
  for (int i = 0; i < grid.n_interior(); ++i) u.values_[i] = fn(grid.x(i));
  return u;
}

bool GridFunction::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (!(grid_ == other.grid_)) throw ParameterError("grid mismatch in +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  if (!(grid_ == other.grid_)) throw ParameterError("grid mismatch in -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

GridFunction lerp(const GridFunction& a, const GridFunction& b, double w) {
  if (!(a.grid() == b.grid())) throw ParameterError("grid mismatch in lerp");
  GridFunction out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - w) * a[i] + w * b[i];
  return out;
}

GridFunction laplacian_apply(const GridFunction& u) {
  const std::size_t n = u.size();
  const double inv_dx2 = 1.0 / (u.grid().dx() * u.grid().dx());
  GridFunction out(u.grid());
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? u[i - 1] : 0.0;
    const double right = i + 1 < n ? u[i + 1] : 0.0;
    out[i] = (left - 2.0 * u[i] + right) * inv_dx2;
  }
  return out;
}

namespace {

// Constant-coefficient symmetric tridiagonal solve: diag on the diagonal, off
// on both off-diagonals. Diagonal dominance (|diag| > 2|off|) is assumed.
void solve_toeplitz(double diag, double off, std::span<const double> rhs, std::span<double> out) {
  const std::size_t n = rhs.size();
  std::vector<double> c(n);
  double denom = diag;
  c[0] = off / denom;
  out[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag - off * c[i - 1];
    c[i] = off / denom;
    out[i] = (rhs[i] - off * out[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) out[i] -= c[i] * out[i + 1];
}

}  // namespace

GridFunction implicit_diffusion_step(const GridFunction& u, double coeff, double dt) {
  if (!(coeff > 0.0) || !(dt > 0.0)) {
    throw ParameterError("implicit diffusion step needs coeff > 0 and dt > 0");
  }
  const double r = dt * coeff / (u.grid().dx() * u.grid().dx());
  GridFunction v(u.grid());
  solve_toeplitz(1.0 + 2.0 * r, -r, u.values(), v.values());
  return v;
}

GridFunction solve_shifted_poisson(const GridFunction& rhs, double shift) {
  if (shift < 0.0) throw ParameterError("shifted Poisson solve needs shift >= 0");
  const double inv_dx2 = 1.0 / (rhs.grid().dx() * rhs.grid().dx());
  GridFunction v(rhs.grid());
  solve_toeplitz(2.0 * inv_dx2 + shift, -inv_dx2, rhs.values(), v.values());
  return v;
}

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n || n == 0) {
    throw ParameterError("tridiagonal solve: inconsistent band lengths");
  }
  std::vector<double> c(n), x(n);
  double denom = diag[0];
  c[0] = upper[0] / denom;
  x[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * c[i - 1];
    c[i] = upper[i] / denom;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

Norms norms(const GridFunction& u) {
  const double dx = u.grid().dx();
  const std::size_t n = u.size();
  double sq = 0.0;
  double grad = 0.0;
  double linf = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sq += u[i] * u[i];
    const double d = u[i] - prev;
    grad += d * d;
    linf = std::max(linf, std::abs(u[i]));
    prev = u[i];
  }
  grad += prev * prev;
  return {std::sqrt(sq * dx), std::sqrt(grad / dx), linf};
}

double norm(const GridFunction& u, NormKind kind) {
  const Norms n = norms(u);
  switch (kind) {
    case NormKind::l2: return n.l2;
    case NormKind::h10: return n.h10;
    case NormKind::linf: return n.linf;
  }
  return n.l2;
}

double inner(const GridFunction& u, const GridFunction& v) {
  if (!(u.grid() == v.grid())) throw ParameterError("grid mismatch in inner product");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s * u.grid().dx();
}

double discrete_first_eigenvalue(const Grid& grid, double shift) {
  const double dx = grid.dx();
  const double s = std::sin(std::numbers::pi * dx / 2.0);
  return 4.0 / (dx * dx) * s * s + shift;
}

double continuum_first_eigenvalue(double shift) noexcept {
  return std::numbers::pi * std::numbers::pi + shift;
}

}  // namespace nlds
