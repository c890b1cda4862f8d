#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nlds {

/// Uniform grid on (0,1) with homogeneous Dirichlet ends.
///
/// Only the interior nodes x_i = (i+1)·dx, i = 0..n-1, are stored; the
/// boundary values at x = 0 and x = 1 are exact zeros everywhere in the
/// library and never materialized.
class Grid {
 public:
  explicit Grid(int n_interior);

  /// Grid whose spacing is the closest admissible value to `dx`.
  static Grid with_spacing(double dx);

  int n_interior() const noexcept { return n_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_); }
  double dx() const noexcept { return dx_; }
  double x(int i) const noexcept { return (i + 1) * dx_; }

  friend bool operator==(const Grid& a, const Grid& b) noexcept { return a.n_ == b.n_; }

 private:
  int n_;
  double dx_;
};

/// A function on the interior nodes of a Grid.
class GridFunction {
 public:
  explicit GridFunction(Grid grid);
  GridFunction(Grid grid, std::vector<double> values);

  static GridFunction sample(Grid grid, const std::function<double(double)>& fn);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool all_finite() const noexcept;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double s) noexcept;

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(GridFunction a, double s) { return a *= s; }
  friend GridFunction operator*(double s, GridFunction a) { return a *= s; }

  friend bool operator==(const GridFunction& a, const GridFunction& b) {
    return a.grid_ == b.grid_ && a.values_ == b.values_;
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// (1 - w)·a + w·b, evaluated node by node.
GridFunction lerp(const GridFunction& a, const GridFunction& b, double w);

struct Norms {
  double l2 = 0.0;
  double h10 = 0.0;
  double linf = 0.0;
};

enum class NormKind { l2, h10, linf };

/// Second central difference with zero boundary values.
GridFunction laplacian_apply(const GridFunction& u);

/// Solves (I - dt·coeff·Δ_h) v = u by tridiagonal elimination.
GridFunction implicit_diffusion_step(const GridFunction& u, double coeff, double dt);

/// Discrete L2, H^1_0 and max norms; boundary zeros enter the H^1_0 sum.
Norms norms(const GridFunction& u);
double norm(const GridFunction& u, NormKind kind);

/// Discrete inner product Σ u_i v_i dx.
double inner(const GridFunction& u, const GridFunction& v);

/// First eigenvalue of -Δ_h + shift on the grid: (4/dx²) sin²(π dx/2) + shift.
double discrete_first_eigenvalue(const Grid& grid, double shift);
/// Continuum counterpart π² + shift.
double continuum_first_eigenvalue(double shift) noexcept;

/// Thomas algorithm for a tridiagonal system; `lower[0]` and `upper[n-1]` are ignored.
/// Requires a diagonally dominant matrix (no pivoting).
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

/// Solves (-Δ_h + shift) v = rhs with zero boundary values, shift >= 0.
GridFunction solve_shifted_poisson(const GridFunction& rhs, double shift);

}  // namespace nlds
