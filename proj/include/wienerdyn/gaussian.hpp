#pragma once

/// @file
/// Wiener paths on a grid, Wiener integrals of deterministic H-vectors,
/// Wick exponentials and multiple Wiener-Ito integrals of tensor powers.

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "errors.hpp"
#include "grid.hpp"
#include "random.hpp"

namespace wienerdyn {

/// Wiener path stored as increments dw_i over the grid subintervals.
struct Path {
  Grid grid;
  Eigen::VectorXd increments;
  std::uint64_t stream = 0;

  Path(Grid g, Eigen::VectorXd inc, std::uint64_t s = 0)
      : grid(g), increments(std::move(inc)), stream(s) {
    if (increments.size() != grid.size())
      throw dimension_error("Path increments length does not match grid");
  }

  /// w(t_i), i = 0..m, with w(0) = 0.
  Eigen::VectorXd values() const {
    Eigen::VectorXd v(grid.size() + 1);
    v[0] = 0.0;
    for (int i = 0; i < grid.size(); ++i) v[i + 1] = v[i] + increments[i];
    return v;
  }

  /// x_i = delta e_i = sqrt(m) dw_i; i.i.d. N(0,1) under Wiener measure.
  Eigen::VectorXd coordinates() const {
    return increments * std::sqrt(static_cast<double>(grid.size()));
  }

  static Path from_coordinates(Grid g, const Eigen::VectorXd& x, std::uint64_t s = 0) {
    if (x.size() != g.size()) throw dimension_error("coordinates length does not match grid");
    return {g, x / std::sqrt(static_cast<double>(g.size())), s};
  }
};

inline Eigen::VectorXd sample_coordinates(int m, RandomStream& rng) {
  Eigen::VectorXd x(m);
  for (int i = 0; i < m; ++i) x[i] = rng.normal();
  return x;
}

inline Path sample_wiener(Grid grid, RandomStream& rng) {
  return Path::from_coordinates(grid, sample_coordinates(grid.size(), rng), rng.id());
}

/// delta h = sum h'_i dw_i.
inline double divergence(const HVector& h, const Path& p) {
  require_same_grid(h.grid, p.grid, "divergence");
  return h.density.dot(p.increments);
}

/// rho(delta h) = exp(delta h - |h|^2 / 2).
inline double wick_exponential(const HVector& h, const Path& p) {
  return std::exp(divergence(h, p) - 0.5 * inner_h(h, h));
}

/// Probabilists' Hermite polynomial He_n(x) by the three-term recurrence.
inline double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("negative Hermite order");
  if (n == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

inline constexpr int max_chaos_order = 3;

/// I_n((c h)^{tensor n}) = (c |h|)^n He_n(delta h / |h|).
inline double multiple_integral_from(int n, double divergence_value, double h_norm, double c = 1.0) {
  if (n < 0 || n > max_chaos_order)
    throw unsupported_order_error("multiple integral order must be <= 3");
  if (!(h_norm > 0.0)) throw degenerate_input_error("multiple integral of a zero direction");
  return std::pow(c * h_norm, n) * hermite(n, divergence_value / h_norm);
}

inline double multiple_integral(int n, const HVector& h, double c, const Path& p) {
  if (n < 0 || n > max_chaos_order)
    throw unsupported_order_error("multiple integral order must be <= 3");
  return multiple_integral_from(n, divergence(h, p), norm_h(h), c);
}

}  // namespace wienerdyn
