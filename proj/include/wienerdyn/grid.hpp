#pragma once

/// @file
/// Discretized Cameron-Martin space on a uniform partition of [0,1].
///
/// An element h of H is stored through its derivative h', piecewise constant
/// on the m subintervals. The normalized indicator functions
/// e_i' = sqrt(m) * 1_{[t_{i-1}, t_i)} form an orthonormal basis, and the
/// coordinate of h along e_i is density[i] / sqrt(m). Kernels k(s,t) act on
/// densities with the rectangle rule, so the coordinate matrix of the kernel
/// operator K is dt * k.

#include <cmath>
#include <Eigen/Dense>

#include "errors.hpp"

namespace wienerdyn {

class Grid {
 public:
  explicit Grid(int m) : m_(m) {
    if (m < 2) throw std::invalid_argument("grid needs at least 2 subintervals");
  }

  int size() const noexcept { return m_; }
  double dt() const noexcept { return 1.0 / m_; }
  double time(int i) const noexcept { return i == m_ ? 1.0 : i * dt(); }
  double midpoint(int i) const noexcept { return (i + 0.5) * dt(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int m_;
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (a != b)
    throw dimension_error(std::string(where) + ": grid mismatch (" +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
}

/// Cameron-Martin vector stored by its piecewise-constant L2 density h'.
struct HVector {
  Grid grid;
  Eigen::VectorXd density;

  HVector(Grid g, Eigen::VectorXd d) : grid(g), density(std::move(d)) {
    if (density.size() != grid.size())
      throw dimension_error("HVector density length does not match grid");
  }

  static HVector zero(Grid g) { return {g, Eigen::VectorXd::Zero(g.size())}; }

  static HVector constant(Grid g, double value) {
    return {g, Eigen::VectorXd::Constant(g.size(), value)};
  }

  /// Normalized indicator of subinterval i (0-based).
  static HVector basis(Grid g, int i) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(g.size());
    d[i] = std::sqrt(static_cast<double>(g.size()));
    return {g, std::move(d)};
  }

  /// Density sampled at subinterval midpoints.
  template <class F>
  static HVector from_function(Grid g, F&& f) {
    Eigen::VectorXd d(g.size());
    for (int i = 0; i < g.size(); ++i) d[i] = f(g.midpoint(i));
    return {g, std::move(d)};
  }

  static HVector from_coordinates(Grid g, const Eigen::VectorXd& c) {
    return {g, c * std::sqrt(static_cast<double>(g.size()))};
  }

  Eigen::VectorXd coordinates() const {
    return density / std::sqrt(static_cast<double>(grid.size()));
  }

  /// Value h(t_i) = int_0^{t_i} h'(s) ds at the grid nodes, i = 0..m.
  Eigen::VectorXd path_values() const {
    Eigen::VectorXd v(grid.size() + 1);
    v[0] = 0.0;
    for (int i = 0; i < grid.size(); ++i) v[i + 1] = v[i] + grid.dt() * density[i];
    return v;
  }
};

/// (u, v)_H = dt * sum u'_i v'_i.
inline double inner_h(const HVector& u, const HVector& v) {
  require_same_grid(u.grid, v.grid, "inner_h");
  return u.grid.dt() * u.density.dot(v.density);
}

inline double norm_h(const HVector& h) { return std::sqrt(inner_h(h, h)); }

inline HVector operator+(const HVector& a, const HVector& b) {
  require_same_grid(a.grid, b.grid, "HVector +");
  return {a.grid, a.density + b.density};
}

inline HVector operator*(double c, const HVector& a) { return {a.grid, c * a.density}; }

/// Discretized Hilbert-Schmidt kernel k(s,t); k(i,j) ~ k(t_i, t_j).
struct Kernel2 {
  Grid grid;
  Eigen::MatrixXd k;

  Kernel2(Grid g, Eigen::MatrixXd values) : grid(g), k(std::move(values)) {
    if (k.rows() != grid.size() || k.cols() != grid.size())
      throw dimension_error("Kernel2 array must be m x m");
  }

  static Kernel2 zero(Grid g) { return {g, Eigen::MatrixXd::Zero(g.size(), g.size())}; }

  /// k(s,t) = a(s) b(t).
  static Kernel2 rank_one(const HVector& a, const HVector& b) {
    require_same_grid(a.grid, b.grid, "Kernel2::rank_one");
    return {a.grid, a.density * b.density.transpose()};
  }

  /// Householder kernel -2 e(s) e(t); e is normalized in L2 first.
  static Kernel2 reflection(const HVector& e) {
    const double n2 = inner_h(e, e);
    if (!(n2 > 0.0)) throw degenerate_input_error("reflection direction is zero");
    return {e.grid, (-2.0 / n2) * e.density * e.density.transpose()};
  }

  /// Kernel whose rectangle-rule operator has coordinate matrix op.
  static Kernel2 from_operator(Grid g, const Eigen::MatrixXd& op) {
    return {g, op * static_cast<double>(g.size())};
  }

  /// Coordinate matrix of the kernel operator: dt * k.
  Eigen::MatrixXd operator_matrix() const { return grid.dt() * k; }
};

/// (Kf)(t_i) = dt * sum_j k(i,j) f(j).
inline Eigen::VectorXd kernel_apply(const Kernel2& K, const Eigen::VectorXd& f) {
  if (f.size() != K.grid.size()) throw dimension_error("kernel_apply: grid mismatch");
  return K.grid.dt() * (K.k * f);
}

inline HVector kernel_apply(const Kernel2& K, const HVector& f) {
  require_same_grid(K.grid, f.grid, "kernel_apply");
  return {f.grid, kernel_apply(K, f.density)};
}

/// Kernel C with I + C = (I + Q)(I + K):
///   c(i,j) = k(i,j) + q(i,j) + dt * sum_eta q(i,eta) k(eta,j).
/// As path maps, the shift by C applies the shift by Q first, then K.
inline Kernel2 kernel_compose(const Kernel2& K, const Kernel2& Q) {
  require_same_grid(K.grid, Q.grid, "kernel_compose");
  Eigen::MatrixXd c = K.k + Q.k;
  c.noalias() += K.grid.dt() * (Q.k * K.k);
  return {K.grid, std::move(c)};
}

/// sqrt(dt^2 * sum k^2).
inline double hs_norm(const Kernel2& K) { return K.grid.dt() * K.k.norm(); }

/// Separable order-n chaos kernel k(s_1..s_n, t) = g(t) h(s_1)...h(s_n).
struct ChaosKernel {
  int order;
  HVector g;
  HVector h;

  ChaosKernel(int n, HVector g_, HVector h_) : order(n), g(std::move(g_)), h(std::move(h_)) {
    if (n < 1 || n > 3)
      throw unsupported_order_error("chaos kernel order must be 1, 2 or 3");
    require_same_grid(g.grid, h.grid, "ChaosKernel");
  }
};

}  // namespace wienerdyn
