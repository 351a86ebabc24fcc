#pragma once

/// @file
/// Shifts y = w + int_0^. I_n(k_{n+1}(., eta)) d eta of Wiener space.
///
/// With a second order kernel k the shift is linear in the path:
///   dy_i = dw_i + dt * sum_j k(j,i) dw_j,
/// which in coordinates reads x -> (I + K^T) x with K = dt * k. The map
/// preserves Wiener measure exactly when I + K is orthogonal; in finite
/// dimension that is the kernel equation
///   k(s,t) + k(t,s) + int k(theta,s) k(theta,t) dtheta = 0,
/// and -1 is then automatically outside the spectrum of K.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "errors.hpp"
#include "gaussian.hpp"
#include "grid.hpp"
#include "random.hpp"

namespace wienerdyn {

struct ShiftReport {
  double b2_residual = 0.0;          // max |k(i,j) + k(j,i) + dt sum_theta k(theta,i) k(theta,j)|
  double minus_one_eigen_gap = 0.0;  // min |lambda + 1| over the spectrum of K
  bool is_unitary = false;
  double tol = 0.0;
};

/// Eigenvalues of the discretized kernel operator.
inline Eigen::VectorXcd kernel_spectrum(const Kernel2& K) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(K.operator_matrix(), false);
  return es.eigenvalues();
}

inline double kernel_equation_residual(const Kernel2& K) {
  Eigen::MatrixXd r = K.k + K.k.transpose();
  r.noalias() += K.grid.dt() * (K.k.transpose() * K.k);
  return r.cwiseAbs().maxCoeff();
}

inline ShiftReport check_unitary_shift(const Kernel2& K, double tol) {
  ShiftReport rep;
  rep.tol = tol;
  rep.b2_residual = kernel_equation_residual(K);
  const Eigen::VectorXcd ev = kernel_spectrum(K);
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& l : ev) gap = std::min(gap, std::abs(l + 1.0));
  rep.minus_one_eigen_gap = gap;
  rep.is_unitary = rep.b2_residual <= tol && gap > tol;
  return rep;
}

/// Coordinate map x -> (I + K^T) x of a second order kernel shift.
class KernelShiftMap {
 public:
  explicit KernelShiftMap(const Kernel2& K)
      : grid_(K.grid),
        matrix_(Eigen::MatrixXd::Identity(K.grid.size(), K.grid.size()) +
                K.operator_matrix().transpose()) {}

  int dimension() const noexcept { return grid_.size(); }
  bool invertible() const noexcept { return true; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

  void step(Eigen::VectorXd& x, RandomStream&) const { x = matrix_ * x; }

  /// E[delta h o T^n . delta h] = ((I + K)^n h, h).
  double correlation(const HVector& h, int n) const {
    require_same_grid(grid_, h.grid, "KernelShiftMap::correlation");
    const Eigen::VectorXd c = h.coordinates();
    Eigen::VectorXd v = c;
    for (int i = 0; i < n; ++i) v = matrix_.transpose() * v;
    return v.dot(c);
  }

 private:
  Grid grid_;
  Eigen::MatrixXd matrix_;
};

inline Path apply_shift(const Kernel2& K, const Path& p) {
  require_same_grid(K.grid, p.grid, "apply_shift");
  Eigen::VectorXd inc = p.increments;
  inc.noalias() += K.grid.dt() * (K.k.transpose() * p.increments);
  return {p.grid, std::move(inc), p.stream};
}

/// Shift by a finite sum of separable chaos kernels g(t) h(s_1)...h(s_n):
///   dy_i = dw_i + dt * sum_n g_n(t_i) I_n(h_n^{tensor n}).
class ChaosShiftMap {
 public:
  explicit ChaosShiftMap(std::vector<ChaosKernel> kernels, Grid grid)
      : grid_(grid), kernels_(std::move(kernels)) {
    for (const auto& ck : kernels_) {
      require_same_grid(ck.g.grid, grid_, "ChaosShiftMap");
      norms_.push_back(norm_h(ck.h));
      if (!(norms_.back() > 0.0)) throw degenerate_input_error("chaos kernel with zero h factor");
    }
  }

  int dimension() const noexcept { return grid_.size(); }
  bool invertible() const noexcept { return false; }

  void step(Eigen::VectorXd& x, RandomStream&) const {
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid_.size()));
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(x.size());
    for (std::size_t k = 0; k < kernels_.size(); ++k) {
      const auto& ck = kernels_[k];
      const double dh = scale * ck.h.density.dot(x);
      const double value = multiple_integral_from(ck.order, dh, norms_[k]);
      dx += (scale * value) * ck.g.density;
    }
    x += dx;
  }

 private:
  Grid grid_;
  std::vector<ChaosKernel> kernels_;
  std::vector<double> norms_;
};

inline Path apply_chaos_shift(std::span<const ChaosKernel> kernels, const Path& p) {
  ChaosShiftMap map(std::vector<ChaosKernel>(kernels.begin(), kernels.end()), p.grid);
  Eigen::VectorXd x = p.coordinates();
  RandomStream unused(0, 0);
  map.step(x, unused);
  return Path::from_coordinates(p.grid, x, p.stream);
}

/// Kernel of -(I + K)^{-1} K, the shift inverting the shift by K.
inline Kernel2 invert_shift(const Kernel2& K, double singular_tol = 1e-12) {
  const Eigen::MatrixXd op = K.operator_matrix();
  const Eigen::Index m = op.rows();
  const Eigen::VectorXcd ev = kernel_spectrum(K);
  for (const auto& l : ev)
    if (std::abs(l + 1.0) <= singular_tol)
      throw singular_shift_error("-1 is an eigenvalue of the kernel operator");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(m, m) + op);
  return Kernel2::from_operator(K.grid, -lu.solve(op));
}

/// det2(I + K) = prod (1 + lambda) exp(-lambda), kept in log-polar form.
struct Det2 {
  double log_modulus = 0.0;
  double phase = 0.0;  // in (-pi, pi]

  double modulus() const { return std::exp(log_modulus); }
  std::complex<double> value() const { return std::polar(modulus(), phase); }
};

inline Det2 carleman_det2(const Kernel2& K) {
  const Eigen::VectorXcd ev = kernel_spectrum(K);
  CompensatedSum logmod, phase;
  for (const auto& l : ev) {
    const std::complex<double> f = 1.0 + l;
    logmod.add(std::log(std::abs(f)) - l.real());
    phase.add(std::arg(f) - l.imag());
  }
  return {logmod.value(), std::remainder(phase.value(), two_pi)};
}

struct RadonNikodymReport {
  double log_det2 = 0.0;             // log |det2(I + K)|
  double stochastic_exponent = 0.0;  // -I_2(k) - 1/2 int (int k(s,t) dw_s)^2 dt
  double log_Lambda = 0.0;
};

/// Pathwise evaluator of log |Lambda| for a measure preserving kernel shift.
/// I_2(k) is the off-diagonal double Wiener sum; the quadratic term is the
/// rectangle rule in t of the squared inner Wiener integral.
class RadonNikodym {
 public:
  explicit RadonNikodym(Kernel2 K, double tol = 1e-8) : K_(std::move(K)) {
    const ShiftReport rep = check_unitary_shift(K_, tol);
    if (!rep.is_unitary)
      throw precondition_error("Radon-Nikodym density requires a measure preserving kernel");
    log_det2_ = carleman_det2(K_).log_modulus;
  }

  double log_det2() const noexcept { return log_det2_; }

  RadonNikodymReport evaluate(const Path& p) const {
    require_same_grid(K_.grid, p.grid, "log_radon_nikodym");
    const Eigen::VectorXd& dw = p.increments;
    const Eigen::VectorXd inner = K_.k.transpose() * dw;  // int k(s, t_j) dw_s
    const double full = dw.dot(K_.k * dw);
    const double diag = (K_.k.diagonal().array() * dw.array().square()).sum();
    const double i2 = full - diag;
    const double quad = 0.5 * K_.grid.dt() * inner.squaredNorm();
    RadonNikodymReport rep;
    rep.log_det2 = log_det2_;
    rep.stochastic_exponent = -i2 - quad;
    rep.log_Lambda = rep.log_det2 + rep.stochastic_exponent;
    return rep;
  }

 private:
  Kernel2 K_;
  double log_det2_ = 0.0;
};

inline RadonNikodymReport log_radon_nikodym(const Kernel2& K, const Path& p, double tol = 1e-8) {
  if (K.k.isZero(0.0)) return {};
  return RadonNikodym(K, tol).evaluate(p);
}

/// Eigenpair (lambda, z) of K with |1 + lambda| = 1; |delta z| is invariant
/// under the shift since delta z o T = (1 + lambda) delta z.
struct ShiftWitness {
  std::complex<double> lambda;
  Eigen::VectorXcd coordinates;  // unit norm; real when lambda is real
  Grid grid;

  bool is_real() const { return coordinates.imag().isZero(0.0); }

  /// Real eigendirection as an H-vector (only meaningful when is_real()).
  HVector direction() const { return HVector::from_coordinates(grid, coordinates.real()); }

  double evaluate(const Eigen::VectorXd& x) const {
    return std::abs(coordinates.cwiseProduct(x.cast<std::complex<double>>()).sum());
  }
  double evaluate(const Path& p) const { return evaluate(p.coordinates()); }
};

inline ShiftWitness invariant_observable(const Kernel2& K, double tol = 1e-8) {
  if (K.k.isZero(0.0)) throw no_witness_error("zero kernel: the shift is the identity");
  const Eigen::MatrixXd op = K.operator_matrix();
  Eigen::EigenSolver<Eigen::MatrixXd> es(op, true);
  const Eigen::VectorXcd ev = es.eigenvalues();
  Eigen::Index best = -1;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (std::abs(std::abs(1.0 + ev[k]) - 1.0) > std::sqrt(tol)) continue;
    if (best < 0) {
      best = k;
      continue;
    }
    const double a = std::abs(ev[k]), b = std::abs(ev[best]);
    const bool real_k = std::abs(ev[k].imag()) <= tol;
    const bool real_b = std::abs(ev[best].imag()) <= tol;
    if (a > b + tol || (std::abs(a - b) <= tol && real_k && !real_b)) best = k;
  }
  if (best < 0 || std::abs(ev[best]) <= tol)
    throw no_witness_error("no nonzero eigenvalue on the circle |1 + lambda| = 1");

  std::complex<double> lambda = ev[best];
  Eigen::VectorXcd z = es.eigenvectors().col(best);
  if (std::abs(lambda.imag()) <= tol) {
    lambda = {lambda.real(), 0.0};
    Eigen::Index piv;
    z.cwiseAbs().maxCoeff(&piv);
    z *= std::conj(z[piv]) / std::abs(z[piv]);
    Eigen::VectorXd re = z.real();
    z = re.cast<std::complex<double>>();
  }
  z /= z.norm();
  return {lambda, std::move(z), K.grid};
}

/// Kernel with I + K = exp(S) for a random skew-symmetric S; S has i.i.d.
/// N(0, scale^2 / m) entries above the diagonal.
inline Kernel2 random_unitary_kernel(Grid grid, RandomStream& rng, double scale = 1.0) {
  const int m = grid.size();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m, m);
  const double sd = scale / std::sqrt(static_cast<double>(m));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      S(i, j) = sd * rng.normal();
      S(j, i) = -S(i, j);
    }
  Eigen::MatrixXd Q = S.exp();
  Q.diagonal().array() -= 1.0;
  return Kernel2::from_operator(grid, Q);
}

}  // namespace wienerdyn
