#pragma once

/// @file
/// The time-modulated integrator dY = gamma(t) dW with gamma(t) real
/// orthogonal, constant on each grid interval.
///
/// Ergodicity is decided by the level-set measure of each eigenphase path
/// psi_j(t): the map is ergodic iff theta -> int_0^1 u(theta - psi_j(t)) dt is
/// continuous for every j. On a grid that distribution is a step function,
/// and a genuine level set shows up as a jump far above the O(dt) steps a
/// continuously moving phase produces.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "errors.hpp"
#include "gaussian.hpp"
#include "grid.hpp"
#include "numeric.hpp"
#include "random.hpp"
#include "rotation.hpp"
#include "spectral.hpp"

namespace wienerdyn {

struct GammaProcess {
  int n = 0;
  Grid grid;
  std::vector<Eigen::MatrixXd> samples;  // gamma on interval i
  Eigen::MatrixXd phases;                // (i, j): psi_j(t_i), ascending in j, in (0, 2pi]
  std::vector<Eigen::MatrixXcd> frames;  // column j of frames[i]: a_j(t_i)
};

namespace detail {

/// Rotates each block of (numerically) equal phases to the unitary frame
/// closest to the previous interval's frame for the same indices.
inline void continue_frames(const Eigen::VectorXd& phases, const Eigen::MatrixXcd& previous,
                            Eigen::MatrixXcd& frames, double group_tol) {
  const Eigen::Index n = phases.size();
  for (Eigen::Index a = 0; a < n;) {
    Eigen::Index b = a + 1;
    while (b < n && phases[b] - phases[b - 1] <= group_tol) ++b;
    const Eigen::Index d = b - a;
    const Eigen::MatrixXcd M = frames.middleCols(a, d).adjoint() * previous.middleCols(a, d);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    frames.middleCols(a, d) = frames.middleCols(a, d) * (svd.matrixU() * svd.matrixV().adjoint());
    a = b;
  }
}

}  // namespace detail

inline GammaProcess build_gamma(Grid grid, std::vector<Eigen::MatrixXd> samples, double tol = 1e-10) {
  if (static_cast<int>(samples.size()) != grid.size())
    throw dimension_error("need one gamma sample per grid interval");
  const int n = static_cast<int>(samples.front().rows());
  GammaProcess G{n, grid, std::move(samples), Eigen::MatrixXd(grid.size(), n), {}};
  G.frames.reserve(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const auto& g = G.samples[i];
    if (g.rows() != n || g.cols() != n) throw dimension_error("gamma samples must all be n x n");
    const double res = orthogonality_residual(g);
    if (!(res <= tol))
      throw not_unitary_error("gamma sample " + std::to_string(i) + " is not orthogonal", res);
    UnitaryEigensystem es = unitary_eigensystem(g);
    if (i > 0) detail::continue_frames(es.phases, G.frames.back(), es.vectors, 1e-9);
    G.phases.row(i) = es.phases.transpose();
    G.frames.push_back(std::move(es.vectors));
  }
  return G;
}

inline GammaProcess gamma_constant(Grid grid, const Eigen::MatrixXd& g) {
  return build_gamma(grid, std::vector<Eigen::MatrixXd>(grid.size(), g));
}

/// Rotation by 2 pi * turns * t in the first coordinate plane, evaluated at
/// interval midpoints.
inline GammaProcess gamma_sweep(Grid grid, int n, double turns = 1.0) {
  if (n < 2) throw dimension_error("sweep family needs n >= 2");
  std::vector<Eigen::MatrixXd> s;
  for (int i = 0; i < grid.size(); ++i)
    s.push_back(planar_rotation_matrix(n, two_pi * turns * grid.midpoint(i)));
  return build_gamma(grid, std::move(s));
}

struct GammaPiece {
  double t_end;  // piece covers midpoints t <= t_end
  Eigen::MatrixXd value;
};

inline GammaProcess gamma_piecewise(Grid grid, const std::vector<GammaPiece>& pieces) {
  if (pieces.empty()) throw std::invalid_argument("piecewise gamma needs at least one piece");
  std::vector<Eigen::MatrixXd> s;
  for (int i = 0; i < grid.size(); ++i) {
    const double t = grid.midpoint(i);
    auto it = std::find_if(pieces.begin(), pieces.end(), [t](const auto& p) { return t <= p.t_end; });
    s.push_back(it == pieces.end() ? pieces.back().value : it->value);
  }
  return build_gamma(grid, std::move(s));
}

/// Independent Haar samples on every interval.
inline GammaProcess gamma_random_haar(Grid grid, int n, RandomStream& rng) {
  std::vector<Eigen::MatrixXd> s;
  for (int i = 0; i < grid.size(); ++i) s.push_back(haar_orthogonal(n, rng));
  return build_gamma(grid, std::move(s));
}

/// gamma(t) = Q0 exp(t S) with Q0 Haar and S random skew-symmetric.
inline GammaProcess gamma_random_flow(Grid grid, int n, RandomStream& rng, double speed = 6.0) {
  const Eigen::MatrixXd Q0 = haar_orthogonal(n, rng);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      S(i, j) = speed * rng.normal();
      S(j, i) = -S(i, j);
    }
  std::vector<Eigen::MatrixXd> s;
  for (int i = 0; i < grid.size(); ++i)
    s.push_back(Q0 * Eigen::MatrixXd((grid.midpoint(i) * S).exp()));
  return build_gamma(grid, std::move(s));
}

/// n-dimensional path stored as increments, row i = interval i.
struct PathBundle {
  Grid grid;
  Eigen::MatrixXd increments;  // m x n

  int n() const noexcept { return static_cast<int>(increments.cols()); }
};

inline PathBundle sample_wiener_bundle(Grid grid, int n, RandomStream& rng) {
  const double sd = std::sqrt(grid.dt());
  Eigen::MatrixXd inc(grid.size(), n);
  for (int i = 0; i < grid.size(); ++i)
    for (int k = 0; k < n; ++k) inc(i, k) = sd * rng.normal();
  return {grid, std::move(inc)};
}

/// dY_i = gamma(t_i) dW_i.
inline PathBundle apply_gamma(const GammaProcess& G, const PathBundle& W) {
  require_same_grid(G.grid, W.grid, "apply_gamma");
  if (W.n() != G.n) throw dimension_error("path bundle dimension does not match gamma");
  PathBundle Y{W.grid, Eigen::MatrixXd(W.increments.rows(), W.increments.cols())};
  for (int i = 0; i < G.grid.size(); ++i)
    Y.increments.row(i) = (G.samples[i] * W.increments.row(i).transpose()).transpose();
  return Y;
}

/// The induced operator on the n*m coordinate space, coordinate (i, k) at
/// index i*n + k. Its path map x -> A^T x is apply_gamma in coordinates.
inline RotationOp gamma_rotation(const GammaProcess& G) {
  const int N = G.n * G.grid.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < G.grid.size(); ++i)
    A.block(i * G.n, i * G.n, G.n, G.n) = G.samples[i].transpose();
  return RotationOp::from_matrix(std::move(A));
}

/// Flattens an m x n density (row i = h'(t_i)) into an H-vector on the
/// n*m coordinate space, matching gamma_rotation's ordering.
inline HVector flatten_bundle(const Grid& grid, const Eigen::MatrixXd& density) {
  const Eigen::Index n = density.cols();
  Eigen::VectorXd c(density.size());
  for (Eigen::Index i = 0; i < density.rows(); ++i)
    for (Eigen::Index k = 0; k < n; ++k)
      c[i * n + k] = density(i, k) / std::sqrt(static_cast<double>(grid.size()));
  return HVector::from_coordinates(Grid(static_cast<int>(density.size())), c);
}

struct PhaseJump {
  double theta;  // right edge of the theta bin holding the jump
  double size;
};

struct LevelDistribution {
  int j = 0;
  std::vector<double> thetas;  // bin right edges, last = 2pi
  std::vector<double> F;       // int_0^1 u(theta - psi_j(t)) dt at thetas
  std::vector<PhaseJump> jumps;
  double threshold = 0.0;
};

inline double default_jump_threshold(const Grid& grid, double bin_width) {
  return 2.0 * grid.dt() + bin_width / two_pi;
}

inline LevelDistribution level_distribution(const GammaProcess& G, int j,
                                            double theta_resolution = two_pi / 512,
                                            double threshold = -1.0) {
  if (j < 0 || j >= G.n) throw std::out_of_range("eigenphase index out of range");
  if (!(theta_resolution > 0.0)) throw std::invalid_argument("theta resolution must be positive");
  const int bins = static_cast<int>(std::ceil(two_pi / theta_resolution - 1e-9));
  const double width = two_pi / bins;
  std::vector<int> counts(bins, 0);
  for (int i = 0; i < G.grid.size(); ++i) {
    const double psi = G.phases(i, j);
    int b = static_cast<int>(std::ceil(psi / width - 1e-12)) - 1;
    counts[std::clamp(b, 0, bins - 1)]++;
  }
  LevelDistribution L;
  L.j = j;
  L.threshold = threshold >= 0.0 ? threshold : default_jump_threshold(G.grid, width);
  int cum = 0;
  for (int b = 0; b < bins; ++b) {
    cum += counts[b];
    L.thetas.push_back(b + 1 == bins ? two_pi : (b + 1) * width);
    L.F.push_back(cum * G.grid.dt());
  }
  // Consecutive flagged bins form one jump located at its largest step.
  for (int b = 0; b < bins;) {
    const double step = counts[b] * G.grid.dt();
    if (step <= L.threshold) {
      ++b;
      continue;
    }
    double size = 0.0, best = -1.0, where = L.thetas[b];
    while (b < bins && counts[b] * G.grid.dt() > L.threshold) {
      const double s = counts[b] * G.grid.dt();
      size += s;
      if (s > best) {
        best = s;
        where = L.thetas[b];
      }
      ++b;
    }
    L.jumps.push_back({where, size});
  }
  return L;
}

struct PhaseOffender {
  int j;
  double theta;
  double measure;
};

struct GammaVerdict {
  Verdict verdict = Verdict::inconclusive;
  std::vector<PhaseOffender> offenders;
  bool odd_dimension = false;
  bool corollary_holds = true;  // odd n: a jump at pi or 2pi was found
  std::string note;
};

inline GammaVerdict gamma_ergodicity(const GammaProcess& G, double jump_tol = -1.0,
                                     double theta_resolution = two_pi / 512) {
  GammaVerdict out;
  bool real_axis_jump = false;
  for (int j = 0; j < G.n; ++j) {
    const LevelDistribution L = level_distribution(G, j, theta_resolution, jump_tol);
    for (const auto& jump : L.jumps) {
      out.offenders.push_back({j, jump.theta, jump.size});
      if (phase_distance(jump.theta, std::numbers::pi) <= theta_resolution ||
          phase_distance(jump.theta, two_pi) <= theta_resolution)
        real_axis_jump = true;
    }
  }
  out.verdict = out.offenders.empty() ? Verdict::ergodic_limit : Verdict::non_ergodic;
  out.odd_dimension = G.n % 2 == 1;
  if (out.odd_dimension) {
    out.corollary_holds = real_axis_jump;
    out.note = "odd dimension: an eigenvalue +1 or -1 persists for all t, giving a level set "
               "of positive measure at theta = pi or 2pi";
  } else if (out.verdict == Verdict::ergodic_limit) {
    out.note = "every eigenphase distribution is continuous at this resolution";
  }
  return out;
}

/// |Pi_theta h|^2 = int sum_j u(theta - psi_j(t)) |(a_j(t), h'(t))|^2 dt,
/// with h' given as an m x n density.
inline double pi_theta_norm(const GammaProcess& G, const Eigen::MatrixXd& density, double theta) {
  if (density.rows() != G.grid.size() || density.cols() != G.n)
    throw dimension_error("density must be m x n");
  CompensatedSum s;
  for (int i = 0; i < G.grid.size(); ++i) {
    const Eigen::VectorXcd hp = density.row(i).transpose().cast<std::complex<double>>();
    for (int j = 0; j < G.n; ++j)
      if (G.phases(i, j) <= theta) s.add(std::norm(G.frames[i].col(j).dot(hp)));
  }
  return G.grid.dt() * s.value();
}

}  // namespace wienerdyn
