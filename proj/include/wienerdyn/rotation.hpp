#pragma once

/// @file
/// Second quantization of orthogonal operators on the discretized
/// Cameron-Martin space.
///
/// R is given by its matrix A in the basis e_i, A(i,j) = (R e_j, e_i)_H. The
/// induced path map T w = sum_i delta(R e_i) e_i sends coordinates x to
/// A^T x, which is exactly what makes delta h o T = delta(R h) hold.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "gaussian.hpp"
#include "grid.hpp"
#include "montecarlo.hpp"
#include "numeric.hpp"
#include "random.hpp"
#include "spectral.hpp"

namespace wienerdyn {

class RotationOp {
 public:
  /// Validates orthogonality and caches the eigendecomposition.
  static RotationOp from_matrix(Eigen::MatrixXd A, double tol = 1e-10) {
    if (A.rows() != A.cols()) throw dimension_error("rotation matrix must be square");
    const double res = orthogonality_residual(A);
    if (!(res <= tol))
      throw not_unitary_error("matrix is not orthogonal (residual " + std::to_string(res) + ")", res);
    return RotationOp(std::move(A));
  }

  int dimension() const noexcept { return static_cast<int>(A_.rows()); }
  bool invertible() const noexcept { return true; }
  const Eigen::MatrixXd& matrix() const noexcept { return A_; }
  const Eigen::VectorXd& phases() const noexcept { return eig_.phases; }
  const Eigen::MatrixXcd& eigenvectors() const noexcept { return eig_.vectors; }

  /// One step of the path map in coordinates: x -> A^T x.
  void step(Eigen::VectorXd& x, RandomStream&) const { x = At_ * x; }

  /// R acting on coordinates of an H-vector.
  Eigen::VectorXd act(const Eigen::VectorXd& c) const { return A_ * c; }

  HVector act(const HVector& h) const {
    check(h.grid);
    return HVector::from_coordinates(h.grid, act(h.coordinates()));
  }

  /// (R^n h, h)_H computed from the spectral weights.
  double correlation(const HVector& h, int n) const;

  void check(const Grid& g) const {
    if (g.size() != dimension()) throw dimension_error("grid does not match rotation dimension");
  }

 private:
  explicit RotationOp(Eigen::MatrixXd A)
      : A_(std::move(A)), At_(A_.transpose()), eig_(unitary_eigensystem(A_)) {}

  Eigen::MatrixXd A_;
  Eigen::MatrixXd At_;
  UnitaryEigensystem eig_;
};

inline RotationOp rotation_from_matrix(Eigen::MatrixXd A, double tol = 1e-10) {
  return RotationOp::from_matrix(std::move(A), tol);
}

/// Rotation by alpha in the (e_i, e_j) plane: R e_i = cos e_i + sin e_j.
inline Eigen::MatrixXd planar_rotation_matrix(int m, double alpha, int i = 0, int j = 1) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
  A(i, i) = std::cos(alpha);
  A(j, j) = std::cos(alpha);
  A(j, i) = std::sin(alpha);
  A(i, j) = -std::sin(alpha);
  return A;
}

/// Cyclic permutation R e_i = e_{i+1 mod m}; eigenphases 2 pi k / m with
/// equal spectral weight 1/m for every e_i.
inline Eigen::MatrixXd cyclic_rotation_matrix(int m) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) A((j + 1) % m, j) = 1.0;
  return A;
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign fixed).
inline Eigen::MatrixXd haar_orthogonal(int m, RandomStream& rng) {
  Eigen::MatrixXd G(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd Rm = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j)
    if (Rm(j, j) < 0.0) Q.col(j) *= -1.0;
  return Q;
}

inline Path apply_rotation(const RotationOp& R, const Path& p) {
  R.check(p.grid);
  return Path::from_coordinates(p.grid, R.matrix().transpose() * p.coordinates(), p.stream);
}

// ---------------------------------------------------------------------------
// Chaos representations up to order two.

struct ChaosPair {
  double coef;
  HVector u;
  HVector v;
};

/// F = constant + delta(first) + sum coef * I_2(u (.) v), where
/// I_2(u (.) v) = delta u * delta v - (u, v)_H.
struct ChaosRep {
  Grid grid;
  double constant = 0.0;
  HVector first;
  std::vector<ChaosPair> second;

  explicit ChaosRep(Grid g, double c = 0.0) : grid(g), constant(c), first(HVector::zero(g)) {}

  double evaluate(const Eigen::VectorXd& x) const {
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
    CompensatedSum s;
    s.add(constant);
    s.add(scale * first.density.dot(x));
    for (const auto& p : second) {
      const double du = scale * p.u.density.dot(x);
      const double dv = scale * p.v.density.dot(x);
      s.add(p.coef * (du * dv - inner_h(p.u, p.v)));
    }
    return s.value();
  }

  double evaluate(const Path& p) const {
    require_same_grid(grid, p.grid, "ChaosRep::evaluate");
    return evaluate(p.coordinates());
  }
};

/// Representation of F o T: every first and second order factor is mapped by R.
inline ChaosRep chaos_pushforward(const RotationOp& R, const ChaosRep& F) {
  R.check(F.grid);
  ChaosRep out(F.grid, F.constant);
  out.first = R.act(F.first);
  for (const auto& p : F.second) out.second.push_back({p.coef, R.act(p.u), R.act(p.v)});
  return out;
}

// ---------------------------------------------------------------------------
// Spectral measures.

struct SpectralAtom {
  double theta;
  double weight;
};

struct SpectralMeasure {
  std::vector<SpectralAtom> atoms;  // ascending theta in (0, 2pi]

  double total() const {
    CompensatedSum s;
    for (const auto& a : atoms) s.add(a.weight);
    return s.value();
  }

  /// d(Pi_theta h, h) mass of [0, theta].
  double cdf(double theta) const {
    CompensatedSum s;
    for (const auto& a : atoms)
      if (a.theta <= theta) s.add(a.weight);
    return s.value();
  }

  const SpectralAtom& heaviest() const {
    return *std::max_element(atoms.begin(), atoms.end(),
                             [](const auto& a, const auto& b) { return a.weight < b.weight; });
  }
};

/// Per-eigenvector weights |<v_k, h>|^2 (unmerged, aligned with R.phases()).
inline Eigen::VectorXd spectral_weights(const RotationOp& R, const HVector& h) {
  R.check(h.grid);
  const Eigen::VectorXcd c = h.coordinates().cast<std::complex<double>>();
  return (R.eigenvectors().adjoint() * c).cwiseAbs2();
}

inline SpectralMeasure spectral_measure(const RotationOp& R, const HVector& h,
                                        double merge_tol = 1e-9) {
  const double norm2 = inner_h(h, h);
  if (!(norm2 > 0.0)) throw degenerate_input_error("spectral measure of the zero vector");
  const Eigen::VectorXd w = spectral_weights(R, h);
  const Eigen::VectorXd& th = R.phases();

  SpectralMeasure mu;
  for (Eigen::Index k = 0; k < th.size(); ++k) {
    if (!mu.atoms.empty() && th[k] - mu.atoms.back().theta <= merge_tol)
      mu.atoms.back().weight += w[k];
    else
      mu.atoms.push_back({th[k], w[k]});
  }
  // Phases just above 0 belong to the atom at 2pi.
  if (mu.atoms.size() > 1 && mu.atoms.front().theta + (two_pi - mu.atoms.back().theta) <= merge_tol) {
    mu.atoms.back().weight += mu.atoms.front().weight;
    mu.atoms.erase(mu.atoms.begin());
  }
  const double floor = 1e-14 * norm2;
  std::erase_if(mu.atoms, [floor](const SpectralAtom& a) { return a.weight <= floor; });
  return mu;
}

/// a[n] = Re sum_k exp(i n theta_k) w_k = (R^n h, h)_H, n = 0..n_max.
inline std::vector<double> autocorrelation(const RotationOp& R, const HVector& h, int n_max) {
  const Eigen::VectorXd w = spectral_weights(R, h);
  const Eigen::VectorXd& th = R.phases();
  std::vector<double> a(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    CompensatedSum s;
    for (Eigen::Index k = 0; k < th.size(); ++k) s.add(w[k] * std::cos(n * th[k]));
    a[n] = s.value();
  }
  return a;
}

inline double RotationOp::correlation(const HVector& h, int n) const {
  return autocorrelation(*this, h, n).back();
}

// ---------------------------------------------------------------------------
// The truncated basis shift x -> (x_2, ..., x_m, fresh).

class BasisShift {
 public:
  explicit BasisShift(int m) : m_(m) {
    if (m < 2) throw std::invalid_argument("basis shift needs m >= 2");
  }

  int dimension() const noexcept { return m_; }
  bool invertible() const noexcept { return false; }

  void step(Eigen::VectorXd& x, RandomStream& fresh) const {
    for (int i = 0; i + 1 < m_; ++i) x[i] = x[i + 1];
    x[m_ - 1] = fresh.normal();
  }

  /// E[delta h o T^n * delta h] = sum_{i + n < m} c_i c_{i+n}.
  double correlation(const HVector& h, int n) const {
    if (h.grid.size() != m_) throw dimension_error("grid does not match basis shift dimension");
    const Eigen::VectorXd c = h.coordinates();
    CompensatedSum s;
    for (int i = 0; i + n < m_; ++i) s.add(c[i] * c[i + n]);
    return s.value();
  }

 private:
  int m_;
};

inline BasisShift basis_shift_operator(int m) { return BasisShift(m); }

// ---------------------------------------------------------------------------
// Ergodic classification.

enum class Verdict { non_ergodic, ergodic_limit, mixing_like, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::non_ergodic: return "NON-ERGODIC";
    case Verdict::ergodic_limit: return "ERGODIC-LIMIT";
    case Verdict::mixing_like: return "MIXING-LIKE";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

/// |delta z| for an eigenvector z of R with eigenvalue exp(i phase):
/// delta z o T = exp(i phase) delta z, so the modulus is T-invariant.
struct InvariantWitness {
  double phase = 0.0;
  Eigen::VectorXcd z;  // coordinates

  double evaluate(const Eigen::VectorXd& x) const {
    return std::abs(z.cwiseProduct(x.cast<std::complex<double>>()).sum());
  }
  double evaluate(const Path& p) const { return evaluate(p.coordinates()); }
};

/// Projection of h onto the eigenspace of R for the phase tau.
inline InvariantWitness eigenspace_witness(const RotationOp& R, const HVector& h, double tau,
                                           double merge_tol = 1e-9) {
  const Eigen::VectorXcd c = h.coordinates().cast<std::complex<double>>();
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(c.size());
  for (Eigen::Index k = 0; k < R.phases().size(); ++k)
    if (phase_distance(R.phases()[k], tau) <= merge_tol) {
      const auto v = R.eigenvectors().col(k);
      z += v.dot(c) * v;  // <v, c> v
    }
  return {tau, std::move(z)};
}

struct Classification {
  Verdict verdict = Verdict::inconclusive;
  std::vector<SpectralMeasure> probe_measures;           // rotations only
  std::vector<std::vector<double>> probe_autocorrelations;
  std::optional<InvariantWitness> witness;
  int witness_probe = -1;
  double heaviest_atom = 0.0;
  std::string note;
};

inline void require_spanning(const std::vector<HVector>& probes, int m) {
  if (probes.empty()) throw rank_deficient_error("no probes given");
  Eigen::MatrixXd P(m, static_cast<Eigen::Index>(probes.size()));
  for (std::size_t k = 0; k < probes.size(); ++k) {
    if (probes[k].grid.size() != m) throw dimension_error("probe grid does not match operator");
    P.col(static_cast<Eigen::Index>(k)) = probes[k].coordinates();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(P);
  qr.setThreshold(1e-10);
  if (qr.rank() < m)
    throw rank_deficient_error("probes span a subspace of dimension " + std::to_string(qr.rank()) +
                               " < " + std::to_string(m));
}

inline std::vector<HVector> coordinate_probes(Grid g) {
  std::vector<HVector> out;
  for (int i = 0; i < g.size(); ++i) out.push_back(HVector::basis(g, i));
  return out;
}

inline Classification classify(const RotationOp& R, const std::vector<HVector>& probes,
                               double atom_tol = 1e-6, double merge_tol = 1e-9) {
  require_spanning(probes, R.dimension());
  Classification out;
  double best = -1.0;
  double best_theta = two_pi;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    out.probe_measures.push_back(spectral_measure(R, probes[k], merge_tol));
    const auto& atom = out.probe_measures.back().heaviest();
    if (atom.weight > best) {
      best = atom.weight;
      best_theta = atom.theta;
      out.witness_probe = static_cast<int>(k);
    }
  }
  out.heaviest_atom = best;
  if (best > atom_tol) {
    out.verdict = Verdict::non_ergodic;
    out.witness = eigenspace_witness(R, probes[out.witness_probe], best_theta, merge_tol);
    out.note =
        "finite-dimensional unitary operators have pure point spectrum, so every such "
        "transformation is non-ergodic; the witness |delta z| is invariant";
  } else {
    out.verdict = Verdict::ergodic_limit;
    out.note = "no probe atom exceeds atom_tol: spectral measures are equidistributed at this "
               "resolution (the transformation is still non-ergodic in finite dimension)";
  }
  return out;
}

/// The basis shift has no spectral measure; it is judged by its exact
/// autocorrelations, which vanish once the lag exceeds the probe support.
inline Classification classify(const BasisShift& S, const std::vector<HVector>& probes,
                               int horizon, double tol = 1e-12) {
  require_spanning(probes, S.dimension());
  Classification out;
  bool vanishing = true;
  for (const auto& h : probes) {
    const Eigen::VectorXd c = h.coordinates();
    int lo = -1, hi = -1;
    for (int i = 0; i < c.size(); ++i)
      if (c[i] != 0.0) {
        if (lo < 0) lo = i;
        hi = i;
      }
    const int support = lo < 0 ? 0 : hi - lo + 1;
    std::vector<double> a;
    for (int n = 0; n <= horizon; ++n) {
      a.push_back(S.correlation(h, n));
      if (n >= std::max(support, 1) && std::abs(a.back()) > tol) vanishing = false;
    }
    out.probe_autocorrelations.push_back(std::move(a));
  }
  out.verdict = vanishing ? Verdict::mixing_like : Verdict::inconclusive;
  out.note = "non-invertible basis shift: autocorrelations vanish beyond each probe's support";
  return out;
}

// ---------------------------------------------------------------------------
// Invariant second chaos.

struct InvariantChaos {
  int j;
  int k;
  double phase_sum;  // theta_j + theta_k reduced to (-pi, pi]
  ChaosRep functional;
};

/// Real functionals I_2(v_j (.) v_k) (real or imaginary part) for every
/// eigenphase pair with theta_j + theta_k = 0 mod 2pi.
inline std::vector<InvariantChaos> find_invariant_chaos2(const RotationOp& R, const Grid& grid,
                                                         double phase_tol = 1e-9) {
  R.check(grid);
  const Eigen::VectorXd& th = R.phases();
  const Eigen::MatrixXcd& V = R.eigenvectors();
  std::vector<InvariantChaos> out;
  for (int j = 0; j < th.size(); ++j)
    for (int k = j; k < th.size(); ++k) {
      const double s = std::remainder(th[j] + th[k], two_pi);
      if (std::abs(s) > phase_tol) continue;
      const Eigen::VectorXd a = V.col(j).real(), b = V.col(j).imag();
      const Eigen::VectorXd c = V.col(k).real(), d = V.col(k).imag();
      auto sym = [](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        return Eigen::MatrixXd(0.5 * (u * v.transpose() + v * u.transpose()));
      };
      const double re_norm = (sym(a, c) - sym(b, d)).norm();
      auto hv = [&](const Eigen::VectorXd& u) { return HVector::from_coordinates(grid, u); };
      ChaosRep F(grid);
      if (re_norm > 1e-8) {
        F.second.push_back({1.0, hv(a), hv(c)});
        F.second.push_back({-1.0, hv(b), hv(d)});
      } else {
        F.second.push_back({1.0, hv(a), hv(d)});
        F.second.push_back({1.0, hv(b), hv(c)});
      }
      out.push_back({j, k, s, std::move(F)});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Mixing correlations of Wick exponentials.

struct MixingCorrelation {
  std::vector<double> analytic;        // exp((R^n h, h)) - 1
  std::vector<double> monte_carlo;     // E[(rho o T^n - 1)(rho - 1)]
  std::vector<double> standard_error;
};

/// rho(delta h) as a function of coordinates.
inline auto wick_observable(const HVector& h) {
  const Eigen::VectorXd c = h.coordinates();
  const double half = 0.5 * c.squaredNorm();
  return [c, half](const Eigen::VectorXd& x) { return std::exp(c.dot(x) - half); };
}

template <CoordinateMap Map>
MixingCorrelation wick_mixing_correlation(const Map& map, const HVector& h, int n_max,
                                          const McConfig& cfg) {
  auto rho = wick_observable(h);
  auto centered = [&rho](const Eigen::VectorXd& x) { return rho(x) - 1.0; };
  const LagSeries s = lagged_products(map, centered, centered, n_max, cfg);
  MixingCorrelation out;
  out.monte_carlo = s.mean;
  out.standard_error = s.standard_error;
  for (int n = 0; n <= n_max; ++n) out.analytic.push_back(std::expm1(map.correlation(h, n)));
  return out;
}

inline MixingCorrelation mixing_correlation(const RotationOp& R, const HVector& h, int n_max,
                                            const McConfig& cfg) {
  R.check(h.grid);
  return wick_mixing_correlation(R, h, n_max, cfg);
}

/// Averaged periodogram of the stationary sequence X_n = delta(R^n h),
/// n = 0..length-1, at frequencies 2 pi b / length, b = 1..length.
inline std::vector<double> sequence_periodogram(const RotationOp& R, const HVector& h, int length,
                                                const McConfig& cfg) {
  R.check(h.grid);
  const Eigen::VectorXd c = h.coordinates();
  std::vector<double> per(cfg.paths * static_cast<std::size_t>(length));
  for_each_path(R, cfg, [&](std::size_t i, Eigen::VectorXd& x, RandomStream& fresh) {
    std::vector<double> seq(length);
    for (int n = 0; n < length; ++n) {
      if (n > 0) R.step(x, fresh);
      seq[n] = c.dot(x);
    }
    for (int b = 1; b <= length; ++b) {
      std::complex<double> acc = 0.0;
      for (int n = 0; n < length; ++n) acc += seq[n] * std::polar(1.0, -two_pi * b * n / length);
      per[static_cast<std::size_t>(b - 1) * cfg.paths + i] = std::norm(acc) / length;
    }
  });
  std::vector<double> out(length);
  for (int b = 0; b < length; ++b)
    out[b] = compensated_mean(std::span<const double>(per.data() + b * cfg.paths, cfg.paths));
  return out;
}

}  // namespace wienerdyn
