#pragma once

/// @file
/// Eigensystems of real orthogonal matrices.
///
/// A real orthogonal matrix is normal, so its real Schur form is block
/// diagonal with 1x1 blocks (+1 or -1) and 2x2 rotation blocks. The Schur
/// vectors then give an orthonormal complex eigenbasis even when eigenvalues
/// repeat, which a general eigensolver does not guarantee.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "numeric.hpp"

namespace wienerdyn {

/// max |A^T A - I|.
inline double orthogonality_residual(const Eigen::MatrixXd& A) {
  const auto n = A.rows();
  return (A.transpose() * A - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

struct UnitaryEigensystem {
  Eigen::VectorXd phases;   // ascending, in (0, 2pi]
  Eigen::MatrixXcd vectors; // column k: unit eigenvector for exp(i phases[k])
};

inline UnitaryEigensystem unitary_eigensystem(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw dimension_error("orthogonal matrix must be square");
  const Eigen::Index n = A.rows();
  Eigen::RealSchur<Eigen::MatrixXd> schur(A);
  const Eigen::MatrixXd& T = schur.matrixT();
  const Eigen::MatrixXd& Q = schur.matrixU();

  std::vector<double> phases;
  std::vector<Eigen::VectorXcd> vecs;
  phases.reserve(n);
  vecs.reserve(n);
  const std::complex<double> I(0.0, 1.0);
  for (Eigen::Index i = 0; i < n;) {
    if (i + 1 < n && T(i + 1, i) != 0.0) {
      // [[p, -s], [s, p]]: (q1 - i q2)/sqrt2 has eigenvalue exp(i atan2(s, p)).
      const double p = 0.5 * (T(i, i) + T(i + 1, i + 1));
      const double s = 0.5 * (T(i + 1, i) - T(i, i + 1));
      const double alpha = std::atan2(s, p);
      Eigen::VectorXcd v = (Q.col(i).cast<std::complex<double>>() -
                            I * Q.col(i + 1).cast<std::complex<double>>()) /
                           std::sqrt(2.0);
      phases.push_back(normalize_phase(alpha));
      vecs.push_back(v);
      phases.push_back(normalize_phase(-alpha));
      vecs.push_back(v.conjugate());
      i += 2;
    } else {
      phases.push_back(T(i, i) >= 0.0 ? two_pi : std::numbers::pi);
      vecs.push_back(Q.col(i).cast<std::complex<double>>());
      i += 1;
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return phases[a] < phases[b]; });
  UnitaryEigensystem out{Eigen::VectorXd(n), Eigen::MatrixXcd(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.phases[k] = phases[order[k]];
    out.vectors.col(k) = vecs[order[k]];
  }
  return out;
}

}  // namespace wienerdyn
