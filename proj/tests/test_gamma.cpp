#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "wienerdyn/gamma.hpp"

using namespace wienerdyn;
using std::numbers::pi;

namespace {

double bin_width(int bins = 512) { return two_pi / bins; }

GammaProcess piecewise_example(Grid g) {
  return gamma_piecewise(g, {{0.5, planar_rotation_matrix(2, pi / 3)}, {1.0, planar_rotation_matrix(2, pi / 2)}});
}

Eigen::MatrixXd axis_rotation(double a) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
  A.block(0, 0, 2, 2) = planar_rotation_matrix(2, a);
  return A;
}

}  // namespace

TEST(BuildGamma, IdentityPhasesAtTwoPi) {
  Grid g(16);
  const GammaProcess G = gamma_constant(g, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_TRUE((G.phases.array() == two_pi).all());
}

TEST(BuildGamma, SweepPhasesAreTheRotationAngle) {
  Grid g(64);
  const GammaProcess G = gamma_sweep(g, 2);
  for (int i = 0; i < 64; ++i) {
    const double angle = two_pi * g.midpoint(i);
    EXPECT_NEAR(G.phases(i, 0), std::min(angle, two_pi - angle), 1e-10);
    EXPECT_NEAR(G.phases(i, 1), std::max(angle, two_pi - angle), 1e-10);
  }
}

TEST(BuildGamma, AxisRotationPinsOnePhase) {
  Grid g(8);
  const GammaProcess G = gamma_constant(g, axis_rotation(1.2));
  for (int i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ(G.phases(i, 2), two_pi);
}

TEST(BuildGamma, PhasesSortedAndFramesOrthonormal) {
  Grid g(32);
  RandomStream rng(4, StreamKind::gamma, 0);
  const GammaProcess G = gamma_random_flow(g, 4, rng);
  for (int i = 0; i < 32; ++i) {
    for (int j = 1; j < 4; ++j) EXPECT_LE(G.phases(i, j - 1), G.phases(i, j));
    const Eigen::MatrixXcd& F = G.frames[i];
    EXPECT_LT((F.adjoint() * F - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(BuildGamma, RejectsNonOrthogonalSamples) {
  Grid g(4);
  std::vector<Eigen::MatrixXd> s(4, Eigen::MatrixXd::Identity(2, 2));
  s[2](0, 0) = 1.5;
  EXPECT_THROW(build_gamma(g, s), not_unitary_error);
  EXPECT_THROW(build_gamma(g, std::vector<Eigen::MatrixXd>(3, Eigen::MatrixXd::Identity(2, 2))), dimension_error);
}

TEST(ApplyGamma, IdentityAndRoundTrip) {
  Grid g(16);
  RandomStream rng(5, StreamKind::paths, 0);
  const PathBundle W = sample_wiener_bundle(g, 3, rng);
  const GammaProcess I = gamma_constant(g, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_LT((apply_gamma(I, W).increments - W.increments).cwiseAbs().maxCoeff(), 1e-16);

  RandomStream grng(5, StreamKind::gamma, 1);
  const GammaProcess G = gamma_random_haar(g, 3, grng);
  std::vector<Eigen::MatrixXd> inv;
  for (const auto& s : G.samples) inv.push_back(s.transpose());
  const GammaProcess Ginv = build_gamma(g, inv);
  EXPECT_LT((apply_gamma(Ginv, apply_gamma(G, W)).increments - W.increments).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ApplyGamma, ConstantGammaKeepsIndependentComponents) {
  Grid g(8);
  const GammaProcess G = gamma_constant(g, axis_rotation(0.9));
  const std::size_t N = 40000;
  double s01 = 0.0, s00 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    RandomStream rng(6, StreamKind::paths, i);
    const PathBundle Y = apply_gamma(G, sample_wiener_bundle(g, 3, rng));
    const Eigen::RowVectorXd y1 = Y.increments.colwise().sum();  // Y(1)
    s01 += y1[0] * y1[1];
    s00 += y1[0] * y1[0];
  }
  EXPECT_NEAR(s01 / N, 0.0, 4.0 / std::sqrt(N));
  EXPECT_NEAR(s00 / N, 1.0, 4.0 * std::sqrt(2.0 / N));
}

TEST(LevelDistribution, IdentityIsAUnitStepAtTwoPi) {
  Grid g(64);
  const GammaProcess G = gamma_constant(g, Eigen::MatrixXd::Identity(2, 2));
  const LevelDistribution L = level_distribution(G, 0);
  EXPECT_DOUBLE_EQ(L.F.back(), 1.0);
  EXPECT_DOUBLE_EQ(L.F[L.F.size() - 2], 0.0);
  ASSERT_EQ(L.jumps.size(), 1u);
  EXPECT_DOUBLE_EQ(L.jumps[0].theta, two_pi);
  EXPECT_DOUBLE_EQ(L.jumps[0].size, 1.0);
}

TEST(LevelDistribution, SweepIsContinuous) {
  Grid g(256);
  const GammaProcess G = gamma_sweep(g, 2);
  const LevelDistribution L0 = level_distribution(G, 0), L1 = level_distribution(G, 1);
  EXPECT_TRUE(L0.jumps.empty());
  EXPECT_TRUE(L1.jumps.empty());
  for (std::size_t b = 0; b < L0.thetas.size(); ++b) {
    const double theta = L0.thetas[b];
    // averaged over the phase index the law is uniform on (0, 2pi]
    EXPECT_NEAR(0.5 * (L0.F[b] + L1.F[b]), theta / two_pi, 2.0 * g.dt());
    EXPECT_NEAR(L0.F[b], std::min(theta / pi, 1.0), 2.0 * g.dt());
  }
}

TEST(LevelDistribution, PiecewiseHasTwoHalfJumps) {
  Grid g(256);
  const LevelDistribution L = level_distribution(piecewise_example(g), 0);
  ASSERT_EQ(L.jumps.size(), 2u);
  EXPECT_NEAR(L.jumps[0].theta, pi / 3, bin_width());
  EXPECT_NEAR(L.jumps[1].theta, pi / 2, bin_width());
  EXPECT_NEAR(L.jumps[0].size, 0.5, 2.0 * g.dt());
  EXPECT_NEAR(L.jumps[1].size, 0.5, 2.0 * g.dt());
}

TEST(LevelDistribution, IsNonDecreasingAndEndsAtOne) {
  Grid g(64);
  RandomStream rng(7, StreamKind::gamma, 0);
  const GammaProcess G = gamma_random_flow(g, 3, rng);
  for (int j = 0; j < 3; ++j) {
    const LevelDistribution L = level_distribution(G, j);
    for (std::size_t b = 1; b < L.F.size(); ++b) EXPECT_LE(L.F[b - 1], L.F[b]);
    EXPECT_NEAR(L.F.back(), 1.0, 1e-12);
  }
}

TEST(GammaErgodicity, Verdicts) {
  Grid g(256);
  EXPECT_EQ(gamma_ergodicity(gamma_constant(g, planar_rotation_matrix(2, 1.0))).verdict, Verdict::non_ergodic);
  EXPECT_EQ(gamma_ergodicity(gamma_sweep(g, 2)).verdict, Verdict::ergodic_limit);
  const GammaVerdict v = gamma_ergodicity(piecewise_example(g));
  EXPECT_EQ(v.verdict, Verdict::non_ergodic);
  EXPECT_FALSE(v.offenders.empty());
}

TEST(GammaErgodicity, OddDimensionIsNonErgodic) {
  Grid g(128);
  for (std::uint64_t k = 0; k < 10; ++k) {
    RandomStream rng(8, StreamKind::gamma, k);
    const GammaVerdict v = gamma_ergodicity(gamma_random_flow(g, 3, rng));
    EXPECT_EQ(v.verdict, Verdict::non_ergodic);
    EXPECT_TRUE(v.odd_dimension);
    EXPECT_TRUE(v.corollary_holds);
  }
}

TEST(PiThetaNorm, FullResolutionIsTheNorm) {
  Grid g(32);
  RandomStream rng(9, StreamKind::gamma, 0);
  const GammaProcess G = gamma_random_flow(g, 3, rng);
  RandomStream hr(9, StreamKind::probes, 0);
  Eigen::MatrixXd d(32, 3);
  for (int i = 0; i < 32; ++i)
    for (int k = 0; k < 3; ++k) d(i, k) = hr.normal();
  EXPECT_NEAR(pi_theta_norm(G, d, two_pi), g.dt() * d.squaredNorm(), 1e-10);
  double prev = 0.0;
  for (int b = 1; b <= 64; ++b) {
    const double v = pi_theta_norm(G, d, two_pi * b / 64);
    EXPECT_GE(v, prev - 1e-14);
    prev = v;
  }
}

TEST(PiThetaNorm, IdentityIsZeroBelowTwoPi) {
  Grid g(16);
  const GammaProcess G = gamma_constant(g, Eigen::MatrixXd::Identity(2, 2));
  const Eigen::MatrixXd d = Eigen::MatrixXd::Ones(16, 2);
  EXPECT_EQ(pi_theta_norm(G, d, two_pi - 1e-6), 0.0);
  EXPECT_NEAR(pi_theta_norm(G, d, two_pi), 2.0, 1e-12);
}

TEST(PiThetaNorm, SweepIsUniform) {
  Grid g(256);
  const GammaProcess G = gamma_sweep(g, 2);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(256, 2);
  d.col(0).setOnes();
  for (int b = 1; b <= 16; ++b) {
    const double theta = two_pi * b / 16;
    EXPECT_NEAR(pi_theta_norm(G, d, theta), theta / two_pi, 2.0 * g.dt());
  }
}

TEST(PiThetaNorm, AgreesWithTheInducedRotation) {
  Grid g(24);
  RandomStream rng(10, StreamKind::gamma, 0);
  const GammaProcess G = gamma_random_flow(g, 2, rng);
  RandomStream hr(10, StreamKind::probes, 0);
  Eigen::MatrixXd d(24, 2);
  for (int i = 0; i < 24; ++i)
    for (int k = 0; k < 2; ++k) d(i, k) = hr.normal();
  const SpectralMeasure mu = spectral_measure(gamma_rotation(G), flatten_bundle(g, d));
  for (int b = 1; b <= 32; ++b) {
    const double theta = two_pi * b / 32 - 1e-7;
    EXPECT_NEAR(mu.cdf(theta), pi_theta_norm(G, d, theta), 1e-8);
  }
}
