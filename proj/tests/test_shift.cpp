#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "wienerdyn/montecarlo.hpp"
#include "wienerdyn/shift.hpp"

using namespace wienerdyn;

namespace {

Kernel2 unit_reflection(Grid g) { return Kernel2::reflection(HVector::constant(g, 1.0)); }

Kernel2 random_unitary(Grid g, std::uint64_t index) {
  RandomStream rng(2024, StreamKind::kernels, index);
  return random_unitary_kernel(g, rng);
}

Path sample(Grid g, std::uint64_t i) {
  RandomStream rng(77, StreamKind::paths, i);
  return sample_wiener(g, rng);
}

// det2 through an LU determinant: det(I + K) exp(-tr K).
std::complex<double> det2_lu(const Kernel2& K) {
  const Eigen::MatrixXd op = K.operator_matrix();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(op.rows(), op.cols());
  return Eigen::PartialPivLU<Eigen::MatrixXd>(I + op).determinant() * std::exp(-op.trace());
}

}  // namespace

TEST(CheckUnitaryShift, ZeroKernel) {
  const ShiftReport r = check_unitary_shift(Kernel2::zero(Grid(8)), 1e-10);
  EXPECT_EQ(r.b2_residual, 0.0);
  EXPECT_NEAR(r.minus_one_eigen_gap, 1.0, 1e-14);
  EXPECT_TRUE(r.is_unitary);
}

TEST(CheckUnitaryShift, Reflection) {
  const ShiftReport r = check_unitary_shift(unit_reflection(Grid(16)), 1e-10);
  EXPECT_LT(r.b2_residual, 1e-12);
  EXPECT_NEAR(r.minus_one_eigen_gap, 1.0, 1e-10);
  EXPECT_TRUE(r.is_unitary);
}

TEST(CheckUnitaryShift, ProjectionNegationFailsTheSpectralCondition) {
  Grid g(16);
  const HVector e = HVector::constant(g, 1.0);
  const ShiftReport r = check_unitary_shift(Kernel2(g, -1.0 * e.density * e.density.transpose()), 1e-10);
  EXPECT_LT(r.minus_one_eigen_gap, 1e-10);
  EXPECT_FALSE(r.is_unitary);
}

TEST(CheckUnitaryShift, RandomExponentiatedSkewKernels) {
  Grid g(16);
  for (std::uint64_t k = 0; k < 5; ++k) {
    const Kernel2 K = random_unitary(g, k);
    EXPECT_TRUE(check_unitary_shift(K, 1e-10).is_unitary);
    KernelShiftMap map(K);
    const Eigen::MatrixXd M = map.matrix();
    EXPECT_LT((M.transpose() * M - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ApplyShift, ZeroKernelLeavesPathUnchanged) {
  Grid g(8);
  const Path p = sample(g, 0);
  EXPECT_EQ(apply_shift(Kernel2::zero(g), p).increments, p.increments);
}

TEST(ApplyShift, ReflectionFlipsTheDirectionAndKeepsTheComplement) {
  Grid g(8);
  const HVector e = HVector::constant(g, 1.0);
  const HVector f = HVector::from_function(g, [](double t) { return t - 0.5; });  // orthogonal to e
  ASSERT_NEAR(inner_h(e, f), 0.0, 1e-15);
  const Path p = sample(g, 1);
  const Path y = apply_shift(unit_reflection(g), p);
  EXPECT_NEAR(divergence(e, y), -divergence(e, p), 1e-13);
  EXPECT_NEAR(divergence(f, y), divergence(f, p), 1e-13);
}

TEST(ApplyShift, MatchesTheCoordinateMap) {
  Grid g(12);
  const Kernel2 K = random_unitary(g, 9);
  const Path p = sample(g, 2);
  Eigen::VectorXd x = p.coordinates();
  RandomStream unused(0, 0);
  KernelShiftMap(K).step(x, unused);
  EXPECT_LT((apply_shift(K, p).coordinates() - x).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(ApplyShift, GridMismatch) {
  EXPECT_THROW(apply_shift(Kernel2::zero(Grid(4)), sample(Grid(5), 0)), dimension_error);
}

TEST(ApplyShift, ComposedKernelShiftsInSequence) {
  Grid g(10);
  const Kernel2 K = random_unitary(g, 1), Q = random_unitary(g, 2);
  const Path p = sample(g, 3);
  const Path two_step = apply_shift(K, apply_shift(Q, p));
  const Path one_step = apply_shift(kernel_compose(K, Q), p);
  EXPECT_LT((two_step.increments - one_step.increments).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(ApplyShift, ReflectionPreservesWienerCovariance) {
  Grid g(64);
  const Kernel2 K = unit_reflection(g);
  const std::size_t N = 100000;
  const std::vector<int> idx{16, 32, 48, 64};
  std::vector<double> y(idx.size() * N);
  parallel_for(N, [&](std::size_t i) {
    const Eigen::VectorXd v = apply_shift(K, sample(g, i)).values();
    for (std::size_t a = 0; a < idx.size(); ++a) y[a * N + i] = v[idx[a]];
  });
  double worst = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a; b < idx.size(); ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < N; ++i) s += y[a * N + i] * y[b * N + i];
      worst = std::max(worst, std::abs(s / N - g.time(idx[a])));
    }
  EXPECT_LT(worst, 0.02);
}

TEST(ChaosShift, FirstOrderEqualsRankOneKernelShift) {
  Grid g(8);
  const HVector gv = HVector::from_function(g, [](double t) { return std::sin(4 * t); });
  const HVector h = HVector::from_function(g, [](double t) { return 1.0 + t; });
  const Path p = sample(g, 4);
  const std::vector<ChaosKernel> ks{ChaosKernel(1, gv, h)};
  const Path a = apply_chaos_shift(ks, p);
  const Path b = apply_shift(Kernel2::rank_one(h, gv), p);
  EXPECT_LT((a.increments - b.increments).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ChaosShift, EmptyListIsTheIdentity) {
  Grid g(8);
  const Path p = sample(g, 5);
  EXPECT_LT((apply_chaos_shift({}, p).increments - p.increments).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ChaosShift, SecondOrderIncrementFollowsTheHermiteFormula) {
  Grid g(6);
  const HVector gv = HVector::constant(g, 0.5), h = HVector::constant(g, 2.0);
  const Path p = sample(g, 6);
  const Path y = apply_chaos_shift(std::vector{ChaosKernel(2, gv, h)}, p);
  const double d = divergence(h, p), n2 = inner_h(h, h);
  for (int i = 0; i < 6; ++i)
    EXPECT_NEAR(y.increments[i], p.increments[i] + g.dt() * 0.5 * (d * d - n2), 1e-14);
}

TEST(InvertShift, ZeroAndReflection) {
  Grid g(16);
  EXPECT_LT(invert_shift(Kernel2::zero(g)).k.cwiseAbs().maxCoeff(), 1e-15);
  const Kernel2 R = unit_reflection(g);
  EXPECT_LT((invert_shift(R).k - R.k).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(InvertShift, PathwiseRoundTrip) {
  Grid g(16);
  for (std::uint64_t k = 0; k < 5; ++k) {
    const Kernel2 K = random_unitary(g, 10 + k);
    const Kernel2 Kinv = invert_shift(K);
    EXPECT_LT(kernel_compose(K, Kinv).k.cwiseAbs().maxCoeff() * g.dt(), 1e-10);
    const Path p = sample(g, k);
    EXPECT_LT((apply_shift(Kinv, apply_shift(K, p)).increments - p.increments).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(InvertShift, SingularKernelIsRejected) {
  Grid g(8);
  const HVector e = HVector::constant(g, 1.0);
  EXPECT_THROW(invert_shift(Kernel2(g, -1.0 * e.density * e.density.transpose())), singular_shift_error);
}

TEST(CarlemanDet2, ZeroKernelIsOne) {
  const Det2 d = carleman_det2(Kernel2::zero(Grid(8)));
  EXPECT_NEAR(d.log_modulus, 0.0, 1e-15);
  EXPECT_NEAR(d.phase, 0.0, 1e-15);
}

TEST(CarlemanDet2, ReflectionIsMinusESquared) {
  const Det2 d = carleman_det2(unit_reflection(Grid(16)));
  EXPECT_NEAR(d.modulus(), std::exp(2.0), 1e-10);
  EXPECT_NEAR(d.value().real(), -std::exp(2.0), 1e-10);
  EXPECT_NEAR(d.value().imag(), 0.0, 1e-10);
}

TEST(CarlemanDet2, AgreesWithLuDeterminant) {
  Grid g(12);
  RandomStream rng(3, StreamKind::kernels, 99);
  Eigen::MatrixXd k(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) k(i, j) = 0.5 * rng.normal();
  for (const Kernel2& K : {Kernel2(g, k), random_unitary(g, 3), unit_reflection(g)}) {
    const std::complex<double> a = carleman_det2(K).value(), b = det2_lu(K);
    EXPECT_LT(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(b)));
  }
}

TEST(CarlemanDet2, ModulusIsHalfHilbertSchmidtSquared) {
  Grid g(16);
  for (std::uint64_t k = 0; k < 10; ++k) {
    const Kernel2 K = random_unitary(g, 20 + k);
    const double hs = hs_norm(K);
    EXPECT_NEAR(carleman_det2(K).log_modulus, 0.5 * hs * hs, 1e-10);
  }
}

TEST(RadonNikodym, ZeroKernelIsExactlyZero) {
  Grid g(8);
  const RadonNikodymReport r = log_radon_nikodym(Kernel2::zero(g), sample(g, 0));
  EXPECT_EQ(r.log_Lambda, 0.0);
  EXPECT_EQ(r.log_det2, 0.0);
}

TEST(RadonNikodym, NonUnitaryKernelIsAPreconditionError) {
  Grid g(8);
  const HVector e = HVector::constant(g, 1.0);
  EXPECT_THROW(log_radon_nikodym(Kernel2::rank_one(e, e), sample(g, 0)), precondition_error);
}

TEST(RadonNikodym, ExponentHasTheRightDeterministicPart) {
  // E[-I_2 - quad] = -(1/2) dt sum_t sum_s k(s,t)^2 dt = -(1/2) |K|_HS^2, so
  // the mean of log Lambda is zero.
  Grid g(32);
  const Kernel2 K = unit_reflection(g);
  const RadonNikodym rn(K);
  std::vector<double> v;
  for (std::size_t i = 0; i < 20000; ++i) v.push_back(rn.evaluate(sample(g, i)).log_Lambda);
  const auto s = summarize(v);
  EXPECT_NEAR(s.mean, 0.0, 4.0 * s.standard_error);
}

TEST(InvariantObservable, ReflectionWitness) {
  Grid g(16);
  const Kernel2 K = unit_reflection(g);
  const ShiftWitness w = invariant_observable(K);
  EXPECT_NEAR(w.lambda.real(), -2.0, 1e-10);
  ASSERT_TRUE(w.is_real());
  const HVector e = w.direction();
  EXPECT_NEAR(std::abs(inner_h(e, HVector::constant(g, 1.0))), 1.0, 1e-10);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Path p = sample(g, i);
    EXPECT_NEAR(w.evaluate(apply_shift(K, p)), w.evaluate(p), 1e-12);
  }
}

TEST(InvariantObservable, RandomUnitaryWitnessIsInvariant) {
  Grid g(16);
  for (std::uint64_t k = 0; k < 5; ++k) {
    const Kernel2 K = random_unitary(g, 40 + k);
    const ShiftWitness w = invariant_observable(K);
    EXPECT_NEAR(std::abs(1.0 + w.lambda), 1.0, 1e-8);
    for (std::uint64_t i = 0; i < 100; ++i) {
      const Path p = sample(g, i);
      EXPECT_NEAR(w.evaluate(apply_shift(K, p)), w.evaluate(p), 1e-12);
    }
  }
}

TEST(InvariantObservable, ZeroKernelHasNoWitness) {
  EXPECT_THROW(invariant_observable(Kernel2::zero(Grid(8))), no_witness_error);
}

TEST(InvariantObservable, BirkhoffAverageStaysAtTheStartingValue) {
  Grid g(16);
  const Kernel2 K = unit_reflection(g);
  const ShiftWitness w = invariant_observable(K);
  KernelShiftMap map(K);
  auto F = [&w](const Eigen::VectorXd& x) { return w.evaluate(x); };
  RandomStream unused(0, 0);
  const Path p = sample(g, 8);
  EXPECT_NEAR(birkhoff_average(map, F, p.coordinates(), 50, unused), w.evaluate(p), 1e-12);
}

TEST(KernelShiftMap, CorrelationMatchesMatrixPowers) {
  Grid g(8);
  const Kernel2 K = random_unitary(g, 60);
  KernelShiftMap map(K);
  const HVector h = HVector::from_function(g, [](double t) { return std::exp(t); });
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(8, 8) + K.operator_matrix();
  Eigen::VectorXd v = h.coordinates();
  for (int n = 0; n <= 6; ++n) {
    EXPECT_NEAR(map.correlation(h, n), v.dot(h.coordinates()), 1e-13);
    v = A * v;
  }
}
