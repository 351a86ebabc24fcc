#pragma once

/// @file
/// Statistical verification of measure preservation, ergodic averaging and
/// mixing decay for any coordinate map.
///
/// Gaussianity is judged with moment tests whose null variances are known
/// (6/N for skewness, 24/N for excess kurtosis) plus covariance checks
/// against the Wiener covariance min(s,t) and the Cameron-Martin inner
/// product. The suite's alpha is split evenly over its tests (Bonferroni).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <Eigen/Dense>

#include "gaussian.hpp"
#include "grid.hpp"
#include "montecarlo.hpp"
#include "numeric.hpp"
#include "rotation.hpp"

namespace wienerdyn {

struct StatReport {
  std::string test;
  double statistic = 0.0;
  double reference = 0.0;
  double standard_error = 0.0;
  double z = 0.0;
  double threshold = 0.0;  // pass iff |z| <= threshold
  double alpha = 0.0;      // level of this individual test
  bool pass = false;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
};

/// Two-sided critical value z_{1 - alpha/2}.
inline double two_sided_critical(double alpha) {
  return boost::math::quantile(boost::math::complement(boost::math::normal(), alpha / 2.0));
}

inline bool all_pass(const std::vector<StatReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

/// Unit-norm default probes: constant 1, sqrt(3)(2t - 1), sqrt(2) cos(pi t).
inline std::vector<HVector> default_probes(Grid g) {
  return {HVector::constant(g, 1.0),
          HVector::from_function(g, [](double t) { return std::sqrt(3.0) * (2.0 * t - 1.0); }),
          HVector::from_function(g, [](double t) { return std::sqrt(2.0) * std::cos(std::numbers::pi * t); })};
}

struct MomentSummary {
  double mean = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

inline MomentSummary sample_moments(std::span<const double> xs) {
  MomentSummary s;
  s.mean = compensated_mean(xs);
  CompensatedSum m2, m3, m4;
  for (double x : xs) {
    const double d = x - s.mean;
    m2.add(d * d);
    m3.add(d * d * d);
    m4.add(d * d * d * d);
  }
  const double n = static_cast<double>(xs.size());
  const double v = m2.value() / n;
  s.skewness = (m3.value() / n) / std::pow(v, 1.5);
  s.excess_kurtosis = (m4.value() / n) / (v * v) - 3.0;
  return s;
}

/// Applies the map once to N Wiener paths and tests that the image is again
/// Wiener: (i) covariance of Y at t = 1/4, 1/2, 3/4, 1 against min(s,t),
/// (ii) skewness and excess kurtosis of int h dY per probe, (iii) covariance
/// of probe pairs against (h, g)_H.
template <CoordinateMap Map>
std::vector<StatReport> gaussianity_suite(const Map& map, const Grid& grid, const McConfig& cfg,
                                          double alpha, std::vector<HVector> probes = {}) {
  if (map.dimension() != grid.size()) throw dimension_error("map dimension does not match grid");
  if (probes.empty()) probes = default_probes(grid);
  const int m = grid.size();
  const std::vector<double> tgrid{0.25, 0.5, 0.75, 1.0};
  std::vector<int> tidx;
  for (double t : tgrid) tidx.push_back(std::max(1, static_cast<int>(std::lround(t * m))));
  const std::size_t P = probes.size(), T = tidx.size(), N = cfg.paths;

  Eigen::MatrixXd C(m, P);
  for (std::size_t p = 0; p < P; ++p) C.col(p) = probes[p].coordinates();

  std::vector<double> yt(T * N), fp(P * N);
  for_each_path(map, cfg, [&](std::size_t i, Eigen::VectorXd& x, RandomStream& fresh) {
    map.step(x, fresh);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    double cum = 0.0;
    int next = 0;
    for (int k = 0; k < m && next < static_cast<int>(T); ++k) {
      cum += scale * x[k];
      if (k + 1 == tidx[next]) yt[next++ * N + i] = cum;
    }
    const Eigen::VectorXd f = C.transpose() * x;
    for (std::size_t p = 0; p < P; ++p) fp[p * N + i] = f[p];
  });

  const std::size_t cov_pairs = T * (T + 1) / 2;
  const std::size_t tests = 1 + 2 * P + P * (P + 1) / 2;
  const double a_test = alpha / static_cast<double>(tests);
  const double z_test = two_sided_critical(a_test);
  std::vector<StatReport> out;
  std::vector<double> prod(N);

  auto product_summary = [&](const double* a, const double* b) {
    for (std::size_t i = 0; i < N; ++i) prod[i] = a[i] * b[i];
    return summarize(prod);
  };

  {
    StatReport r{"covariance-vs-min(s,t)"};
    double max_err = 0.0, max_z = 0.0, se_at = 0.0;
    for (std::size_t a = 0; a < T; ++a)
      for (std::size_t b = a; b < T; ++b) {
        const auto s = product_summary(&yt[a * N], &yt[b * N]);
        const double ref = grid.time(std::min(tidx[a], tidx[b]));
        const double err = s.mean - ref;
        max_err = std::max(max_err, std::abs(err));
        const double z = s.standard_error > 0.0 ? err / s.standard_error : 0.0;
        if (std::abs(z) >= std::abs(max_z)) {
          max_z = z;
          se_at = s.standard_error;
        }
      }
    r.statistic = max_err;
    r.reference = 0.0;
    r.standard_error = se_at;
    r.z = max_z;
    r.alpha = a_test;
    r.threshold = two_sided_critical(a_test / static_cast<double>(cov_pairs));
    out.push_back(r);
  }

  const double se_skew = std::sqrt(6.0 / static_cast<double>(N));
  const double se_kurt = std::sqrt(24.0 / static_cast<double>(N));
  for (std::size_t p = 0; p < P; ++p) {
    const auto mom = sample_moments(std::span<const double>(&fp[p * N], N));
    const std::string tag = "probe" + std::to_string(p);
    out.push_back({"skewness:" + tag, mom.skewness, 0.0, se_skew, mom.skewness / se_skew, z_test, a_test});
    out.push_back({"excess-kurtosis:" + tag, mom.excess_kurtosis, 0.0, se_kurt,
                   mom.excess_kurtosis / se_kurt, z_test, a_test});
  }

  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = p; q < P; ++q) {
      const auto s = product_summary(&fp[p * N], &fp[q * N]);
      const double ref = inner_h(probes[p], probes[q]);
      const double z = s.standard_error > 0.0 ? (s.mean - ref) / s.standard_error : 0.0;
      out.push_back({"covariance:probe" + std::to_string(p) + ",probe" + std::to_string(q), s.mean,
                     ref, s.standard_error, z, z_test, a_test});
    }

  for (auto& r : out) {
    r.pass = std::abs(r.z) <= r.threshold;
    r.seed = cfg.seed;
    r.samples = N;
  }
  return out;
}

enum class SpreadVerdict { variance_collapse, persistent_spread };

inline const char* to_string(SpreadVerdict v) {
  return v == SpreadVerdict::variance_collapse ? "VARIANCE-COLLAPSE" : "PERSISTENT-SPREAD";
}

struct ErgodicStudy {
  StatReport report;  // statistic: spread ratio, reference: 1/sqrt(N)
  SpreadVerdict verdict = SpreadVerdict::variance_collapse;
  double mean_initial = 0.0;
  double mean_average = 0.0;
  double spread_initial = 0.0;  // sd of F(w) across paths
  double spread_average = 0.0;  // sd of the N-step Birkhoff averages
  int steps = 0;
};

/// Compares the spread of Birkhoff averages with the spread of the
/// observable itself. Invariant observables keep ratio 1; mixing maps
/// shrink it like 1/sqrt(N).
template <CoordinateMap Map, class F>
ErgodicStudy ergodic_average_study(const Map& map, F&& observable, int N, const McConfig& cfg,
                                   double collapse_ratio = 0.5) {
  std::vector<double> initial(cfg.paths);
  for_each_path(map, cfg, [&](std::size_t i, Eigen::VectorXd& x, RandomStream&) {
    initial[i] = observable(x);
  });
  const std::vector<double> averages = orbit_averages(map, observable, N, cfg);
  const auto s0 = summarize(initial);
  const auto sN = summarize(averages);

  ErgodicStudy st;
  st.steps = N;
  st.mean_initial = s0.mean;
  st.mean_average = sN.mean;
  st.spread_initial = std::sqrt(s0.variance);
  st.spread_average = std::sqrt(sN.variance);
  const double ratio = st.spread_initial > 0.0 ? st.spread_average / st.spread_initial : 0.0;
  // Delta-method standard error of a ratio of sample standard deviations.
  const double se = ratio / std::sqrt(static_cast<double>(cfg.paths));
  st.report = {"birkhoff-spread-ratio", ratio, 1.0 / std::sqrt(static_cast<double>(N)), se,
               se > 0.0 ? (ratio - 1.0) / se : 0.0, collapse_ratio, 0.0};
  st.verdict = ratio > collapse_ratio ? SpreadVerdict::persistent_spread : SpreadVerdict::variance_collapse;
  st.report.pass = st.verdict == SpreadVerdict::persistent_spread;
  st.report.seed = cfg.seed;
  st.report.samples = cfg.paths;
  return st;
}

struct MixingStudy {
  MixingCorrelation series;  // analytic empty when the map has no closed form
  std::vector<StatReport> lags;
  double z_threshold = 3.0;
  bool pass = false;
};

/// Monte Carlo a_n(f) for f = rho(delta h) - 1. When the map exposes
/// correlation(h, n) = (R^n h, h), each lag is compared with the analytic
/// value exp((R^n h, h)) - 1; otherwise with 0 (mixing hypothesis).
template <CoordinateMap Map>
MixingStudy mixing_decay_study(const Map& map, const HVector& h, int n_max, const McConfig& cfg,
                               double z_threshold = 3.0, int first_lag = 0) {
  MixingStudy st;
  st.z_threshold = z_threshold;
  auto rho = wick_observable(h);
  auto centered = [&rho](const Eigen::VectorXd& x) { return rho(x) - 1.0; };
  const LagSeries s = lagged_products(map, centered, centered, n_max, cfg);
  st.series.monte_carlo = s.mean;
  st.series.standard_error = s.standard_error;
  if constexpr (requires { map.correlation(h, 0); }) {
    for (int n = 0; n <= n_max; ++n) st.series.analytic.push_back(std::expm1(map.correlation(h, n)));
  }
  st.pass = true;
  for (int n = first_lag; n <= n_max; ++n) {
    const double ref = st.series.analytic.empty() ? 0.0 : st.series.analytic[n];
    const double se = s.standard_error[n];
    StatReport r{"mixing-lag-" + std::to_string(n), s.mean[n], ref, se,
                 se > 0.0 ? (s.mean[n] - ref) / se : 0.0, z_threshold, 0.0};
    r.alpha = 2.0 * boost::math::cdf(boost::math::complement(boost::math::normal(), z_threshold));
    r.pass = std::abs(r.z) <= z_threshold;
    r.seed = cfg.seed;
    r.samples = cfg.paths;
    st.pass = st.pass && r.pass;
    st.lags.push_back(r);
  }
  return st;
}

}  // namespace wienerdyn
