#pragma once

/// @file
/// Orbit-based Monte Carlo over coordinate maps.
///
/// A coordinate map acts on x = (delta e_1, ..., delta e_m). Path i always
/// starts from stream (paths, i) and draws any injected noise from stream
/// (fresh, i); per-path results land in index-addressed slots and are reduced
/// in index order with compensated sums.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gaussian.hpp"
#include "numeric.hpp"
#include "random.hpp"

namespace wienerdyn {

template <class M>
concept CoordinateMap = requires(const M& map, Eigen::VectorXd& x, RandomStream& rng) {
  { map.dimension() } -> std::convertible_to<int>;
  { map.invertible() } -> std::convertible_to<bool>;
  map.step(x, rng);
};

/// The identity transform, the null case of every statistical test.
class IdentityMap {
 public:
  explicit IdentityMap(int m) : m_(m) {}
  int dimension() const noexcept { return m_; }
  bool invertible() const noexcept { return true; }
  void step(Eigen::VectorXd&, RandomStream&) const {}

 private:
  int m_;
};

struct McConfig {
  std::uint64_t seed = 0;
  std::size_t paths = 10000;
  unsigned workers = 0;  // 0: hardware concurrency
};

struct SampleSummary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double standard_error = 0.0;
  std::size_t count = 0;
};

inline SampleSummary summarize(std::span<const double> xs) {
  SampleSummary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.mean = compensated_mean(xs);
  CompensatedSum ss;
  for (double x : xs) ss.add((x - s.mean) * (x - s.mean));
  s.variance = xs.size() > 1 ? ss.value() / static_cast<double>(xs.size() - 1) : 0.0;
  s.standard_error = std::sqrt(s.variance / static_cast<double>(xs.size()));
  return s;
}

/// Runs body(path_index, x0, map_rng) for every path; x0 is a fresh
/// standard Gaussian coordinate vector.
template <CoordinateMap Map, class Body>
void for_each_path(const Map& map, const McConfig& cfg, Body&& body) {
  parallel_for(
      cfg.paths,
      [&](std::size_t i) {
        RandomStream path_rng(cfg.seed, StreamKind::paths, i);
        RandomStream fresh(cfg.seed, StreamKind::fresh, i);
        Eigen::VectorXd x = sample_coordinates(map.dimension(), path_rng);
        body(i, x, fresh);
      },
      cfg.workers);
}

struct LagSeries {
  std::vector<double> mean;
  std::vector<double> standard_error;
};

/// Estimates E[f(T^n x) g(x)] for n = 0..n_max.
template <CoordinateMap Map, class F, class G>
LagSeries lagged_products(const Map& map, F&& f, G&& g, int n_max, const McConfig& cfg) {
  const std::size_t lags = static_cast<std::size_t>(n_max) + 1;
  std::vector<double> prod(cfg.paths * lags);
  for_each_path(map, cfg, [&](std::size_t i, Eigen::VectorXd& x, RandomStream& fresh) {
    const double g0 = g(x);
    for (std::size_t n = 0; n < lags; ++n) {
      if (n > 0) map.step(x, fresh);
      prod[n * cfg.paths + i] = f(x) * g0;
    }
  });
  LagSeries out;
  for (std::size_t n = 0; n < lags; ++n) {
    const auto s = summarize(std::span<const double>(prod.data() + n * cfg.paths, cfg.paths));
    out.mean.push_back(s.mean);
    out.standard_error.push_back(s.standard_error);
  }
  return out;
}

/// Birkhoff average (1/N) sum_{k<N} F(T^k x) along one orbit.
template <CoordinateMap Map, class F>
double birkhoff_average(const Map& map, F&& observable, Eigen::VectorXd x, int N, RandomStream& fresh) {
  if (N < 1) throw std::invalid_argument("Birkhoff average needs N >= 1");
  CompensatedSum s;
  for (int k = 0; k < N; ++k) {
    if (k > 0) map.step(x, fresh);
    s.add(observable(x));
  }
  return s.value() / N;
}

/// Birkhoff averages over N steps for every Monte Carlo path.
template <CoordinateMap Map, class F>
std::vector<double> orbit_averages(const Map& map, F&& observable, int N, const McConfig& cfg) {
  std::vector<double> out(cfg.paths);
  for_each_path(map, cfg, [&](std::size_t i, Eigen::VectorXd& x, RandomStream& fresh) {
    out[i] = birkhoff_average(map, observable, x, N, fresh);
  });
  return out;
}

}  // namespace wienerdyn
