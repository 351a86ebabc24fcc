#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <span>
#include <thread>
#include <vector>

namespace wienerdyn {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

inline double compensated_mean(std::span<const double> xs) {
  return xs.empty() ? 0.0 : compensated_sum(xs) / static_cast<double>(xs.size());
}

/// Runs body(i) for i in [0, count) over up to `workers` threads. Each index
/// is visited exactly once; callers write results into per-index slots and
/// reduce in index order, which keeps outputs independent of the split.
template <class Body>
void parallel_for(std::size_t count, Body&& body, unsigned workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(count, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&body, &errors, w, lo, hi] {
        try {
          for (std::size_t i = lo; i < hi; ++i) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Phase of a unit complex number mapped into (0, 2pi]; +1 maps to 2pi.
inline double normalize_phase(double theta) {
  constexpr double snap = 1e-12;
  theta = std::remainder(theta, two_pi);  // (-pi, pi]
  if (std::abs(theta) <= snap) return two_pi;
  if (theta < 0.0) theta += two_pi;
  return theta;
}

/// Distance between two phases on the circle.
inline double phase_distance(double a, double b) {
  return std::abs(std::remainder(a - b, two_pi));
}

}  // namespace wienerdyn
