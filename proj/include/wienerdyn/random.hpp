#pragma once

/// @file
/// Named, splittable random streams derived from one master seed.
///
/// Every Monte Carlo draw comes from a stream identified by (kind, index);
/// path i of a study always reads stream (paths, i), so results do not
/// depend on how paths are distributed over workers.

#include <cstdint>
#include <random>

namespace wienerdyn {

enum class StreamKind : std::uint64_t {
  paths = 1,     // Wiener increments of path i
  fresh = 2,     // noise injected by non-invertible maps along path i
  kernels = 3,   // random kernels / operators, index = instance
  probes = 4,    // random probe vectors
  gamma = 5,     // random gamma processes
};

constexpr std::uint64_t stream_id(StreamKind kind, std::uint64_t index) noexcept {
  return (static_cast<std::uint64_t>(kind) << 48) | (index & ((std::uint64_t{1} << 48) - 1));
}

class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t id) : id_(id) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
    engine_.seed(seq);
  }

  RandomStream(std::uint64_t master_seed, StreamKind kind, std::uint64_t index)
      : RandomStream(master_seed, stream_id(kind, index)) {}

  double normal() { return normal_(engine_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  std::uint64_t id() const noexcept { return id_; }
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace wienerdyn
