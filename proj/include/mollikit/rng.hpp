#pragma once

#include <cstdint>
#include <random>

namespace mollikit {

/// splitmix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the independent stream for one replication.
constexpr std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t replication) {
  return mix64(mix64(base_seed) ^ mix64(replication + 0x632be59bd9b4e019ULL));
}

/// Per-replication random stream. Variates use inverse-cdf transforms of
/// mt19937_64 output so the sequence is identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  double normal();
  double student_t4();

 private:
  std::mt19937_64 engine_;
};

}  // namespace mollikit
