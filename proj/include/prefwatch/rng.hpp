#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace prefwatch {

/// Independent random streams used by one simulation run.
enum class StreamRole : std::uint64_t {
  kEnvironment = 1,
  kLearnerAction = 2,
  kLearnerNoise = 3,
  kPredictor = 4,
  kAuxiliary = 5,
};

/// SplitMix64 finalizer; used to derive well-separated 64-bit seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for the stream identified by (config hash, run seed, role).
std::uint64_t derive_stream_seed(std::uint64_t config_hash, std::uint64_t seed, StreamRole role) noexcept;

/// Deterministic generator: std::mt19937_64 with library-independent
/// conversions to uniform doubles and categorical draws, so results are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// +1 or -1 with equal probability.
  double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }
  /// Inverse-CDF draw from a probability vector.
  std::size_t categorical(std::span<const double> probs);

 private:
  std::mt19937_64 engine_;
};

}  // namespace prefwatch
