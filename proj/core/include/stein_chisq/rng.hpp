#pragma once

#include <cstdint>
#include <random>

namespace stein_chisq {

/// SplitMix64 finalizer; used to derive independent substream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seeded generator for one Monte Carlo substream.
///
/// Monte Carlo work is split into fixed-size chunks; chunk i always draws from
/// `Rng(seed, i)`, so results do not depend on the order in which chunks run.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(mix_seed(seed, stream)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Draws per Monte Carlo chunk. Changing this changes every seeded result.
inline constexpr std::uint64_t kChunkSize = 1u << 14;

}  // namespace stein_chisq
