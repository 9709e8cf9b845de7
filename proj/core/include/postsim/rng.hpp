#pragma once

#include <cstdint>
#include <random>

namespace postsim {

/// Seeded, splittable random source.
///
/// All sampling in the library draws from an Rng passed in explicitly. The
/// stream is fully determined by the seed; split() derives an independent
/// child stream from (seed, stream id), so per-trial sequences do not depend
/// on scheduling order.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  [[nodiscard]] Rng split(std::uint64_t stream) const;

  /// Uniform double in [0, 1) built from the top 53 bits of one draw.
  double uniform();

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace postsim
