#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace looptree {

/// Random stream used by every sampler in the library.
///
/// Streams are derived from a (seed, index) pair by a counter-based mixer, so
/// the realization handed to task `i` of an ensemble depends only on the seed
/// and `i`, never on scheduling. All conversions to doubles and bounded
/// integers are done here (not through <random> distributions) so outputs are
/// identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  /// Independent stream number `index` of the family keyed by `seed`.
  static Rng substream(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1] with 53 random bits.
  double uniform_pos() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform integer on the closed range [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used for seed derivation.
std::uint64_t mix64(std::uint64_t x);

}  // namespace looptree
