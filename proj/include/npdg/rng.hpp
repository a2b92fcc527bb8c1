#pragma once

#include <cstdint>

namespace npdg {

/// SplitMix64 (Steele, Lea, Flood). Used only to seed xoshiro streams.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next();

  /// The SplitMix64 output finalizer applied to a single word.
  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman, Vigna).
///
/// Stream splitting: substream `k` of seed `s` is the generator whose four
/// state words are the first four SplitMix64 outputs started from
/// `s ^ SplitMix64::mix(k)`. Every random matrix of a generated family draws
/// from its own substream, so families are reproducible independently of
/// draw order and across implementations.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  static Xoshiro256 substream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();

  /// Uniform on [0, 1) from the top 53 bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

 private:
  std::uint64_t s_[4];
};

}  // namespace npdg
