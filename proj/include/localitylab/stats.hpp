#pragma once

#include <cstdint>
#include <limits>

#include "localitylab/joint_distribution.hpp"
#include "localitylab/unit_vector.hpp"

namespace localitylab {

struct RngSeed {
  std::uint64_t value = 0;
  friend bool operator==(RngSeed, RngSeed) = default;
};

/// SplitMix64 (Steele, Lea & Flood). Used only to expand a 64-bit seed into
/// generator state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}
  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// The library's only random source: xoshiro256** 1.0 (Blackman & Vigna),
/// state filled by four SplitMix64 draws from the seed. Doubles take the top
/// 53 bits of a draw. Both steps are fixed so streams are identical on every
/// platform and compiler.
///
/// Satisfies UniformRandomBitGenerator, but never pass it to a std::
/// distribution when reproducibility matters; those are implementation-defined.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(RngSeed seed) noexcept {
    SplitMix64 sm(seed.value);
    for (auto& word : s_) word = sm.next();
  }

  /// Generator for trial `index` under `root`: reseeded from root + index
  /// (wrapping). Independent trials therefore never share a generator.
  static Rng for_stream(RngSeed root, std::uint64_t index) noexcept {
    return Rng(RngSeed{root.value + index});
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on {+1, -1}.
  int sign() noexcept { return (next_u64() >> 63) ? -1 : 1; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

/// Uniform point on S^2: z uniform on [-1, 1], azimuth uniform on [0, 2pi).
UnitVector3 sample_sphere(Rng& rng);

/// Two-sided Hoeffding half-width for the mean of `trials` values in [-1, 1]:
/// sqrt(ln(2 / (1 - confidence)) / (2 trials)). Throws DomainError for
/// trials == 0 or confidence outside (0, 1).
double hoeffding_epsilon(std::uint64_t trials, double confidence);

/// Confidence used by every audit and bound check in the library.
inline constexpr double kAuditConfidence = 0.999;

/// Half the L1 distance. Throws DomainError if the outcome spaces differ.
double tv_distance(const JointDistribution& p, const JointDistribution& q);

}  // namespace localitylab
