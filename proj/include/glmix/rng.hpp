// Counter-based random numbers.
//
// Output k of a stream is a pure function of (key, k): the SplitMix64
// finalizer applied to key + k·γ. split() derives statistically independent
// child streams, so work can be divided without changing any draw.
#ifndef GLMIX_RNG_HPP
#define GLMIX_RNG_HPP

#include <cstdint>
#include <limits>

namespace glmix {

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + kGamma * ++counter_); }

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Child stream `id`; independent of this stream's position.
  Rng split(std::uint64_t id) const {
    Rng child(0);
    child.key_ = mix(key_ ^ mix(id + 0x243f6a8885a308d3ULL));
    return child;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace glmix

#endif  // GLMIX_RNG_HPP
