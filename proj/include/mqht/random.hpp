#pragma once

#include <cstdint>
#include <utility>

namespace mqht {

/// SplitMix64 (Steele, Lea & Flood 2014). State advances by 0x9E3779B97F4A7C15
/// per draw and each output is the mixed state:
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z =  z ^ (z >> 31)
/// Chosen so that other implementations can regenerate scenarios bit-exactly.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform on (0, 1]: ((next() >> 11) + 1) * 2^-53.
  double uniform_open_closed();
  /// Box-Muller pair of independent N(0, 1) samples from two uniforms u1, u2:
  /// r = sqrt(-2 ln u1), (r cos(2 pi u2), r sin(2 pi u2)).
  std::pair<double, double> gaussian_pair();

 private:
  std::uint64_t state_;
};

}  // namespace mqht
