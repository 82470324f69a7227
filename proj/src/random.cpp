#include "mqht/random.hpp"

#include <cmath>
#include <numbers>

namespace mqht {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform_open_closed() {
  return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

std::pair<double, double> SplitMix64::gaussian_pair() {
  const double u1 = uniform_open_closed();
  const double u2 = uniform_open_closed();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace mqht
