#include "mfml/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mfml {

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
  if (bound <= 1) return 0;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  // Accept x < bound * floor(2^64 / bound), i.e. x <= last.
  const std::uint64_t last = kMax - (kMax % bound + 1) % bound;
  std::uint64_t x = engine_();
  while (x > last) x = engine_();
  return x % bound;
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace mfml
