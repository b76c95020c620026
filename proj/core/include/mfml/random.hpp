#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace mfml {

/// Portable deterministic generator.
///
/// The engine is std::mt19937_64 seeded with the 64-bit seed; its output
/// sequence is fixed by the standard. Everything derived from it is computed
/// here rather than through <random> distributions, whose algorithms are
/// implementation-defined:
///
///   uniform_index(b): draw x until x < b * floor(2^64 / b), return x % b.
///   uniform01():      (x >> 11) * 2^-53.
///   normal():         Box-Muller on two uniform01() draws, u1 mapped to (0, 1].
///   shuffle(v):       Fisher-Yates, i = n-1 down to 1, j = uniform_index(i + 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t uniform_index(std::uint64_t bound);
  double uniform01();
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      using std::swap;
      swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mfml
