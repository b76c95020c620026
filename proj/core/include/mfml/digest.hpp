#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mfml {

/// 64-bit FNV-1a, stable across platforms.
class Fnv1a {
 public:
  Fnv1a& update(std::string_view bytes);
  Fnv1a& update(double value);
  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace mfml
