#pragma once

#include <stdexcept>
#include <string>

namespace mfml {

/// Malformed or inconsistent input: files, configuration, argument shapes.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a valid result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mfml
