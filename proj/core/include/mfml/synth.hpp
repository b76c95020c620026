#pragma once

#include "mfml/dataset.hpp"

#include <cstdint>

namespace mfml {

struct SynthParams {
  int identities = 40;
  int views = 2;
  int dim = 20;
  double noise = 0.5;
  double view_offset = 20.0;
  std::uint64_t seed = 1;
};

/// Multi-view Gaussian fixture. Identity centers are N(0, I); camera v >= 2
/// adds a shared offset vector of norm view_offset (random direction per
/// camera); every sample adds N(0, noise^2 I). Rows are ordered identity-major,
/// identities labelled "id000".., cameras 1..views.
Dataset synthesize(const SynthParams& params);

}  // namespace mfml
