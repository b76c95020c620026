#pragma once

#include "mfml/dataset.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mfml {

/// Train/test identity partition for one trial.
struct SplitPlan {
  std::vector<std::string> train_ids;  // ascending
  std::vector<std::string> test_ids;   // ascending
  std::uint64_t trial_seed = 0;
  int probe_camera = 0;
  int gallery_camera = 1;
  // Identities dropped because they lack a probe- or gallery-camera sample.
  std::vector<std::string> excluded_ids;

  bool operator==(const SplitPlan&) const = default;
};

struct SplitOptions {
  double train_fraction = 0.5;
  // Default: the two smallest camera labels, probe first.
  std::optional<int> probe_camera;
  std::optional<int> gallery_camera;
  // When false, an identity missing a camera is an error instead of a warning.
  bool exclude_incomplete = true;
};

/// Shuffles the eligible identities (ascending order, then Rng::shuffle with
/// `trial_seed`) and assigns the first ceil(train_fraction * count) to
/// training. At least one identity always lands on each side.
SplitPlan make_split(const Dataset& ds, std::uint64_t trial_seed, const SplitOptions& options);
SplitPlan make_split(const Dataset& ds, std::uint64_t trial_seed, double train_fraction = 0.5);

/// All rows of the training identities, any camera, ascending row order.
std::vector<std::size_t> training_rows(const Dataset& ds, const SplitPlan& plan);

struct ProbeGallery {
  std::vector<std::size_t> probes;
  std::vector<std::size_t> gallery;
};

/// Test identities in the probe camera vs. test identities plus distractors
/// in the gallery camera.
ProbeGallery test_rows(const Dataset& ds, const SplitPlan& plan);

/// Probe/gallery rows restricted to `ids` (no distractors).
ProbeGallery camera_rows(const Dataset& ds, const std::vector<std::string>& ids, int probe_camera,
                         int gallery_camera);

}  // namespace mfml
