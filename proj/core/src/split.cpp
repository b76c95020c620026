#include "mfml/split.hpp"

#include "mfml/errors.hpp"
#include "mfml/log.hpp"
#include "mfml/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace mfml {
namespace {

bool contains(const std::vector<std::string>& sorted, const std::string& id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

std::pair<int, int> resolve_cameras(const Dataset& ds, const SplitOptions& options) {
  std::set<int> cams;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!ds.is_distractor(i)) cams.insert(ds.cameras[i]);
  }
  auto it = cams.begin();
  int probe = 0;
  int gallery = 0;
  if (options.probe_camera) {
    probe = *options.probe_camera;
  } else {
    if (cams.size() < 2) throw InputError("dataset needs samples from at least two cameras");
    probe = *it;
  }
  if (options.gallery_camera) {
    gallery = *options.gallery_camera;
  } else {
    if (cams.size() < 2) throw InputError("dataset needs samples from at least two cameras");
    gallery = (probe == *it) ? *std::next(it) : *it;
  }
  if (probe == gallery) throw InputError("probe and gallery cameras must differ");
  return {probe, gallery};
}

}  // namespace

SplitPlan make_split(const Dataset& ds, std::uint64_t trial_seed, const SplitOptions& options) {
  if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
    throw InputError("train_fraction must lie in (0, 1)");
  }
  const auto [probe_cam, gallery_cam] = resolve_cameras(ds, options);

  // identity -> (has probe sample, has gallery sample)
  std::map<std::string, std::pair<bool, bool>> coverage;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.is_distractor(i)) continue;
    auto& c = coverage[ds.identities[i]];
    if (ds.cameras[i] == probe_cam) c.first = true;
    if (ds.cameras[i] == gallery_cam) c.second = true;
  }

  SplitPlan plan;
  plan.trial_seed = trial_seed;
  plan.probe_camera = probe_cam;
  plan.gallery_camera = gallery_cam;

  std::vector<std::string> eligible;
  for (const auto& [id, c] : coverage) {
    if (c.first && c.second) {
      eligible.push_back(id);
    } else {
      plan.excluded_ids.push_back(id);
    }
  }
  if (!plan.excluded_ids.empty()) {
    const std::string msg = std::to_string(plan.excluded_ids.size()) +
                            " identities lack a sample in camera " + std::to_string(probe_cam) +
                            " or " + std::to_string(gallery_cam) + " (first: " +
                            plan.excluded_ids.front() + ")";
    if (!options.exclude_incomplete) throw InputError(msg);
    warn(msg + "; excluded from splitting");
  }
  if (eligible.size() < 2) {
    throw InputError("need at least 2 identities seen by both cameras, found " +
                     std::to_string(eligible.size()));
  }

  Rng rng(trial_seed);
  rng.shuffle(eligible);

  // The small slack keeps e.g. 0.3 * 10 from rounding up to 4.
  auto n_train = static_cast<std::size_t>(
      std::ceil(options.train_fraction * static_cast<double>(eligible.size()) - 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, eligible.size() - 1);

  plan.train_ids.assign(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(n_train));
  plan.test_ids.assign(eligible.begin() + static_cast<std::ptrdiff_t>(n_train), eligible.end());
  std::sort(plan.train_ids.begin(), plan.train_ids.end());
  std::sort(plan.test_ids.begin(), plan.test_ids.end());
  return plan;
}

SplitPlan make_split(const Dataset& ds, std::uint64_t trial_seed, double train_fraction) {
  SplitOptions options;
  options.train_fraction = train_fraction;
  return make_split(ds, trial_seed, options);
}

std::vector<std::size_t> training_rows(const Dataset& ds, const SplitPlan& plan) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!ds.is_distractor(i) && contains(plan.train_ids, ds.identities[i])) rows.push_back(i);
  }
  return rows;
}

ProbeGallery camera_rows(const Dataset& ds, const std::vector<std::string>& ids, int probe_camera,
                         int gallery_camera) {
  std::vector<std::string> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  ProbeGallery pg;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.is_distractor(i) || !contains(sorted, ds.identities[i])) continue;
    if (ds.cameras[i] == probe_camera) pg.probes.push_back(i);
    if (ds.cameras[i] == gallery_camera) pg.gallery.push_back(i);
  }
  return pg;
}

ProbeGallery test_rows(const Dataset& ds, const SplitPlan& plan) {
  ProbeGallery pg;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const bool distractor = ds.is_distractor(i);
    if (!distractor && !contains(plan.test_ids, ds.identities[i])) continue;
    if (!distractor && ds.cameras[i] == plan.probe_camera) pg.probes.push_back(i);
    if (ds.cameras[i] == plan.gallery_camera) pg.gallery.push_back(i);
  }
  return pg;
}

}  // namespace mfml
