#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mfml {

/// Identity label reserved for gallery-only distractor rows. Such rows never
/// enter training and are appended to every test gallery.
inline constexpr std::string_view kDistractorIdentity = "__distractor__";

/// Feature matrix (one sample per row) with identity and camera labels.
/// Immutable once built through make_dataset / load_features.
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<std::string> identities;
  std::vector<int> cameras;

  std::size_t size() const { return identities.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  bool is_distractor(std::size_t i) const { return identities[i] == kDistractorIdentity; }
};

/// Validates shape and finiteness; throws InputError on violation.
Dataset make_dataset(Eigen::MatrixXd features, std::vector<std::string> identities,
                     std::vector<int> cameras);

/// Reads the feature CSV layout `id,cam,f1,...,fd` (header row required).
/// Errors name the offending 1-based line of the source.
Dataset read_features(std::istream& in, std::string_view source = "<stream>");
Dataset load_features(const std::filesystem::path& path);

/// Writes the same CSV layout with shortest round-trip formatting.
void write_features(std::ostream& out, const Dataset& ds);
void save_features(const std::filesystem::path& path, const Dataset& ds);

/// Gathers the given rows of the feature matrix.
Eigen::MatrixXd select_rows(const Dataset& ds, std::span<const std::size_t> rows);

std::vector<std::size_t> all_indices(const Dataset& ds);

/// Samples of a subset grouped by identity, classes in ascending label order.
struct ClassIndex {
  std::vector<std::string> classes;
  // Dataset row indices per class, in subset order.
  std::vector<std::vector<std::size_t>> members;
  // Positions of those rows within `subset`; what scatter construction indexes.
  std::vector<std::vector<std::size_t>> positions;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> subset;

  std::size_t num_classes() const { return classes.size(); }
  std::size_t num_samples() const { return subset.size(); }
};

ClassIndex index_classes(const Dataset& ds, std::span<const std::size_t> subset);

/// Same grouping from bare labels; `labels[i]` belongs to position i.
ClassIndex index_labels(std::span<const std::string> labels);

}  // namespace mfml
