#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace mfml {

struct RankedResult {
  std::size_t probe_index = 0;
  // Gallery positions by ascending score, ties by ascending position.
  std::vector<std::size_t> ordered_gallery;
  // 1-based rank of the first correct gallery entry; 0 when the probe's
  // identity is absent from the gallery.
  std::size_t true_rank = 0;

  bool has_match() const { return true_rank != 0; }
};

/// Ranks one probe given its scores against the gallery and which gallery
/// entries share its identity.
RankedResult rank_scores(std::size_t probe_index, std::span<const double> scores,
                         std::span<const char> is_match);

/// One result per probe row of `scores` (probes x gallery).
std::vector<RankedResult> rank_all(const Eigen::MatrixXd& scores,
                                   const std::vector<std::vector<char>>& matches);

/// accuracy[k-1] = fraction of matched results with true_rank <= k, k = 1..R.
/// Results without a match are excluded.
std::vector<double> cmc(std::span<const RankedResult> results, std::size_t max_rank);

/// Fraction of matched results at rank 1.
double rank1(std::span<const RankedResult> results);

}  // namespace mfml
