#include "mfml/ranking.hpp"

#include "mfml/errors.hpp"

#include <algorithm>
#include <numeric>

namespace mfml {

RankedResult rank_scores(std::size_t probe_index, std::span<const double> scores,
                         std::span<const char> is_match) {
  if (scores.empty()) throw InputError("gallery is empty");
  if (scores.size() != is_match.size()) throw InputError("scores and match flags differ in length");
  RankedResult r;
  r.probe_index = probe_index;
  r.ordered_gallery.resize(scores.size());
  std::iota(r.ordered_gallery.begin(), r.ordered_gallery.end(), std::size_t{0});
  std::stable_sort(r.ordered_gallery.begin(), r.ordered_gallery.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  for (std::size_t k = 0; k < r.ordered_gallery.size(); ++k) {
    if (is_match[r.ordered_gallery[k]]) {
      r.true_rank = k + 1;
      break;
    }
  }
  return r;
}

std::vector<RankedResult> rank_all(const Eigen::MatrixXd& scores,
                                   const std::vector<std::vector<char>>& matches) {
  if (static_cast<std::size_t>(scores.rows()) != matches.size()) {
    throw InputError("one match row per probe expected");
  }
  std::vector<RankedResult> out;
  out.reserve(matches.size());
  std::vector<double> row(static_cast<std::size_t>(scores.cols()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    for (Eigen::Index j = 0; j < scores.cols(); ++j) row[static_cast<std::size_t>(j)] = scores(i, j);
    out.push_back(rank_scores(static_cast<std::size_t>(i), row, matches[static_cast<std::size_t>(i)]));
  }
  return out;
}

std::vector<double> cmc(std::span<const RankedResult> results, std::size_t max_rank) {
  if (max_rank < 1) throw InputError("CMC needs max rank >= 1");
  std::vector<std::size_t> hits(max_rank + 1, 0);
  std::size_t counted = 0;
  for (const auto& r : results) {
    if (!r.has_match()) continue;
    ++counted;
    if (r.true_rank <= max_rank) ++hits[r.true_rank];
  }
  if (counted == 0) throw InputError("no rankable probes");
  std::vector<double> acc(max_rank);
  std::size_t cumulative = 0;
  for (std::size_t k = 1; k <= max_rank; ++k) {
    cumulative += hits[k];
    acc[k - 1] = static_cast<double>(cumulative) / static_cast<double>(counted);
  }
  return acc;
}

double rank1(std::span<const RankedResult> results) { return cmc(results, 1).front(); }

}  // namespace mfml
