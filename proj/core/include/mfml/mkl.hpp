#pragma once

#include "mfml/dataset.hpp"
#include "mfml/errors.hpp"
#include "mfml/kernels.hpp"
#include "mfml/kfda.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mfml {

struct FoldAccuracy {
  std::size_t kernel = 0;
  std::size_t fold = 0;
  double rank1 = 0.0;
};

/// Cross-validated rank-1 accuracy of each base kernel.
struct KernelAccuracies {
  std::vector<double> pis;
  std::size_t folds = 0;
  std::uint64_t fold_seed = 0;
  std::vector<FoldAccuracy> cells;  // skipped folds are absent
};

struct CvSetup {
  std::vector<std::string> train_ids;
  int probe_camera = 0;
  int gallery_camera = 1;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  double eps = kDefaultRegularizer;
  unsigned threads = 1;
};

/// Identity-level folds over the training identities.
///
/// Identities (ascending) are shuffled with `seed`; identity at shuffled
/// position i goes to fold i % folds. Each fold trains KFDA on the other folds'
/// samples (all cameras) and scores rank-1 of its probe-camera samples against
/// its gallery-camera samples. Folds with fewer than two identities, or whose
/// complement has fewer than two, are skipped with a warning.
///
/// Base Grams over all training rows are computed once; every fold and every
/// combination slices them.
class CrossValidator {
 public:
  CrossValidator(const Dataset& ds, CvSetup setup, std::vector<KernelSpec> bank);

  const CvSetup& setup() const { return setup_; }
  const std::vector<KernelSpec>& bank() const { return bank_; }
  /// Folds that are scored, ascending.
  const std::vector<std::size_t>& active_folds() const { return active_folds_; }

  /// Rank-1 per active fold. `combination.specs` must equal bank().
  std::vector<double> fold_rank1(const KernelCombination& combination) const;
  double mean_rank1(const KernelCombination& combination) const;
  /// Rank-1 of one fold (an entry of active_folds()).
  double fold_score(std::size_t fold, const KernelCombination& combination) const;

 private:
  struct Fold {
    std::vector<std::size_t> train;    // positions into the training rows
    std::vector<std::size_t> probes;   // positions
    std::vector<std::size_t> gallery;  // positions
    ClassIndex classes;                // over `train`
    std::vector<std::vector<char>> matches;
  };

  CvSetup setup_;
  std::vector<KernelSpec> bank_;
  std::vector<Eigen::MatrixXd> base_;  // q Grams over the training rows
  std::vector<Fold> folds_;
  std::vector<std::size_t> active_folds_;
};

KernelAccuracies cv_kernel_accuracies(const CrossValidator& cv);
KernelAccuracies cv_kernel_accuracies(const Dataset& ds, const CvSetup& setup,
                                      const std::vector<KernelSpec>& bank);

/// Indices sorted by descending accuracy, stable on ties.
template <typename Real>
std::vector<std::size_t> accuracy_order(std::span<const Real> pis) {
  std::vector<std::size_t> order(pis.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pis[b] < pis[a]; });
  return order;
}

struct NpWeightsOutcome {
  bool uniform_fallback = false;
};

/// Truncated proportional weights over any ordered field (double, or an exact
/// rational in tests). The N best kernels (stable order on ties) get
/// (pi_t - d) / sum_S (pi_r - d), d being the (N+1)-th best accuracy; every
/// other kernel gets zero. When all selected numerators vanish the selected
/// kernels share weight uniformly.
template <typename Real>
std::vector<Real> np_weights_generic(std::span<const Real> pis, std::size_t n_best,
                                     NpWeightsOutcome* outcome = nullptr) {
  if (n_best < 1 || n_best >= pis.size()) {
    throw InputError("N must satisfy 1 <= N < q (N = " + std::to_string(n_best) +
                     ", q = " + std::to_string(pis.size()) + ")");
  }
  const auto order = accuracy_order(pis);
  const Real threshold = pis[order[n_best]];
  std::vector<Real> weights(pis.size(), Real(0));
  Real total(0);
  for (std::size_t k = 0; k < n_best; ++k) total = total + (pis[order[k]] - threshold);
  const bool fallback = !(Real(0) < total);
  for (std::size_t k = 0; k < n_best; ++k) {
    const auto t = order[k];
    weights[t] = fallback ? Real(1) / Real(static_cast<long long>(n_best))
                          : (pis[t] - threshold) / total;
  }
  if (outcome) outcome->uniform_fallback = fallback;
  return weights;
}

/// np_weights_generic over doubles; the uniform fallback is reported via warn().
std::vector<double> np_weights(std::span<const double> pis, std::size_t n_best);

/// Untruncated proportional weights (pi_t - delta) / sum_r (pi_r - delta),
/// kept as a reference for comparison. delta defaults to min(pi).
std::vector<double> pwmk_weights(std::span<const double> pis);
std::vector<double> pwmk_weights(std::span<const double> pis, double delta);

/// Indices of the two largest accuracies, ordered by accuracy, stable on ties.
std::array<std::size_t, 2> select_sm_pair(std::span<const double> pis);

struct GridChoice {
  double value = 0.0;
  std::vector<double> scores;  // mean CV rank-1 per grid entry
};

/// tau maximizing mean CV rank-1 of the squared-matrix combination; ties go
/// to the smallest tau.
GridChoice select_tau(const CrossValidator& cv, std::array<std::size_t, 2> pair,
                      std::span<const double> tau_grid);

/// N maximizing mean CV rank-1 of the truncated-proportional combination; ties
/// go to the smallest N.
GridChoice select_n(const CrossValidator& cv, std::span<const double> pis,
                    std::span<const std::size_t> n_grid);

enum class MklVariant { np, sm };

std::string to_string(MklVariant variant);

struct MklGrids {
  std::vector<std::size_t> n_grid;  // empty: 1 .. min(5, q - 1)
  std::vector<double> tau_grid{0.0, 1e-3, 1e-2, 1e-1, 1.0};
};

std::vector<std::size_t> default_n_grid(std::size_t q);

struct MklConfig {
  MklVariant variant = MklVariant::np;
  KernelCombination combination;
  KernelAccuracies accuracies;
  std::size_t n_best = 0;  // np
  GridChoice selection;    // N (np) or tau (sm) search
};

MklConfig build_config(MklVariant variant, const CrossValidator& cv, const KernelAccuracies& acc,
                       const MklGrids& grids);

/// Stable digest of the learned configuration (variant, specs, weights or
/// pair and tau, N).
std::string mkl_digest(const MklConfig& config);

}  // namespace mfml
