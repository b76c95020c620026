#include "mfml/mkl.hpp"

#include "mfml/digest.hpp"
#include "mfml/errors.hpp"
#include "mfml/log.hpp"
#include "mfml/metric.hpp"
#include "mfml/random.hpp"
#include "mfml/ranking.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace mfml {
namespace {

Eigen::MatrixXd block(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows,
                      const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const auto c = static_cast<Eigen::Index>(cols[j]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(static_cast<Eigen::Index>(rows[i]), c);
    }
  }
  return out;
}

template <typename T, typename Score>
GridChoice pick_best(std::span<const T> grid, Score&& score) {
  if (grid.empty()) throw InputError("selection grid is empty");
  GridChoice choice;
  choice.scores.reserve(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    choice.scores.push_back(score(grid[i]));
    const bool better = choice.scores[i] > choice.scores[best];
    const bool tie_smaller = choice.scores[i] == choice.scores[best] && grid[i] < grid[best];
    if (better || tie_smaller) best = i;
  }
  choice.value = static_cast<double>(grid[best]);
  return choice;
}

}  // namespace

CrossValidator::CrossValidator(const Dataset& ds, CvSetup setup, std::vector<KernelSpec> bank)
    : setup_(std::move(setup)), bank_(std::move(bank)) {
  if (bank_.empty()) throw InputError("cross-validation needs at least one kernel");
  if (setup_.folds < 1) throw InputError("cross-validation needs at least one fold");

  std::vector<std::string> ids = setup_.train_ids;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() < setup_.folds) {
    throw InputError("too few identities for " + std::to_string(setup_.folds) +
                     "-fold cross-validation: " + std::to_string(ids.size()));
  }
  Rng rng(setup_.seed);
  rng.shuffle(ids);
  std::map<std::string, std::size_t> fold_of;
  for (std::size_t i = 0; i < ids.size(); ++i) fold_of[ids[i]] = i % setup_.folds;

  std::vector<std::size_t> rows;
  std::vector<std::size_t> row_fold;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.is_distractor(i)) continue;
    auto it = fold_of.find(ds.identities[i]);
    if (it == fold_of.end()) continue;
    rows.push_back(i);
    row_fold.push_back(it->second);
  }
  const Eigen::MatrixXd samples = select_rows(ds, rows);
  base_.reserve(bank_.size());
  for (const auto& spec : bank_) base_.push_back(self_gram(spec, samples));

  folds_.resize(setup_.folds);
  for (std::size_t f = 0; f < setup_.folds; ++f) {
    Fold& fold = folds_[f];
    std::vector<std::string> train_labels;
    std::size_t held_ids = 0;
    for (const auto& [id, g] : fold_of) held_ids += (g == f);
    for (std::size_t pos = 0; pos < rows.size(); ++pos) {
      const auto row = rows[pos];
      if (row_fold[pos] != f) {
        fold.train.push_back(pos);
        train_labels.push_back(ds.identities[row]);
      } else if (ds.cameras[row] == setup_.probe_camera) {
        fold.probes.push_back(pos);
      } else if (ds.cameras[row] == setup_.gallery_camera) {
        fold.gallery.push_back(pos);
      }
    }
    if (held_ids < 2) {
      warn("cross-validation fold " + std::to_string(f) + " holds " + std::to_string(held_ids) +
           " identity; skipped");
      continue;
    }
    if (train_labels.empty()) {
      warn("cross-validation fold " + std::to_string(f) + " leaves no training samples; skipped");
      continue;
    }
    fold.classes = index_labels(train_labels);
    if (fold.classes.num_classes() < 2 || fold.probes.empty() || fold.gallery.empty()) {
      warn("cross-validation fold " + std::to_string(f) + " is not scorable; skipped");
      continue;
    }
    fold.matches.assign(fold.probes.size(), std::vector<char>(fold.gallery.size(), 0));
    for (std::size_t i = 0; i < fold.probes.size(); ++i) {
      for (std::size_t j = 0; j < fold.gallery.size(); ++j) {
        fold.matches[i][j] = ds.identities[rows[fold.probes[i]]] == ds.identities[rows[fold.gallery[j]]];
      }
    }
    active_folds_.push_back(f);
  }
  if (active_folds_.empty()) throw InputError("no cross-validation fold can be scored");
}

double CrossValidator::fold_score(std::size_t f, const KernelCombination& combination) const {
  if (combination.specs != bank_) throw InputError("combination does not use the validator's kernel bank");
  const Fold& fold = folds_.at(f);
  if (fold.matches.empty()) throw InputError("fold " + std::to_string(f) + " is not scorable");

  std::vector<std::size_t> test = fold.probes;
  test.insert(test.end(), fold.gallery.begin(), fold.gallery.end());

  std::vector<Eigen::MatrixXd> train_blocks(bank_.size());
  std::vector<Eigen::MatrixXd> cross_blocks(bank_.size());
  for (auto t : combination.active()) {
    train_blocks[t] = block(base_[t], fold.train, fold.train);
    cross_blocks[t] = block(base_[t], test, fold.train);
  }
  const Eigen::MatrixXd gram = combine_train_blocks(combination, train_blocks);
  const ScatterPair scatter = build_scatter(gram, fold.classes);
  const Discriminants disc = solve_kfda(scatter, fold.classes.num_classes() - 1, setup_.eps);

  const Eigen::MatrixXd embedded =
      combine_cross_blocks(combination, cross_blocks, train_blocks) * disc.coefficients;
  const auto np = static_cast<Eigen::Index>(fold.probes.size());
  const auto ng = static_cast<Eigen::Index>(fold.gallery.size());
  const Eigen::MatrixXd scores = squared_distances(embedded.topRows(np), embedded.bottomRows(ng));
  const auto results = rank_all(scores, fold.matches);
  return rank1(results);
}

std::vector<double> CrossValidator::fold_rank1(const KernelCombination& combination) const {
  std::vector<double> out(active_folds_.size());
  detail::parallel_for(active_folds_.size(), setup_.threads,
                       [&](std::size_t i) { out[i] = fold_score(active_folds_[i], combination); });
  return out;
}

double CrossValidator::mean_rank1(const KernelCombination& combination) const {
  const auto scores = fold_rank1(combination);
  return std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
}

KernelAccuracies cv_kernel_accuracies(const CrossValidator& cv) {
  const auto q = cv.bank().size();
  const auto& folds = cv.active_folds();
  std::vector<double> cell_scores(q * folds.size());
  detail::parallel_for(cell_scores.size(), cv.setup().threads, [&](std::size_t cell) {
    const auto t = cell / folds.size();
    const auto f = folds[cell % folds.size()];
    std::vector<double> onehot(q, 0.0);
    onehot[t] = 1.0;
    // A one-hot convex combination evaluates kernel t alone over the full bank.
    cell_scores[cell] = cv.fold_score(f, KernelCombination::convex(cv.bank(), onehot));
  });

  KernelAccuracies acc;
  acc.folds = cv.setup().folds;
  acc.fold_seed = cv.setup().seed;
  acc.pis.assign(q, 0.0);
  for (std::size_t t = 0; t < q; ++t) {
    double sum = 0.0;
    for (std::size_t k = 0; k < folds.size(); ++k) {
      const double s = cell_scores[t * folds.size() + k];
      acc.cells.push_back({t, folds[k], s});
      sum += s;
    }
    acc.pis[t] = sum / static_cast<double>(folds.size());
  }
  return acc;
}

KernelAccuracies cv_kernel_accuracies(const Dataset& ds, const CvSetup& setup,
                                      const std::vector<KernelSpec>& bank) {
  return cv_kernel_accuracies(CrossValidator(ds, setup, bank));
}

std::vector<double> np_weights(std::span<const double> pis, std::size_t n_best) {
  NpWeightsOutcome outcome;
  auto w = np_weights_generic(pis, n_best, &outcome);
  if (outcome.uniform_fallback) {
    warn("accuracy tie between the N-th and (N+1)-th kernel; using uniform weights over the top " +
         std::to_string(n_best));
  }
  return w;
}

std::vector<double> pwmk_weights(std::span<const double> pis, double delta) {
  if (pis.empty()) throw InputError("no kernel accuracies");
  double total = 0.0;
  for (double p : pis) {
    if (p < delta) throw InputError("delta must not exceed the smallest accuracy");
    total += p - delta;
  }
  std::vector<double> w(pis.size());
  for (std::size_t t = 0; t < pis.size(); ++t) {
    w[t] = total > 0.0 ? (pis[t] - delta) / total : 1.0 / static_cast<double>(pis.size());
  }
  return w;
}

std::vector<double> pwmk_weights(std::span<const double> pis) {
  if (pis.empty()) throw InputError("no kernel accuracies");
  return pwmk_weights(pis, *std::min_element(pis.begin(), pis.end()));
}

std::array<std::size_t, 2> select_sm_pair(std::span<const double> pis) {
  if (pis.size() < 2) throw InputError("squared-matrix combination needs at least 2 kernels");
  const auto order = accuracy_order(pis);
  return {order[0], order[1]};
}

GridChoice select_tau(const CrossValidator& cv, std::array<std::size_t, 2> pair,
                      std::span<const double> tau_grid) {
  for (double tau : tau_grid) {
    if (!(tau >= 0.0)) throw InputError("tau grid values must be non-negative");
  }
  return pick_best(tau_grid, [&](double tau) {
    return cv.mean_rank1(KernelCombination::squared_matrix(cv.bank(), pair[0], pair[1], tau));
  });
}

GridChoice select_n(const CrossValidator& cv, std::span<const double> pis,
                    std::span<const std::size_t> n_grid) {
  if (pis.size() != cv.bank().size()) throw InputError("one accuracy per kernel expected");
  for (auto n : n_grid) {
    if (n < 1 || n >= pis.size()) {
      throw InputError("N grid value " + std::to_string(n) + " outside 1.." +
                       std::to_string(pis.size() - 1));
    }
  }
  return pick_best(n_grid, [&](std::size_t n) {
    return cv.mean_rank1(KernelCombination::convex(cv.bank(), np_weights(pis, n)));
  });
}

std::string to_string(MklVariant variant) { return variant == MklVariant::np ? "np" : "sm"; }

std::vector<std::size_t> default_n_grid(std::size_t q) {
  std::vector<std::size_t> grid;
  for (std::size_t n = 1; n <= std::min<std::size_t>(5, q > 0 ? q - 1 : 0); ++n) grid.push_back(n);
  return grid;
}

MklConfig build_config(MklVariant variant, const CrossValidator& cv, const KernelAccuracies& acc,
                       const MklGrids& grids) {
  const auto q = cv.bank().size();
  if (acc.pis.size() != q) throw InputError("one accuracy per kernel expected");
  if (q < 2) throw InputError("multiple-kernel learning needs at least 2 kernels");

  MklConfig config;
  config.variant = variant;
  config.accuracies = acc;
  if (variant == MklVariant::np) {
    const auto grid = grids.n_grid.empty() ? default_n_grid(q) : grids.n_grid;
    config.selection = select_n(cv, acc.pis, grid);
    config.n_best = static_cast<std::size_t>(config.selection.value);
    config.combination = KernelCombination::convex(cv.bank(), np_weights(acc.pis, config.n_best));
  } else {
    const auto pair = select_sm_pair(acc.pis);
    config.selection = select_tau(cv, pair, grids.tau_grid);
    config.combination =
        KernelCombination::squared_matrix(cv.bank(), pair[0], pair[1], config.selection.value);
  }
  return config;
}

std::string mkl_digest(const MklConfig& config) {
  Fnv1a h;
  const auto& c = config.combination;
  h.update(to_string(config.variant)).update(to_string(c.mode));
  for (const auto& s : c.specs) {
    h.update(to_string(s.kind)).update(s.width).update(static_cast<double>(s.degree)).update(s.offset);
  }
  for (double w : c.weights) h.update(w);
  h.update(static_cast<double>(c.pair[0])).update(static_cast<double>(c.pair[1])).update(c.tau);
  h.update(static_cast<double>(config.n_best));
  return h.hex();
}

}  // namespace mfml
