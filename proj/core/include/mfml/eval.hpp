#pragma once

#include "mfml/dataset.hpp"
#include "mfml/kfda.hpp"
#include "mfml/mkl.hpp"
#include "mfml/ranking.hpp"
#include "mfml/split.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mfml {

enum class Method { euclidean, kfda, np_mfml, sm_mfml };

std::string to_string(Method method);
Method parse_method(std::string_view name);

struct EvalConfig {
  Method method = Method::kfda;
  double train_fraction = 0.5;
  std::size_t trials = 10;
  std::uint64_t base_seed = 0;
  int q = 20;
  double width_lo = 0.1;
  double width_hi = 10.0;
  double eps = kDefaultRegularizer;
  std::size_t p = 0;  // 0: c - 1
  std::size_t folds = 10;
  MklGrids grids;
  unsigned threads = 1;
  std::optional<int> probe_camera;
  std::optional<int> gallery_camera;

  SplitOptions split_options() const;
};

/// What training produced for one split. `model` is empty for euclidean.
struct TrainedMethod {
  SplitPlan plan;
  double base_width = 0.0;
  std::optional<KfdaModel> model;
  std::optional<MklConfig> mkl;
};

TrainedMethod train_method(const Dataset& ds, const SplitPlan& plan, const EvalConfig& config);

/// Ranks every probe of the plan's test split against its gallery; a null
/// model ranks by Euclidean distance in input space.
std::vector<RankedResult> evaluate_split(const Dataset& ds, const SplitPlan& plan,
                                         const KfdaModel* model);

struct CmcReport {
  std::vector<double> mean_accuracy;  // ranks 1..R
  Eigen::MatrixXd per_trial;          // trials x R
  std::size_t trials = 0;
  std::string config_digest;
  std::size_t excluded_probes = 0;    // probes without a gallery match, all trials

  std::size_t max_rank() const { return mean_accuracy.size(); }
  double at_rank(std::size_t k) const;
};

/// Trial t uses split seed base_seed + t. R is the smallest gallery size seen.
CmcReport run_trials(const Dataset& ds, const EvalConfig& config);

struct SweepRow {
  std::size_t p = 0;
  double rank1_mean = 0.0;
};

/// Rank-1 averaged over trials with the model truncated to its p leading
/// discriminants, one row per requested p.
std::vector<SweepRow> dimension_sweep(const Dataset& ds, const EvalConfig& config,
                                      const std::vector<std::size_t>& p_values);

/// Digest of the dataset content and every config field that affects results.
std::string config_digest(const Dataset& ds, const EvalConfig& config);

}  // namespace mfml
