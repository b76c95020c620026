#include "mfml/eval.hpp"

#include "mfml/digest.hpp"
#include "mfml/errors.hpp"
#include "mfml/kernels.hpp"
#include "mfml/metric.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace mfml {
namespace {

template <typename Fn>
auto with_trial_context(std::size_t trial, Fn&& fn) {
  try {
    return fn();
  } catch (const InputError& e) {
    throw InputError("trial " + std::to_string(trial) + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError("trial " + std::to_string(trial) + ": " + e.what());
  }
}

struct TrialOutcome {
  std::vector<RankedResult> results;
  std::size_t gallery_size = 0;
};

std::size_t gallery_size(const Dataset& ds, const SplitPlan& plan) {
  return test_rows(ds, plan).gallery.size();
}

// Split trials across workers; CV inside a trial gets the threads otherwise.
unsigned inner_threads(const EvalConfig& config) {
  return config.trials > 1 ? 1U : std::max(1U, config.threads);
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::euclidean:
      return "euclidean";
    case Method::kfda:
      return "kfda";
    case Method::np_mfml:
      return "np-mfml";
    case Method::sm_mfml:
      return "sm-mfml";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "euclidean") return Method::euclidean;
  if (name == "kfda") return Method::kfda;
  if (name == "np-mfml") return Method::np_mfml;
  if (name == "sm-mfml") return Method::sm_mfml;
  throw InputError("unknown method '" + std::string(name) +
                   "' (expected euclidean, kfda, np-mfml or sm-mfml)");
}

SplitOptions EvalConfig::split_options() const {
  SplitOptions o;
  o.train_fraction = train_fraction;
  o.probe_camera = probe_camera;
  o.gallery_camera = gallery_camera;
  return o;
}

double CmcReport::at_rank(std::size_t k) const {
  if (k < 1 || k > mean_accuracy.size()) {
    throw InputError("rank " + std::to_string(k) + " outside 1.." + std::to_string(mean_accuracy.size()));
  }
  return mean_accuracy[k - 1];
}

TrainedMethod train_method(const Dataset& ds, const SplitPlan& plan, const EvalConfig& config) {
  TrainedMethod out;
  out.plan = plan;
  if (config.method == Method::euclidean) return out;

  const auto rows = training_rows(ds, plan);
  out.base_width = rms_width(ds, rows);

  if (config.method == Method::kfda) {
    out.model = train_on_rows(ds, rows, KernelCombination::single(KernelSpec::rbf(out.base_width)),
                              config.eps, config.p);
    return out;
  }

  std::vector<KernelSpec> bank;
  for (double w : width_grid(out.base_width, config.q, config.width_lo, config.width_hi)) {
    bank.push_back(KernelSpec::rbf(w));
  }
  CvSetup setup;
  setup.train_ids = plan.train_ids;
  setup.probe_camera = plan.probe_camera;
  setup.gallery_camera = plan.gallery_camera;
  setup.folds = config.folds;
  setup.seed = plan.trial_seed;
  setup.eps = config.eps;
  setup.threads = std::max(1U, config.threads);
  const CrossValidator cv(ds, setup, std::move(bank));
  const auto accuracies = cv_kernel_accuracies(cv);
  const auto variant = config.method == Method::np_mfml ? MklVariant::np : MklVariant::sm;
  out.mkl = build_config(variant, cv, accuracies, config.grids);
  out.model = train_on_rows(ds, rows, out.mkl->combination, config.eps, config.p);
  return out;
}

std::vector<RankedResult> evaluate_split(const Dataset& ds, const SplitPlan& plan,
                                         const KfdaModel* model) {
  const auto pg = test_rows(ds, plan);
  if (pg.probes.empty() || pg.gallery.empty()) throw InputError("test split has no probes or no gallery");
  const Eigen::MatrixXd probes = select_rows(ds, pg.probes);
  const Eigen::MatrixXd gallery = select_rows(ds, pg.gallery);
  const Eigen::MatrixXd scores = model
      ? squared_distances(embed_rows(*model, probes), embed_rows(*model, gallery))
      : squared_distances(probes, gallery);

  std::vector<std::vector<char>> matches(pg.probes.size(), std::vector<char>(pg.gallery.size(), 0));
  for (std::size_t i = 0; i < pg.probes.size(); ++i) {
    for (std::size_t j = 0; j < pg.gallery.size(); ++j) {
      matches[i][j] = ds.identities[pg.probes[i]] == ds.identities[pg.gallery[j]];
    }
  }
  auto results = rank_all(scores, matches);
  for (std::size_t i = 0; i < results.size(); ++i) results[i].probe_index = pg.probes[i];
  return results;
}

CmcReport run_trials(const Dataset& ds, const EvalConfig& config) {
  if (config.trials < 1) throw InputError("trials must be at least 1");
  EvalConfig trial_config = config;
  trial_config.threads = inner_threads(config);

  std::vector<TrialOutcome> outcomes(config.trials);
  detail::parallel_for(config.trials, std::max(1U, config.threads), [&](std::size_t t) {
    outcomes[t] = with_trial_context(t, [&] {
      const auto plan = make_split(ds, config.base_seed + t, config.split_options());
      const auto trained = train_method(ds, plan, trial_config);
      TrialOutcome o;
      o.results = evaluate_split(ds, plan, trained.model ? &*trained.model : nullptr);
      o.gallery_size = gallery_size(ds, plan);
      return o;
    });
  });

  std::size_t max_rank = std::numeric_limits<std::size_t>::max();
  for (const auto& o : outcomes) max_rank = std::min(max_rank, o.gallery_size);

  CmcReport report;
  report.trials = config.trials;
  report.per_trial.resize(static_cast<Eigen::Index>(config.trials), static_cast<Eigen::Index>(max_rank));
  for (std::size_t t = 0; t < config.trials; ++t) {
    const auto curve = with_trial_context(t, [&] { return cmc(outcomes[t].results, max_rank); });
    for (std::size_t k = 0; k < max_rank; ++k) {
      report.per_trial(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = curve[k];
    }
    for (const auto& r : outcomes[t].results) report.excluded_probes += !r.has_match();
  }
  report.mean_accuracy.resize(max_rank);
  for (std::size_t k = 0; k < max_rank; ++k) {
    report.mean_accuracy[k] = report.per_trial.col(static_cast<Eigen::Index>(k)).mean();
  }
  report.config_digest = config_digest(ds, config);
  return report;
}

std::vector<SweepRow> dimension_sweep(const Dataset& ds, const EvalConfig& config,
                                      const std::vector<std::size_t>& p_values) {
  if (config.method == Method::euclidean) throw InputError("dimension sweep needs a learned metric");
  if (p_values.empty()) throw InputError("dimension sweep needs at least one p value");
  if (config.trials < 1) throw InputError("trials must be at least 1");
  EvalConfig trial_config = config;
  trial_config.threads = inner_threads(config);
  trial_config.p = 0;

  std::vector<std::vector<double>> rank1s(config.trials);
  detail::parallel_for(config.trials, std::max(1U, config.threads), [&](std::size_t t) {
    rank1s[t] = with_trial_context(t, [&] {
      const auto plan = make_split(ds, config.base_seed + t, config.split_options());
      const auto trained = train_method(ds, plan, trial_config);
      std::vector<double> row;
      for (auto p : p_values) {
        if (p < 1 || p > trained.model->dims()) {
          throw InputError("p = " + std::to_string(p) + " out of range 1.." +
                           std::to_string(trained.model->dims()));
        }
        const auto model = trained.model->truncated(p);
        const auto results = evaluate_split(ds, plan, &model);
        row.push_back(rank1(results));
      }
      return row;
    });
  });

  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    double sum = 0.0;
    for (const auto& r : rank1s) sum += r[i];
    rows.push_back({p_values[i], sum / static_cast<double>(config.trials)});
  }
  return rows;
}

std::string config_digest(const Dataset& ds, const EvalConfig& config) {
  Fnv1a h;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    h.update(ds.identities[i]).update("\x1f").update(std::to_string(ds.cameras[i])).update("\x1e");
  }
  for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) h.update(ds.features(i, j));
  }
  std::string canon = "method=" + to_string(config.method) +
                      ";train_fraction=" + format_double(config.train_fraction) +
                      ";trials=" + std::to_string(config.trials) +
                      ";base_seed=" + std::to_string(config.base_seed) +
                      ";q=" + std::to_string(config.q) + ";width_lo=" + format_double(config.width_lo) +
                      ";width_hi=" + format_double(config.width_hi) + ";eps=" + format_double(config.eps) +
                      ";p=" + std::to_string(config.p) + ";folds=" + std::to_string(config.folds) + ";n_grid=";
  for (auto n : config.grids.n_grid) canon += std::to_string(n) + ",";
  canon += ";tau_grid=";
  for (auto t : config.grids.tau_grid) canon += format_double(t) + ",";
  canon += ";probe_camera=" + (config.probe_camera ? std::to_string(*config.probe_camera) : "auto");
  canon += ";gallery_camera=" + (config.gallery_camera ? std::to_string(*config.gallery_camera) : "auto");
  h.update(canon);
  return h.hex();
}

}  // namespace mfml
