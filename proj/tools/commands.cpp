#include "commands.hpp"

#include "mfml/csv_reports.hpp"
#include "mfml/dataset.hpp"
#include "mfml/digest.hpp"
#include "mfml/errors.hpp"
#include "mfml/model_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mfml::cli {
namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  return f;
}

Dataset load(const RunConfig& config) {
  if (config.features.empty()) throw InputError("no feature file given (--features)");
  return load_features(config.features);
}

std::string fmt(double v, const char* spec = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_double(values[i]);
  return s;
}

std::vector<KernelSpec> cv_bank(const RunConfig& config, double base_width) {
  if (config.q == 1) return {KernelSpec::rbf(base_width)};
  std::vector<KernelSpec> bank;
  for (double w : width_grid(base_width, config.q, config.width_lo, config.width_hi)) {
    bank.push_back(KernelSpec::rbf(w));
  }
  return bank;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void cmd_train(const RunConfig& config, std::ostream& out) {
  if (config.method == Method::euclidean) throw InputError("the euclidean baseline has no model to train");
  const auto start = std::chrono::steady_clock::now();
  const Dataset ds = load(config);
  const EvalConfig eval = config.eval_config();
  const SplitPlan plan = make_split(ds, config.base_seed, eval.split_options());
  const TrainedMethod trained = train_method(ds, plan, eval);

  const fs::path model_path = config.out / "model.txt";
  {
    auto f = open_output(model_path);
    write_model(f, *trained.model);
  }

  std::ostringstream log;
  log << "method " << to_string(config.method) << '\n';
  log << "config_digest " << config_digest(ds, eval) << '\n';
  log << "train_identities " << plan.train_ids.size() << '\n';
  log << "test_identities " << plan.test_ids.size() << '\n';
  log << "excluded_identities " << plan.excluded_ids.size() << '\n';
  log << "base_width " << format_double(trained.base_width) << '\n';
  log << "discriminants " << trained.model->dims() << '\n';
  log << "leading_eigenvalue " << format_double(trained.model->eigenvalues[0]) << '\n';
  if (trained.mkl) {
    const auto& mkl = *trained.mkl;
    log << "kernel_accuracies " << join(mkl.accuracies.pis) << '\n';
    log << "selection_scores " << join(mkl.selection.scores) << '\n';
    if (mkl.variant == MklVariant::np) {
      log << "n_best " << mkl.n_best << '\n';
      log << "weights " << join(mkl.combination.weights) << '\n';
    } else {
      log << "pair " << mkl.combination.pair[0] << ',' << mkl.combination.pair[1] << '\n';
      log << "tau " << format_double(mkl.combination.tau) << '\n';
    }
    log << "mkl_digest " << mkl_digest(mkl) << '\n';
  }
  {
    auto f = open_output(config.out / "train_log.txt");
    f << log.str();
  }
  out << "model " << model_path.string() << '\n' << log.str();
  out << "elapsed_seconds " << fmt(seconds_since(start), "%.3f") << '\n';
}

void cmd_evaluate(const RunConfig& config, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Dataset ds = load(config);
  const EvalConfig eval = config.eval_config();

  CmcReport report;
  if (config.model) {
    const KfdaModel model = load_model(*config.model);
    const SplitPlan plan = make_split(ds, config.base_seed, eval.split_options());
    const auto results = evaluate_split(ds, plan, &model);
    const auto curve = cmc(results, test_rows(ds, plan).gallery.size());
    report.trials = 1;
    report.mean_accuracy = curve;
    report.per_trial.resize(1, static_cast<Eigen::Index>(curve.size()));
    for (std::size_t k = 0; k < curve.size(); ++k) report.per_trial(0, static_cast<Eigen::Index>(k)) = curve[k];
    for (const auto& r : results) report.excluded_probes += !r.has_match();
    Fnv1a h;
    h.update(config_digest(ds, eval)).update(config.model->string());
    report.config_digest = h.hex();
  } else {
    report = run_trials(ds, eval);
  }

  const fs::path csv_path = config.out / "cmc.csv";
  {
    auto f = open_output(csv_path);
    write_cmc_csv(f, report);
  }
  out << "method " << (config.model ? "model" : to_string(config.method)) << '\n';
  out << "trials " << report.trials << '\n';
  for (std::size_t k : {1, 5, 10, 20}) {
    if (k <= report.max_rank()) out << "rank-" << k << ' ' << fmt(report.at_rank(k)) << '\n';
  }
  out << "excluded_probes " << report.excluded_probes << '\n';
  out << "config_digest " << report.config_digest << '\n';
  out << "cmc " << csv_path.string() << '\n';
  out << "elapsed_seconds " << fmt(seconds_since(start), "%.3f") << '\n';
}

void cmd_cv(const RunConfig& config, std::ostream& out) {
  const Dataset ds = load(config);
  const EvalConfig eval = config.eval_config();
  const SplitPlan plan = make_split(ds, config.base_seed, eval.split_options());
  const double base = rms_width(ds, training_rows(ds, plan));

  CvSetup setup;
  setup.train_ids = plan.train_ids;
  setup.probe_camera = plan.probe_camera;
  setup.gallery_camera = plan.gallery_camera;
  setup.folds = config.folds;
  setup.seed = config.base_seed;
  setup.eps = config.eps;
  setup.threads = std::max(1U, config.threads);
  const CrossValidator cv(ds, setup, cv_bank(config, base));
  const KernelAccuracies acc = cv_kernel_accuracies(cv);

  const fs::path csv_path = config.out / "cv_report.csv";
  {
    auto f = open_output(csv_path);
    write_cv_csv(f, acc);
  }
  out << "base_width " << format_double(base) << '\n';
  out << "folds_scored " << cv.active_folds().size() << '\n';
  for (std::size_t t = 0; t < acc.pis.size(); ++t) {
    out << "kernel " << t << " width " << format_double(cv.bank()[t].width) << " pi " << fmt(acc.pis[t]) << '\n';
  }
  if (acc.pis.size() >= 2) {
    const auto n_grid = config.n_grid.empty() ? default_n_grid(acc.pis.size()) : config.n_grid;
    const auto n_choice = select_n(cv, acc.pis, n_grid);
    const auto pair = select_sm_pair(acc.pis);
    const auto tau_choice = select_tau(cv, pair, config.tau_grid);
    out << "chosen_N " << static_cast<std::size_t>(n_choice.value) << '\n';
    out << "sm_pair " << pair[0] << ',' << pair[1] << '\n';
    out << "chosen_tau " << format_double(tau_choice.value) << '\n';
  }
  out << "cv_report " << csv_path.string() << '\n';
}

void cmd_sweep(const RunConfig& config, std::ostream& out) {
  if (config.p_values.empty()) throw InputError("sweep needs --p-values");
  const Dataset ds = load(config);
  const auto rows = dimension_sweep(ds, config.eval_config(), config.p_values);
  const fs::path csv_path = config.out / "sweep.csv";
  {
    auto f = open_output(csv_path);
    write_sweep_csv(f, rows);
  }
  for (const auto& r : rows) out << "p " << r.p << " rank-1 " << fmt(r.rank1_mean) << '\n';
  out << "sweep " << csv_path.string() << '\n';
}

void cmd_synth(const SynthParams& params, const fs::path& path, std::ostream& out) {
  const Dataset ds = synthesize(params);
  {
    auto f = open_output(path);
    write_features(f, ds);
    if (!f) throw InputError("write failed: " + path.string());
  }
  out << "rows " << ds.size() << '\n' << "features " << path.string() << '\n';
}

namespace {

// Flag name -> config key; values collected here override the config file.
struct RunFlags {
  std::optional<std::string> config_file;
  KeyValues overrides;

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "key=value config file; flags override it");
    add(app, "--method", "method", "euclidean | kfda | np-mfml | sm-mfml");
    add(app, "--features", "features", "feature CSV (id,cam,f1,...,fd)");
    add(app, "--out", "out", "output directory");
    add(app, "--seed", "base_seed", "base seed; trial t uses seed + t");
    add(app, "--trials", "trials", "number of repeated trials");
    add(app, "--train-fraction", "train_fraction", "fraction of identities used for training");
    add(app, "--eps", "eps", "diagonal regularizer added to Q");
    add(app, "--p", "p", "subspace dimension or 'full' (c - 1)");
    add(app, "--q", "q", "number of RBF kernels for multiple-kernel methods");
    add(app, "--width-lo", "width_lo", "smallest width multiplier");
    add(app, "--width-hi", "width_hi", "largest width multiplier");
    add(app, "--folds", "folds", "cross-validation folds");
    add(app, "--n-grid", "n_grid", "comma-separated N candidates");
    add(app, "--tau-grid", "tau_grid", "comma-separated tau candidates");
    add(app, "--threads", "threads", "worker thread cap");
  }

  void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(flag, [this, key](const std::string& v) { overrides[key] = v; }, help);
  }

  RunConfig resolve() const {
    KeyValues values;
    if (config_file) values = read_config_file(*config_file);
    for (const auto& [k, v] : overrides) values[k] = v;
    return make_run_config(values);
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel Fisher discriminant metric learning with multiple kernels"};
  app.require_subcommand(1);

  RunFlags train_flags, eval_flags, cv_flags, sweep_flags;
  std::optional<std::string> model_path;
  std::string p_values;
  SynthParams synth;
  std::string synth_out;

  auto* train = app.add_subcommand("train", "train a model on the first split and save it");
  train_flags.attach(*train);
  auto* evaluate = app.add_subcommand("evaluate", "rank-K / CMC evaluation over repeated trials");
  eval_flags.attach(*evaluate);
  evaluate->add_option("--model", model_path, "evaluate a saved model on the split of --seed");
  auto* cv = app.add_subcommand("cv", "cross-validated kernel accuracies and N / tau choice");
  cv_flags.attach(*cv);
  auto* sweep = app.add_subcommand("sweep", "rank-1 versus subspace dimension");
  sweep_flags.attach(*sweep);
  sweep->add_option("--p-values", p_values, "comma-separated subspace dimensions")->required();
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic multi-view feature CSV");
  synth_cmd->add_option("--identities", synth.identities, "number of identities");
  synth_cmd->add_option("--views", synth.views, "samples (cameras) per identity");
  synth_cmd->add_option("--dim", synth.dim, "feature dimension");
  synth_cmd->add_option("--noise", synth.noise, "per-sample noise standard deviation");
  synth_cmd->add_option("--view-offset", synth.view_offset, "norm of the shared per-camera offset");
  synth_cmd->add_option("--seed", synth.seed, "generator seed");
  synth_cmd->add_option("--out", synth_out, "output CSV path")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (train->parsed()) {
      cmd_train(train_flags.resolve(), out);
    } else if (evaluate->parsed()) {
      auto config = eval_flags.resolve();
      if (model_path) config.model = fs::path(*model_path);
      cmd_evaluate(config, out);
    } else if (cv->parsed()) {
      cmd_cv(cv_flags.resolve(), out);
    } else if (sweep->parsed()) {
      auto config = sweep_flags.resolve();
      config.p_values = parse_count_list(p_values);
      cmd_sweep(config, out);
    } else if (synth_cmd->parsed()) {
      cmd_synth(synth, synth_out, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kNumericError;
  }
  return kOk;
}

}  // namespace mfml::cli
