// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include "commands.hpp"

#include "mfml/eval.hpp"
#include "mfml/kfda.hpp"
#include "mfml/log.hpp"
#include "mfml/metric.hpp"
#include "mfml/mkl.hpp"
#include "mfml/synth.hpp"

#include "support/fixtures.hpp"
#include "oracles/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace mfml;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

ClassIndex labels_index(const std::vector<int>& labels) {
  std::vector<std::string> names;
  for (int l : labels) names.push_back(fixture::label(l));
  return index_labels(names);
}

// 1: linear kernel, eps = 0, against explicit input-space discriminants.
Outcome linear_oracle() {
  std::vector<int> labels;
  const auto ds = fixture::clusters(10, 6, 5, 3.0, 101, &labels);  // n = 60, d = 5, c = 10
  const auto model = train_on_rows(ds, all_indices(ds), KernelCombination::single(KernelSpec::linear()), 0.0, 5);
  const Eigen::MatrixXd w = oracle::input_space_fda(ds.features, labels, 10, 5);
  mfml::Rng rng(102);
  const Eigen::MatrixXd test = fixture::gaussian(30, 5, rng, 3.0);
  const Eigen::MatrixXd ours = squared_distances(embed_rows(model, test), embed_rows(model, test));
  const Eigen::MatrixXd ref = squared_distances(test * w, test * w);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < ref.rows(); ++i) {
    for (Eigen::Index j = 0; j < ref.cols(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(ours(i, j) - ref(i, j)) / ref(i, j));
    }
  }
  return {worst <= 1e-6, "max relative distance error " + fmt("%.2e", worst) + " (tol 1e-6)"};
}

// 2: degree-2 polynomial kernel against the explicit feature map.
Outcome explicit_map_oracle() {
  mfml::Rng rng(201);
  std::vector<int> labels;
  const auto ds = fixture::clusters(4, 3, 2, 1.5, 202, &labels);  // n = 12, d = 2
  const auto model = train_on_rows(ds, all_indices(ds), KernelCombination::single(KernelSpec::polynomial(2)));
  Eigen::MatrixXd phi(12, 6);
  for (Eigen::Index i = 0; i < 12; ++i) phi.row(i) = oracle::poly2_features(ds.features(i, 0), ds.features(i, 1)).transpose();
  const Eigen::MatrixXd w = phi.transpose() * model.coefficients;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Eigen::VectorXd y = fixture::gaussian(2, 1, rng, 1.5).col(0);
    const Eigen::VectorXd ref = w.transpose() * oracle::poly2_features(y(0), y(1));
    worst = std::max(worst, (embed(model, y) - ref).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-8, "max absolute embedding error " + fmt("%.2e", worst) + " (tol 1e-8)"};
}

// 3: scatter surrogates against direct summation.
Outcome scatter_oracle() {
  Eigen::MatrixXd x(8, 2);
  x << 0.0, 0.1, 0.3, -0.2, 2.0, 1.0, 2.2, 1.3, 1.8, 0.7, -1.0, 2.0, -1.4, 2.1, -0.8, 1.6;
  const std::vector<int> labels{0, 0, 1, 1, 1, 2, 2, 2};
  const Eigen::MatrixXd k = self_gram(KernelSpec::rbf(1.0), x);
  const auto sc = build_scatter(k, labels_index(labels));
  const auto ref = oracle::naive_scatter(k, labels, 3);
  const double err = std::max(max_abs(sc.between - ref.p), max_abs(sc.within - ref.q));
  return {err <= 1e-10, "max entrywise error " + fmt("%.2e", err) + " (tol 1e-10)"};
}

// 4: leading discriminant against random search.
Outcome rayleigh_optimality() {
  mfml::Rng rng(401);
  int violations = 0;
  double worst_ratio = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const int c = 2 + static_cast<int>(rng.uniform_index(4));
    const int per = 2 + static_cast<int>(rng.uniform_index(3));
    const auto ds = fixture::clusters(c, per, 3, 2.0, 1000 + static_cast<std::uint64_t>(inst));
    const auto rows = all_indices(ds);
    const double width = 0.5 + 2.0 * rng.uniform01();
    const auto sc = build_scatter(gram(KernelSpec::rbf(width), ds, rows, rows), index_classes(ds, rows));
    const auto disc = solve_kfda(sc, 1, kDefaultRegularizer);
    const double best = oracle::rayleigh(sc.between, sc.within, kDefaultRegularizer, disc.coefficients.col(0));
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd v = fixture::gaussian(static_cast<Eigen::Index>(rows.size()), 1, rng).col(0);
      v.normalize();
      const double r = oracle::rayleigh(sc.between, sc.within, kDefaultRegularizer, v);
      if (!(r < best)) ++violations;
      worst_ratio = std::max(worst_ratio, r / best);
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over 20 x 1000, largest random/leading quotient ratio " +
                               fmt("%.3e", worst_ratio)};
}

// 5: positive semi-definiteness of Grams and their combinations.
Outcome psd_suite() {
  mfml::Rng rng(501);
  const auto ok = [](const Eigen::MatrixXd& m) {
    return fixture::min_eigenvalue(m) >= -1e-8 * fixture::max_abs_eigenvalue(m);
  };
  int bad_rbf = 0, bad_convex = 0, bad_sm = 0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng.uniform_index(20));
    const Eigen::MatrixXd x = fixture::gaussian(n, 1 + static_cast<Eigen::Index>(rng.uniform_index(6)), rng, 2.0);
    const double base = 0.05 + 5.0 * rng.uniform01();
    if (!ok(self_gram(KernelSpec::rbf(base), x))) ++bad_rbf;

    const auto ds = make_dataset(x, std::vector<std::string>(static_cast<std::size_t>(n), "a"),
                                 std::vector<int>(static_cast<std::size_t>(n), 0));
    const auto rows = all_indices(ds);
    std::vector<KernelSpec> specs;
    for (double w : width_grid(base, 5, 0.1, 10.0)) specs.push_back(KernelSpec::rbf(w));
    const auto bank = make_bank(specs, ds, rows);
    std::vector<double> beta(5);
    for (auto& b : beta) b = rng.uniform01() < 0.3 ? 0.0 : rng.uniform01();
    beta[rng.uniform_index(5)] += 0.1;
    const double sum = std::accumulate(beta.begin(), beta.end(), 0.0);
    for (auto& b : beta) b /= sum;
    beta[4] = 1.0 - std::accumulate(beta.begin(), beta.end() - 1, 0.0);
    if (beta[4] < 0.0) beta[4] = 0.0;
    if (!ok(combine_convex(bank, beta).values)) ++bad_convex;

    KernelMatrix a, b;
    a.values = fixture::random_psd(n, rng);
    b.values = fixture::random_psd(n, rng);
    a.row_basis = a.col_basis = b.row_basis = b.col_basis = rows;
    if (!ok(combine_sm(a, b, 10.0 * rng.uniform01()).values)) ++bad_sm;
  }
  const int bad = bad_rbf + bad_convex + bad_sm;
  return {bad == 0, "failures rbf " + std::to_string(bad_rbf) + "/100, convex " + std::to_string(bad_convex) +
                        "/100, squared-matrix " + std::to_string(bad_sm) + "/100"};
}

// 6: truncated proportional weights.
Outcome np_weight_suite() {
  mfml::Rng rng(601);
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t q = 2 + rng.uniform_index(19);
    std::vector<double> pis(q);
    for (auto& p : pis) p = rng.uniform01();  // distinct with probability one
    const std::size_t n = 1 + rng.uniform_index(q - 1);
    const auto w = np_weights(pis, n);
    std::size_t support = 0;
    bool negative = false;
    for (double b : w) {
      negative |= b < 0.0;
      support += b != 0.0;
    }
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    if (negative || support != n || std::abs(sum - 1.0) > 1e-12) ++bad;
  }
  const std::vector<oracle::Fraction> exact_pis{{9, 10}, {8, 10}, {5, 10}};
  const auto exact = np_weights_generic<oracle::Fraction>(exact_pis, 2);
  const bool exact_ok = exact[0] == oracle::Fraction(4, 7) && exact[1] == oracle::Fraction(3, 7) &&
                        exact[2] == oracle::Fraction(0);
  const auto dbl = np_weights(std::vector<double>{0.9, 0.8, 0.5}, 2);
  const bool dbl_ok = std::abs(dbl[0] - 4.0 / 7.0) <= 4e-16 && std::abs(dbl[1] - 3.0 / 7.0) <= 4e-16 && dbl[2] == 0.0;
  return {bad == 0 && exact_ok && dbl_ok,
          std::to_string(bad) + "/1000 random violations; worked example (" + exact[0].str() + ", " + exact[1].str() +
              ", " + exact[2].str() + ")"};
}

struct MethodRuns {
  CmcReport euclidean, kfda, np, sm;
};

// 7 and 8 share these runs.
const MethodRuns& fixture_runs() {
  static const MethodRuns runs = [] {
    const auto ds = synthesize({});
    EvalConfig c;  // 10 trials, seed 0, q = 20, 10 folds
    MethodRuns r;
    c.method = Method::euclidean;
    r.euclidean = run_trials(ds, c);
    c.method = Method::kfda;
    r.kfda = run_trials(ds, c);
    c.method = Method::np_mfml;
    r.np = run_trials(ds, c);
    c.method = Method::sm_mfml;
    r.sm = run_trials(ds, c);
    return r;
  }();
  return runs;
}

Outcome end_to_end() {
  const auto& r = fixture_runs();
  const double e = r.euclidean.at_rank(1), k = r.kfda.at_rank(1), np = r.np.at_rank(1), sm = r.sm.at_rank(1);
  const bool pass = k > e && np >= k - 0.02 && sm >= k - 0.02;
  return {pass, "rank-1 euclidean " + fmt("%.4f", e) + ", kfda " + fmt("%.4f", k) + ", np-mfml " + fmt("%.4f", np) +
                    ", sm-mfml " + fmt("%.4f", sm)};
}

Outcome cmc_properties() {
  const auto& r = fixture_runs();
  int non_monotone = 0, incomplete = 0, runs = 0;
  for (const auto* rep : {&r.euclidean, &r.kfda, &r.np, &r.sm}) {
    for (Eigen::Index t = 0; t < rep->per_trial.rows(); ++t, ++runs) {
      for (Eigen::Index k = 1; k < rep->per_trial.cols(); ++k) {
        if (rep->per_trial(t, k) < rep->per_trial(t, k - 1)) ++non_monotone;
      }
      // Every probe identity is in the gallery and R is the full gallery size.
      if (rep->per_trial(t, rep->per_trial.cols() - 1) != 1.0) ++incomplete;
    }
    for (std::size_t k = 1; k < rep->max_rank(); ++k) {
      if (rep->mean_accuracy[k] < rep->mean_accuracy[k - 1]) ++non_monotone;
    }
  }
  return {non_monotone == 0 && incomplete == 0,
          std::to_string(runs) + " runs, " + std::to_string(non_monotone) + " monotonicity breaks, " +
              std::to_string(incomplete) + " runs below 1.0 at the final rank"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const fs::path& scratch) {
  const auto data = (scratch / "data.csv").string();
  struct Cmd {
    std::vector<std::string> args;
    std::string file;
  };
  const std::vector<Cmd> cmds{
      {{"synth", "--identities", "30", "--seed", "9"}, ""},
      {{"evaluate", "--features", data, "--method", "euclidean"}, "cmc.csv"},
      {{"evaluate", "--features", data, "--method", "kfda"}, "cmc.csv"},
      {{"evaluate", "--features", data, "--method", "np-mfml", "--trials", "3", "--q", "6"}, "cmc.csv"},
      {{"evaluate", "--features", data, "--method", "sm-mfml", "--trials", "3", "--q", "6", "--threads", "2"}, "cmc.csv"},
      {{"cv", "--features", data, "--q", "6"}, "cv_report.csv"},
      {{"sweep", "--features", data, "--trials", "3", "--p-values", "1,4,14"}, "sweep.csv"},
      {{"train", "--features", data, "--method", "sm-mfml", "--q", "6"}, "model.txt"},
  };
  int mismatches = 0, failures = 0;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const auto dir = scratch / ("cmd" + std::to_string(i) + "_" + std::to_string(rep));
      fs::create_directories(dir);
      auto args = cmds[i].args;
      args.insert(args.begin(), "mfml");
      const auto target = cmds[i].file.empty() ? (i == 0 && rep == 0 ? fs::path(data) : dir / "data.csv")
                                               : dir / cmds[i].file;
      if (cmds[i].file.empty()) args.insert(args.end(), {"--out", target.string()});
      else args.insert(args.end(), {"--out", dir.string()});
      std::ostringstream out, err;
      if (cli::run_cli(args, out, err) != 0) {
        ++failures;
        continue;
      }
      const auto text = slurp(target);
      if (rep == 0) first = text;
      else if (text != first || text.empty()) ++mismatches;
    }
  }
  return {mismatches == 0 && failures == 0, std::to_string(cmds.size()) + " commands run twice, " +
                                                 std::to_string(mismatches) + " byte mismatches, " +
                                                 std::to_string(failures) + " failures"};
}

Outcome subspace_sweep() {
  const auto ds = synthesize({});
  const EvalConfig c;
  const std::vector<std::size_t> ps{1, 2, 5, 10, 19};  // 20 training identities: c - 1 = 19
  const auto rows = dimension_sweep(ds, c, ps);
  bool all_rows = rows.size() == ps.size();
  for (std::size_t i = 0; all_rows && i < rows.size(); ++i) all_rows = rows[i].p == ps[i];
  std::string table;
  for (const auto& r : rows) table += " p=" + std::to_string(r.p) + ":" + fmt("%.3f", r.rank1_mean);
  const bool pass = all_rows && rows.back().rank1_mean >= rows.front().rank1_mean;
  return {pass, "rank-1 by p" + table};
}

}  // namespace

int main() {
  set_warning_sink([](std::string_view) {});
  const fs::path scratch = fs::path(MFML_SCRATCH_DIR) / "acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "linear-kernel oracle equivalence", 5.0, linear_oracle},
      {2, "explicit feature-map oracle", 1.0, explicit_map_oracle},
      {3, "scatter oracle", 0.0, scatter_oracle},
      {4, "Rayleigh optimality", 0.0, rayleigh_optimality},
      {5, "PSD suite", 0.0, psd_suite},
      {6, "NP weight suite", 0.0, np_weight_suite},
      {7, "end-to-end separation", 60.0, end_to_end},
      {8, "CMC properties", 0.0, cmc_properties},
      {9, "determinism", 0.0, [&] { return determinism(scratch); }},
      {10, "subspace sweep", 0.0, subspace_sweep},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.pass;
    std::string timing = fmt("%.2f s", secs);
    if (c.budget_s > 0.0) {
      timing += " of " + fmt("%.0f s", c.budget_s) + " budget";
      pass = pass && secs < c.budget_s;
    }
    failed += !pass;
    std::printf("[%s] %d %s: %s (%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
