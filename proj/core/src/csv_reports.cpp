#include "mfml/csv_reports.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace mfml {
namespace {

// Averages are kept at full precision; six decimals only at output.
std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void write_cmc_csv(std::ostream& out, const CmcReport& report) {
  out << "rank,mean_accuracy";
  for (std::size_t t = 1; t <= report.trials; ++t) out << ",trial_" << t;
  out << '\n';
  for (std::size_t k = 0; k < report.max_rank(); ++k) {
    out << k + 1 << ',' << fixed6(report.mean_accuracy[k]);
    for (Eigen::Index t = 0; t < report.per_trial.rows(); ++t) {
      out << ',' << fixed6(report.per_trial(t, static_cast<Eigen::Index>(k)));
    }
    out << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "p,rank1_mean\n";
  for (const auto& r : rows) out << r.p << ',' << fixed6(r.rank1_mean) << '\n';
}

void write_cv_csv(std::ostream& out, const KernelAccuracies& accuracies) {
  out << "kernel,fold,rank1\n";
  for (const auto& c : accuracies.cells) out << c.kernel << ',' << c.fold << ',' << fixed6(c.rank1) << '\n';
  for (std::size_t t = 0; t < accuracies.pis.size(); ++t) {
    out << t << ",mean," << fixed6(accuracies.pis[t]) << '\n';
  }
}

}  // namespace mfml
