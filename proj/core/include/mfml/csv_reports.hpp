#pragma once

#include "mfml/eval.hpp"
#include "mfml/mkl.hpp"

#include <iosfwd>
#include <vector>

namespace mfml {

/// rank,mean_accuracy,trial_1,...,trial_T
void write_cmc_csv(std::ostream& out, const CmcReport& report);

/// p,rank1_mean
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// kernel,fold,rank1 per scored cell, then one `kernel,mean,pi` row per kernel.
void write_cv_csv(std::ostream& out, const KernelAccuracies& accuracies);

}  // namespace mfml
