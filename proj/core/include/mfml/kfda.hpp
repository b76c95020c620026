#pragma once

#include "mfml/dataset.hpp"
#include "mfml/kernels.hpp"
#include "mfml/split.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <memory>

namespace mfml {

inline constexpr double kDefaultRegularizer = 1e-7;

/// Between-class (P) and within-class (Q) scatter expressed through kernel
/// values over the training samples.
struct ScatterPair {
  Eigen::MatrixXd between;      // P, n x n
  Eigen::MatrixXd within;       // Q, n x n
  Eigen::MatrixXd class_means;  // n x c, column i is the class-i kernel mean
  Eigen::VectorXd global_mean;  // n
};

/// `gram` must be the square kernel matrix over `classes.subset`, in that order.
ScatterPair build_scatter(const Eigen::MatrixXd& gram, const ClassIndex& classes);
ScatterPair build_scatter(const KernelMatrix& gram, const ClassIndex& classes);

struct Discriminants {
  Eigen::MatrixXd coefficients;  // n x p, unit-norm columns
  Eigen::VectorXd eigenvalues;   // p, non-increasing
};

/// Leading p solutions of P a = lambda (Q + eps I) a.
///
/// Q is diagonalized and the problem whitened, so the symmetric-definite form
/// is solved without forming (Q + eps I)^-1 P. eps == 0 restricts the problem to
/// the numerical range of Q; that path exists for exactness tests and requires
/// p to fit inside that range.
///
/// Each returned column has unit Euclidean norm and its largest-magnitude
/// entry positive (first such entry on ties).
Discriminants solve_kfda(const ScatterPair& scatter, std::size_t p, double eps);

/// Trained discriminant metric. The kernel is shared between truncated copies.
struct KfdaModel {
  std::shared_ptr<const BoundKernel> kernel;
  Eigen::MatrixXd coefficients;  // A, n x p
  Eigen::VectorXd eigenvalues;
  double regularizer = kDefaultRegularizer;
  std::size_t num_classes = 0;

  std::size_t dims() const { return static_cast<std::size_t>(coefficients.cols()); }
  std::size_t basis_size() const { return kernel->basis_size(); }
  std::size_t input_dim() const { return kernel->input_dim(); }

  /// Keeps the p leading discriminants.
  KfdaModel truncated(std::size_t p) const;
};

/// p == 0 means c - 1.
KfdaModel train_on_rows(const Dataset& ds, std::span<const std::size_t> rows,
                        const KernelCombination& kernel, double eps = kDefaultRegularizer,
                        std::size_t p = 0);

/// Trains on every sample of the plan's training identities.
KfdaModel train(const Dataset& ds, const SplitPlan& plan, const KernelCombination& kernel,
                double eps = kDefaultRegularizer, std::size_t p = 0);

}  // namespace mfml
