#pragma once

#include "mfml/dataset.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mfml {

enum class KernelKind { rbf, linear, polynomial };

std::string to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

/// A parametric kernel.
///
/// rbf:        exp(-|x - y|^2 / (2 width^2))
/// linear:     <x, y>
/// polynomial: (<x, y> + offset)^degree
///
/// linear and polynomial exist so that the discriminant pipeline can be
/// checked against explicit feature-space computations.
struct KernelSpec {
  KernelKind kind = KernelKind::rbf;
  double width = 1.0;
  int degree = 2;
  double offset = 1.0;

  static KernelSpec rbf(double width) { return {KernelKind::rbf, width, 2, 1.0}; }
  static KernelSpec linear() { return {KernelKind::linear, 1.0, 2, 1.0}; }
  static KernelSpec polynomial(int degree, double offset = 1.0) {
    return {KernelKind::polynomial, 1.0, degree, offset};
  }

  void validate() const;
  bool operator==(const KernelSpec&) const = default;
};

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// rows (r x d) against cols (m x d) -> r x m.
Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::MatrixXd& rows,
                           const Eigen::MatrixXd& cols);

/// Square Gram of a sample set, symmetrized as (K + K^T) / 2. RBF diagonals are
/// exactly one.
Eigen::MatrixXd self_gram(const KernelSpec& spec, const Eigen::MatrixXd& samples);

/// Kernel values together with the dataset rows they were evaluated on.
struct KernelMatrix {
  Eigen::MatrixXd values;
  std::vector<std::size_t> row_basis;
  std::vector<std::size_t> col_basis;

  bool same_basis() const { return row_basis == col_basis; }
};

KernelMatrix gram(const KernelSpec& spec, const Dataset& ds, std::span<const std::size_t> rows,
                  std::span<const std::size_t> cols);

/// Root mean squared pairwise distance over the subset.
double rms_width(const Dataset& ds, std::span<const std::size_t> subset);
double rms_width(const Eigen::MatrixXd& samples);

/// q widths base * m_k, with m_k geometrically spaced over [lo, hi] inclusive.
std::vector<double> width_grid(double base, int q, double lo, double hi);

/// q kernels evaluated over one common basis.
struct KernelBank {
  std::vector<KernelSpec> specs;
  std::vector<KernelMatrix> matrices;

  std::size_t size() const { return specs.size(); }
};

KernelBank make_bank(std::vector<KernelSpec> specs, const Dataset& ds,
                     std::span<const std::size_t> basis);

/// sum_t beta_t K_t; beta must be non-negative and sum to one within 1e-12.
KernelMatrix combine_convex(const KernelBank& bank, std::span<const double> weights);

/// (K1 + K2) / 2 + tau (K1 - K2)(K1 - K2).
KernelMatrix combine_sm(const KernelMatrix& k1, const KernelMatrix& k2, double tau);

void check_convex_weights(std::span<const double> weights, std::size_t expected_size);

/// How base kernels are merged into the kernel a model is trained with.
///
/// Combination is defined on kernel matrices, so it is applied to blocks of
/// pre-evaluated base kernels: `base_train[t]` is kernel t over the training
/// basis, `base_cross[t]` is kernel t between new samples (rows) and that
/// basis. Only the entries listed by active() are read.
///
/// For the squared-matrix mode the product term of a new sample y against
/// basis column j is sum_m d(y, x_m) d(x_m, x_j) with d = k1 - k2 and m over
/// the training basis, which reproduces the training Gram column when y is a
/// training sample.
struct KernelCombination {
  enum class Mode { single, convex, squared_matrix };

  Mode mode = Mode::single;
  std::vector<KernelSpec> specs;
  std::vector<double> weights;          // convex
  std::array<std::size_t, 2> pair{};    // squared_matrix
  double tau = 0.0;                     // squared_matrix

  static KernelCombination single(KernelSpec spec);
  static KernelCombination convex(std::vector<KernelSpec> specs, std::vector<double> weights);
  static KernelCombination squared_matrix(std::vector<KernelSpec> specs, std::size_t first,
                                          std::size_t second, double tau);

  std::vector<std::size_t> active() const;
  void validate() const;
  bool operator==(const KernelCombination&) const = default;
};

std::string to_string(KernelCombination::Mode mode);
KernelCombination::Mode parse_combination_mode(std::string_view name);

Eigen::MatrixXd combine_train_blocks(const KernelCombination& combination,
                                     std::span<const Eigen::MatrixXd> base_train);

Eigen::MatrixXd combine_cross_blocks(const KernelCombination& combination,
                                     std::span<const Eigen::MatrixXd> base_cross,
                                     std::span<const Eigen::MatrixXd> base_train);

/// A combination bound to a fixed training basis. Caches the training Gram and
/// what cross-kernel evaluation needs; immutable after construction.
class BoundKernel {
 public:
  BoundKernel(KernelCombination combination, Eigen::MatrixXd basis);

  const KernelCombination& combination() const { return combination_; }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::MatrixXd& train_gram() const { return train_gram_; }
  std::size_t basis_size() const { return static_cast<std::size_t>(basis_.rows()); }
  std::size_t input_dim() const { return static_cast<std::size_t>(basis_.cols()); }

  /// samples (m x d) -> m x n kernel values against the basis.
  Eigen::MatrixXd cross(const Eigen::MatrixXd& samples) const;

 private:
  KernelCombination combination_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd train_gram_;
  Eigen::MatrixXd sm_difference_;  // K1 - K2 over the basis, squared_matrix only
};

}  // namespace mfml
