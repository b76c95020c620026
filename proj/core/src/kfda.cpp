#include "mfml/kfda.hpp"

#include "mfml/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace mfml {
namespace {

// Eigenvalues of Q below this fraction of the largest are treated as zero on
// the unregularized path.
constexpr double kRangeTolerance = 1e-10;

void symmetrize(Eigen::MatrixXd& m) {
  const Eigen::MatrixXd t = m.transpose();
  m = 0.5 * (m + t);
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      arg = i;
    }
  }
  if (v[arg] < 0.0) v = -v;
}

}  // namespace

ScatterPair build_scatter(const Eigen::MatrixXd& gram, const ClassIndex& classes) {
  const auto n = static_cast<Eigen::Index>(classes.num_samples());
  if (gram.rows() != n || gram.cols() != n) {
    throw InputError("scatter needs an n x n Gram over the indexed samples (n = " +
                     std::to_string(n) + ")");
  }
  const auto c = static_cast<Eigen::Index>(classes.num_classes());

  ScatterPair sc;
  sc.class_means.resize(n, c);
  Eigen::MatrixXd centered = gram;
  for (Eigen::Index i = 0; i < c; ++i) {
    const auto& pos = classes.positions[static_cast<std::size_t>(i)];
    if (pos.empty()) throw InputError("class '" + classes.classes[static_cast<std::size_t>(i)] + "' has no samples");
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    for (auto j : pos) mean += gram.col(static_cast<Eigen::Index>(j));
    mean /= static_cast<double>(pos.size());
    sc.class_means.col(i) = mean;
    for (auto j : pos) centered.col(static_cast<Eigen::Index>(j)) -= mean;
  }

  Eigen::VectorXd weights(c);
  for (Eigen::Index i = 0; i < c; ++i) {
    weights[i] = static_cast<double>(classes.counts[static_cast<std::size_t>(i)]);
  }
  sc.global_mean = sc.class_means * weights / static_cast<double>(n);

  const Eigen::MatrixXd diff = sc.class_means.colwise() - sc.global_mean;
  sc.between = diff * weights.asDiagonal() * diff.transpose();
  sc.within = centered * centered.transpose();
  symmetrize(sc.between);
  symmetrize(sc.within);
  return sc;
}

ScatterPair build_scatter(const KernelMatrix& gram, const ClassIndex& classes) {
  if (!gram.same_basis() || gram.row_basis != classes.subset) {
    throw InputError("Gram basis does not match the class index subset");
  }
  return build_scatter(gram.values, classes);
}

Discriminants solve_kfda(const ScatterPair& scatter, std::size_t p, double eps) {
  const auto n = scatter.between.rows();
  const auto c = static_cast<std::size_t>(scatter.class_means.cols());
  if (scatter.within.rows() != n || scatter.between.cols() != n || scatter.within.cols() != n) {
    throw InputError("scatter matrices must be square and of equal size");
  }
  if (p < 1 || c < 2 || p > c - 1) {
    throw InputError("subspace dimension p = " + std::to_string(p) + " out of range [1, " +
                     std::to_string(c > 0 ? c - 1 : 0) + "]");
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InputError("regularizer must be non-negative");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> within_eig(scatter.within);
  if (within_eig.info() != Eigen::Success) throw NumericError("eigen solver failed on Q");
  const Eigen::VectorXd& lambda = within_eig.eigenvalues();  // ascending
  const double top = std::max(lambda[n - 1], 0.0);

  // Whitening W with W^T (Q + eps I) W = I over the retained directions.
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eps > 0.0 || lambda[i] > kRangeTolerance * top) kept.push_back(i);
  }
  const auto r = static_cast<Eigen::Index>(kept.size());
  if (static_cast<Eigen::Index>(p) > r) {
    throw NumericError("requested " + std::to_string(p) + " discriminants but the within-class "
                       "scatter has numerical rank " + std::to_string(r));
  }
  Eigen::MatrixXd whiten(n, r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const double l = std::max(lambda[kept[static_cast<std::size_t>(k)]], 0.0) + eps;
    whiten.col(k) = within_eig.eigenvectors().col(kept[static_cast<std::size_t>(k)]) / std::sqrt(l);
  }

  Eigen::MatrixXd reduced = whiten.transpose() * scatter.between * whiten;
  symmetrize(reduced);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> reduced_eig(reduced);
  if (reduced_eig.info() != Eigen::Success) throw NumericError("eigen solver failed on reduced problem");

  Discriminants out;
  out.coefficients.resize(n, static_cast<Eigen::Index>(p));
  out.eigenvalues.resize(static_cast<Eigen::Index>(p));
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(p); ++k) {
    const Eigen::Index src = r - 1 - k;  // descending
    Eigen::VectorXd alpha = whiten * reduced_eig.eigenvectors().col(src);
    const double norm = alpha.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericError("degenerate discriminant");
    alpha /= norm;
    fix_sign(alpha);
    out.coefficients.col(k) = alpha;
    out.eigenvalues[k] = reduced_eig.eigenvalues()[src];
  }
  if (!out.coefficients.allFinite() || !out.eigenvalues.allFinite()) {
    throw NumericError("non-finite discriminant coefficients");
  }
  return out;
}

KfdaModel KfdaModel::truncated(std::size_t p) const {
  if (p < 1 || p > dims()) {
    throw InputError("cannot truncate to p = " + std::to_string(p) + " of " + std::to_string(dims()));
  }
  KfdaModel m = *this;
  m.coefficients = coefficients.leftCols(static_cast<Eigen::Index>(p));
  m.eigenvalues = eigenvalues.head(static_cast<Eigen::Index>(p));
  return m;
}

KfdaModel train_on_rows(const Dataset& ds, std::span<const std::size_t> rows,
                        const KernelCombination& kernel, double eps, std::size_t p) {
  const ClassIndex classes = index_classes(ds, rows);
  if (classes.num_classes() < 2) throw InputError("training needs at least 2 classes");
  const std::size_t dims = (p == 0) ? classes.num_classes() - 1 : p;

  auto bound = std::make_shared<const BoundKernel>(kernel, select_rows(ds, rows));
  const ScatterPair scatter = build_scatter(bound->train_gram(), classes);
  Discriminants disc = solve_kfda(scatter, dims, eps);

  KfdaModel model;
  model.kernel = std::move(bound);
  model.coefficients = std::move(disc.coefficients);
  model.eigenvalues = std::move(disc.eigenvalues);
  model.regularizer = eps;
  model.num_classes = classes.num_classes();
  return model;
}

KfdaModel train(const Dataset& ds, const SplitPlan& plan, const KernelCombination& kernel,
                double eps, std::size_t p) {
  const auto rows = training_rows(ds, plan);
  if (rows.empty()) throw InputError("split has no training samples");
  return train_on_rows(ds, rows, kernel, eps, p);
}

}  // namespace mfml
