#pragma once

#include "mfml/kfda.hpp"

#include <Eigen/Dense>

namespace mfml {

/// Image A^T k_y of a sample in the discriminant subspace.
using Projection = Eigen::VectorXd;

Projection embed(const KfdaModel& model, const Eigen::VectorXd& y);

/// Row-wise embedding of samples (m x d) -> m x p. Evaluates the cross-Gram
/// block once.
Eigen::MatrixXd embed_rows(const KfdaModel& model, const Eigen::MatrixXd& samples);

/// |A^T (k_y - k_z)|^2; lower means closer.
double score(const KfdaModel& model, const Eigen::VectorXd& y, const Eigen::VectorXd& z);

/// |y - z|^2, the metric-free baseline.
double euclidean_score(const Eigen::VectorXd& y, const Eigen::VectorXd& z);

/// Squared Euclidean distances between every row of `a` and every row of `b`.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace mfml
