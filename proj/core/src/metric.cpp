#include "mfml/metric.hpp"

#include "mfml/errors.hpp"

#include <string>

namespace mfml {

Eigen::MatrixXd embed_rows(const KfdaModel& model, const Eigen::MatrixXd& samples) {
  return model.kernel->cross(samples) * model.coefficients;
}

Projection embed(const KfdaModel& model, const Eigen::VectorXd& y) {
  if (static_cast<std::size_t>(y.size()) != model.input_dim()) {
    throw InputError("sample dimension " + std::to_string(y.size()) +
                     " does not match the model dimension " + std::to_string(model.input_dim()));
  }
  return embed_rows(model, y.transpose()).transpose();
}

double score(const KfdaModel& model, const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  return (embed(model, y) - embed(model, z)).squaredNorm();
}

double euclidean_score(const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  if (y.size() != z.size()) {
    throw InputError("dimension mismatch: " + std::to_string(y.size()) + " vs " +
                     std::to_string(z.size()));
  }
  return (y - z).squaredNorm();
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols()) throw InputError("dimension mismatch in squared_distances");
  Eigen::MatrixXd d(a.rows(), b.rows());
  // Direct differences: scores feed rankings, so avoid norm-expansion cancellation.
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    d.col(j) = (a.rowwise() - b.row(j)).rowwise().squaredNorm();
  }
  return d;
}

}  // namespace mfml
