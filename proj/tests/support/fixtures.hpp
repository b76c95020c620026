#pragma once

#include "mfml/dataset.hpp"
#include "mfml/random.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace fixture {

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, mfml::Rng& rng, double scale = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
  }
  return m;
}

inline std::string label(int i) {
  std::string s = std::to_string(i);
  return "c" + std::string(3 - std::min<std::size_t>(3, s.size()), '0') + s;
}

// `classes` Gaussian clusters of `per_class` samples, centers N(0, spread^2 I),
// samples N(center, I). Cameras alternate 0, 1, 0, ... within a class. Rows are
// class-major; `labels` receives the class number of each row.
inline mfml::Dataset clusters(int classes, int per_class, int dim, double spread, std::uint64_t seed,
                              std::vector<int>* labels = nullptr) {
  mfml::Rng rng(seed);
  const Eigen::MatrixXd centers = gaussian(classes, dim, rng, spread);
  Eigen::MatrixXd x(classes * per_class, dim);
  std::vector<std::string> ids;
  std::vector<int> cams;
  if (labels) labels->clear();
  for (int c = 0; c < classes; ++c) {
    for (int s = 0; s < per_class; ++s) {
      const int r = c * per_class + s;
      x.row(r) = centers.row(c) + gaussian(1, dim, rng).row(0);
      ids.push_back(label(c));
      cams.push_back(s % 2);
      if (labels) labels->push_back(c);
    }
  }
  return mfml::make_dataset(std::move(x), std::move(ids), std::move(cams));
}

inline Eigen::MatrixXd random_psd(Eigen::Index n, mfml::Rng& rng) {
  const Eigen::MatrixXd b = gaussian(n, n, rng);
  return b * b.transpose();
}

inline double min_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

inline double max_abs_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
}

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(MFML_FIXTURE_DIR) / name;
}

// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::path(MFML_SCRATCH_DIR) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixture
