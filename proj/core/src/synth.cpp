#include "mfml/synth.hpp"

#include "mfml/errors.hpp"
#include "mfml/random.hpp"

#include <cmath>
#include <cstdio>

namespace mfml {

Dataset synthesize(const SynthParams& params) {
  if (params.identities < 1 || params.views < 1 || params.dim < 1) {
    throw InputError("synthetic data needs identities, views and dim >= 1");
  }
  if (params.identities * params.views < 2) throw InputError("synthetic data needs at least 2 rows");
  if (!(params.noise >= 0.0) || !(params.view_offset >= 0.0)) {
    throw InputError("noise and view offset must be non-negative");
  }
  const Eigen::Index d = params.dim;
  Rng rng(params.seed);

  Eigen::MatrixXd centers(params.identities, d);
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) centers(i, j) = rng.normal();
  }
  Eigen::MatrixXd offsets = Eigen::MatrixXd::Zero(params.views, d);
  for (Eigen::Index v = 1; v < params.views; ++v) {
    Eigen::RowVectorXd dir(d);
    for (Eigen::Index j = 0; j < d; ++j) dir[j] = rng.normal();
    offsets.row(v) = params.view_offset * dir / dir.norm();
  }

  const Eigen::Index n = static_cast<Eigen::Index>(params.identities) * params.views;
  Eigen::MatrixXd features(n, d);
  std::vector<std::string> ids;
  std::vector<int> cams;
  for (int i = 0; i < params.identities; ++i) {
    char label[32];
    std::snprintf(label, sizeof label, "id%03d", i);
    for (int v = 0; v < params.views; ++v) {
      const Eigen::Index row = static_cast<Eigen::Index>(i) * params.views + v;
      for (Eigen::Index j = 0; j < d; ++j) {
        features(row, j) = centers(i, j) + offsets(v, j) + params.noise * rng.normal();
      }
      ids.emplace_back(label);
      cams.push_back(v + 1);
    }
  }
  return make_dataset(std::move(features), std::move(ids), std::move(cams));
}

}  // namespace mfml
