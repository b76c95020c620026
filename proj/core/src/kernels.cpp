#include "mfml/kernels.hpp"

#include "mfml/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mfml {
namespace {

constexpr double kWeightTolerance = 1e-12;

Eigen::MatrixXd squared_distance_block(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& cols) {
  const Eigen::VectorXd rn = rows.rowwise().squaredNorm();
  const Eigen::VectorXd cn = cols.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * rows * cols.transpose();
  d2.colwise() += rn;
  d2.rowwise() += cn.transpose();
  return d2.cwiseMax(0.0);
}

Eigen::MatrixXd apply_kernel(const KernelSpec& spec, const Eigen::MatrixXd& rows,
                             const Eigen::MatrixXd& cols, bool same_samples) {
  spec.validate();
  if (rows.cols() != cols.cols()) {
    throw InputError("kernel arguments differ in dimension: " + std::to_string(rows.cols()) +
                     " vs " + std::to_string(cols.cols()));
  }
  switch (spec.kind) {
    case KernelKind::rbf: {
      Eigen::MatrixXd d2 = squared_distance_block(rows, cols);
      if (same_samples) d2.diagonal().setZero();
      const double scale = -1.0 / (2.0 * spec.width * spec.width);
      return (d2 * scale).array().exp().matrix();
    }
    case KernelKind::linear:
      return rows * cols.transpose();
    case KernelKind::polynomial: {
      Eigen::MatrixXd base = (rows * cols.transpose()).array() + spec.offset;
      return base.array().pow(static_cast<double>(spec.degree)).matrix();
    }
  }
  throw InputError("unknown kernel kind");
}

void symmetrize(Eigen::MatrixXd& m) {
  const Eigen::MatrixXd t = m.transpose();
  m = 0.5 * (m + t);
}

void require_square_same_basis(const KernelMatrix& a, const KernelMatrix& b) {
  if (!a.same_basis() || !b.same_basis() || a.row_basis != b.row_basis ||
      a.values.rows() != a.values.cols() || a.values.rows() != b.values.rows() ||
      a.values.cols() != b.values.cols()) {
    throw InputError("kernel matrices must be square over one common basis");
  }
}

Eigen::MatrixXd sm_combine(const Eigen::MatrixXd& k1, const Eigen::MatrixXd& k2, double tau) {
  const Eigen::MatrixXd diff = k1 - k2;
  Eigen::MatrixXd out = 0.5 * (k1 + k2);
  if (tau != 0.0) out.noalias() += tau * (diff * diff);
  symmetrize(out);
  return out;
}

void check_tau(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InputError("tau must be a finite non-negative value");
}

}  // namespace

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::rbf:
      return "rbf";
    case KernelKind::linear:
      return "linear";
    case KernelKind::polynomial:
      return "polynomial";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "rbf") return KernelKind::rbf;
  if (name == "linear") return KernelKind::linear;
  if (name == "polynomial") return KernelKind::polynomial;
  throw InputError("unknown kernel kind: " + std::string(name));
}

void KernelSpec::validate() const {
  if (kind == KernelKind::rbf && !(width > 0.0 && std::isfinite(width))) {
    throw InputError("rbf width must be positive and finite");
  }
  if (kind == KernelKind::polynomial && (degree < 1 || !std::isfinite(offset))) {
    throw InputError("polynomial kernel needs degree >= 1 and a finite offset");
  }
}

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  spec.validate();
  if (x.size() != y.size()) {
    throw InputError("kernel arguments differ in dimension: " + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()));
  }
  switch (spec.kind) {
    case KernelKind::rbf: {
      double d2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        d2 += diff * diff;
      }
      return std::exp(-d2 / (2.0 * spec.width * spec.width));
    }
    case KernelKind::linear: {
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      return dot;
    }
    case KernelKind::polynomial: {
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      return std::pow(dot + spec.offset, spec.degree);
    }
  }
  throw InputError("unknown kernel kind");
}

Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::MatrixXd& rows,
                           const Eigen::MatrixXd& cols) {
  return apply_kernel(spec, rows, cols, false);
}

Eigen::MatrixXd self_gram(const KernelSpec& spec, const Eigen::MatrixXd& samples) {
  Eigen::MatrixXd k = apply_kernel(spec, samples, samples, true);
  symmetrize(k);
  return k;
}

KernelMatrix gram(const KernelSpec& spec, const Dataset& ds, std::span<const std::size_t> rows,
                  std::span<const std::size_t> cols) {
  if (rows.empty() || cols.empty()) throw InputError("gram needs non-empty sample lists");
  KernelMatrix km;
  km.row_basis.assign(rows.begin(), rows.end());
  km.col_basis.assign(cols.begin(), cols.end());
  const Eigen::MatrixXd r = select_rows(ds, rows);
  if (km.same_basis()) {
    km.values = self_gram(spec, r);
  } else {
    km.values = cross_gram(spec, r, select_rows(ds, cols));
  }
  return km;
}

double rms_width(const Eigen::MatrixXd& samples) {
  const auto m = samples.rows();
  if (m < 2) throw InputError("rms width needs at least 2 samples");
  bool all_same = true;
  for (Eigen::Index i = 1; i < m && all_same; ++i) all_same = (samples.row(i) == samples.row(0));
  if (all_same) throw InputError("rms width is zero: all samples are identical");
  // sum_{i<j} |x_i - x_j|^2 = m * sum_i |x_i - mean|^2, over m(m-1)/2 pairs.
  const Eigen::RowVectorXd mean = samples.colwise().mean();
  const double spread = (samples.rowwise() - mean).squaredNorm();
  const double mean_sq = 2.0 * spread / static_cast<double>(m - 1);
  if (!(mean_sq > 0.0)) throw InputError("rms width is zero");
  return std::sqrt(mean_sq);
}

double rms_width(const Dataset& ds, std::span<const std::size_t> subset) {
  return rms_width(select_rows(ds, subset));
}

std::vector<double> width_grid(double base, int q, double lo, double hi) {
  if (!(base > 0.0) || !std::isfinite(base)) throw InputError("width grid base must be positive");
  if (q < 2) throw InputError("width grid needs q >= 2");
  if (!(lo > 0.0 && lo < hi) || !std::isfinite(hi)) throw InputError("width grid needs 0 < lo < hi");
  std::vector<double> widths(static_cast<std::size_t>(q));
  const double ratio = hi / lo;
  for (int k = 0; k < q; ++k) {
    double m = lo * std::pow(ratio, static_cast<double>(k) / static_cast<double>(q - 1));
    if (k == 0) m = lo;
    if (k == q - 1) m = hi;
    widths[static_cast<std::size_t>(k)] = base * m;
  }
  return widths;
}

KernelBank make_bank(std::vector<KernelSpec> specs, const Dataset& ds,
                     std::span<const std::size_t> basis) {
  if (specs.empty()) throw InputError("kernel bank needs at least one kernel");
  KernelBank bank;
  bank.matrices.reserve(specs.size());
  for (const auto& s : specs) bank.matrices.push_back(gram(s, ds, basis, basis));
  bank.specs = std::move(specs);
  return bank;
}

void check_convex_weights(std::span<const double> weights, std::size_t expected_size) {
  if (weights.size() != expected_size) {
    throw InputError("expected " + std::to_string(expected_size) + " kernel weights, got " +
                     std::to_string(weights.size()));
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("kernel weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightTolerance) throw InputError("kernel weights must sum to one");
}

KernelMatrix combine_convex(const KernelBank& bank, std::span<const double> weights) {
  if (bank.matrices.empty() || bank.matrices.size() != bank.specs.size()) {
    throw InputError("kernel bank is empty or inconsistent");
  }
  check_convex_weights(weights, bank.size());
  KernelMatrix out;
  out.row_basis = bank.matrices.front().row_basis;
  out.col_basis = bank.matrices.front().col_basis;
  out.values = Eigen::MatrixXd::Zero(bank.matrices.front().values.rows(),
                                     bank.matrices.front().values.cols());
  for (std::size_t t = 0; t < bank.size(); ++t) {
    const auto& m = bank.matrices[t];
    if (m.row_basis != out.row_basis || m.col_basis != out.col_basis) {
      throw InputError("kernel bank matrices must share one basis");
    }
    if (weights[t] != 0.0) out.values += weights[t] * m.values;
  }
  return out;
}

KernelMatrix combine_sm(const KernelMatrix& k1, const KernelMatrix& k2, double tau) {
  require_square_same_basis(k1, k2);
  check_tau(tau);
  KernelMatrix out;
  out.row_basis = k1.row_basis;
  out.col_basis = k1.col_basis;
  out.values = sm_combine(k1.values, k2.values, tau);
  return out;
}

KernelCombination KernelCombination::single(KernelSpec spec) {
  KernelCombination c;
  c.mode = Mode::single;
  c.specs = {spec};
  c.validate();
  return c;
}

KernelCombination KernelCombination::convex(std::vector<KernelSpec> specs,
                                            std::vector<double> weights) {
  KernelCombination c;
  c.mode = Mode::convex;
  c.specs = std::move(specs);
  c.weights = std::move(weights);
  c.validate();
  return c;
}

KernelCombination KernelCombination::squared_matrix(std::vector<KernelSpec> specs,
                                                    std::size_t first, std::size_t second,
                                                    double tau) {
  KernelCombination c;
  c.mode = Mode::squared_matrix;
  c.specs = std::move(specs);
  c.pair = {first, second};
  c.tau = tau;
  c.validate();
  return c;
}

std::vector<std::size_t> KernelCombination::active() const {
  switch (mode) {
    case Mode::single:
      return {0};
    case Mode::convex: {
      std::vector<std::size_t> idx;
      for (std::size_t t = 0; t < weights.size(); ++t) {
        if (weights[t] != 0.0) idx.push_back(t);
      }
      return idx;
    }
    case Mode::squared_matrix:
      return {pair[0], pair[1]};
  }
  return {};
}

void KernelCombination::validate() const {
  if (specs.empty()) throw InputError("kernel combination needs at least one kernel");
  for (const auto& s : specs) s.validate();
  switch (mode) {
    case Mode::single:
      if (specs.size() != 1) throw InputError("single-kernel combination takes exactly one kernel");
      break;
    case Mode::convex:
      check_convex_weights(weights, specs.size());
      break;
    case Mode::squared_matrix:
      if (pair[0] == pair[1] || pair[0] >= specs.size() || pair[1] >= specs.size()) {
        throw InputError("squared-matrix combination needs two distinct kernel indices");
      }
      check_tau(tau);
      break;
  }
}

std::string to_string(KernelCombination::Mode mode) {
  switch (mode) {
    case KernelCombination::Mode::single:
      return "single";
    case KernelCombination::Mode::convex:
      return "convex";
    case KernelCombination::Mode::squared_matrix:
      return "squared_matrix";
  }
  return "unknown";
}

KernelCombination::Mode parse_combination_mode(std::string_view name) {
  if (name == "single") return KernelCombination::Mode::single;
  if (name == "convex") return KernelCombination::Mode::convex;
  if (name == "squared_matrix") return KernelCombination::Mode::squared_matrix;
  throw InputError("unknown kernel combination: " + std::string(name));
}

Eigen::MatrixXd combine_train_blocks(const KernelCombination& combination,
                                     std::span<const Eigen::MatrixXd> base_train) {
  if (base_train.size() != combination.specs.size()) {
    throw InputError("one base block per kernel expected");
  }
  switch (combination.mode) {
    case KernelCombination::Mode::single:
      return base_train[0];
    case KernelCombination::Mode::convex: {
      const auto act = combination.active();
      Eigen::MatrixXd out = combination.weights[act.front()] * base_train[act.front()];
      for (std::size_t i = 1; i < act.size(); ++i) {
        out += combination.weights[act[i]] * base_train[act[i]];
      }
      return out;
    }
    case KernelCombination::Mode::squared_matrix:
      return sm_combine(base_train[combination.pair[0]], base_train[combination.pair[1]],
                        combination.tau);
  }
  throw InputError("unknown kernel combination");
}

namespace {

Eigen::MatrixXd sm_cross(const Eigen::MatrixXd& c1, const Eigen::MatrixXd& c2,
                         const Eigen::MatrixXd& train_difference, double tau) {
  Eigen::MatrixXd out = 0.5 * (c1 + c2);
  if (tau != 0.0) out.noalias() += tau * ((c1 - c2) * train_difference);
  return out;
}

}  // namespace

Eigen::MatrixXd combine_cross_blocks(const KernelCombination& combination,
                                     std::span<const Eigen::MatrixXd> base_cross,
                                     std::span<const Eigen::MatrixXd> base_train) {
  if (base_cross.size() != combination.specs.size()) {
    throw InputError("one base block per kernel expected");
  }
  switch (combination.mode) {
    case KernelCombination::Mode::single:
      return base_cross[0];
    case KernelCombination::Mode::convex: {
      const auto act = combination.active();
      Eigen::MatrixXd out = combination.weights[act.front()] * base_cross[act.front()];
      for (std::size_t i = 1; i < act.size(); ++i) {
        out += combination.weights[act[i]] * base_cross[act[i]];
      }
      return out;
    }
    case KernelCombination::Mode::squared_matrix: {
      if (base_train.size() != combination.specs.size()) {
        throw InputError("one base block per kernel expected");
      }
      const auto [a, b] = combination.pair;
      return sm_cross(base_cross[a], base_cross[b], base_train[a] - base_train[b], combination.tau);
    }
  }
  throw InputError("unknown kernel combination");
}

BoundKernel::BoundKernel(KernelCombination combination, Eigen::MatrixXd basis)
    : combination_(std::move(combination)), basis_(std::move(basis)) {
  combination_.validate();
  if (basis_.rows() < 1 || basis_.cols() < 1) throw InputError("kernel basis is empty");
  std::vector<Eigen::MatrixXd> base(combination_.specs.size());
  for (auto t : combination_.active()) base[t] = self_gram(combination_.specs[t], basis_);
  train_gram_ = combine_train_blocks(combination_, base);
  if (combination_.mode == KernelCombination::Mode::squared_matrix) {
    sm_difference_ = base[combination_.pair[0]] - base[combination_.pair[1]];
  }
}

Eigen::MatrixXd BoundKernel::cross(const Eigen::MatrixXd& samples) const {
  if (samples.cols() != basis_.cols()) {
    throw InputError("sample dimension " + std::to_string(samples.cols()) +
                     " does not match the training dimension " + std::to_string(basis_.cols()));
  }
  const auto& c = combination_;
  if (c.mode == KernelCombination::Mode::squared_matrix) {
    return sm_cross(cross_gram(c.specs[c.pair[0]], samples, basis_),
                    cross_gram(c.specs[c.pair[1]], samples, basis_), sm_difference_, c.tau);
  }
  std::vector<Eigen::MatrixXd> base(c.specs.size());
  for (auto t : c.active()) base[t] = cross_gram(c.specs[t], samples, basis_);
  return combine_cross_blocks(c, base, {});
}

}  // namespace mfml
