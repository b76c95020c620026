#include "mfml/model_io.hpp"

#include "mfml/digest.hpp"
#include "mfml/errors.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace mfml {
namespace {

void write_row(std::ostream& out, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (j) out << ' ';
    out << format_double(row[j]);
  }
  out << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::vector<std::string> line() {
    std::string text;
    if (!std::getline(in_, text)) fail("unexpected end of model file");
    ++line_no_;
    std::istringstream ss(text);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    return tokens;
  }

  std::vector<std::string> record(std::string_view tag, std::size_t values) {
    auto t = line();
    if (t.empty() || t[0] != tag || t.size() != values + 1) {
      fail("expected '" + std::string(tag) + "' with " + std::to_string(values) + " values");
    }
    return t;
  }

  Eigen::MatrixXd matrix(std::string_view tag, Eigen::Index rows, Eigen::Index cols) {
    record(tag, 0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      auto t = line();
      if (static_cast<Eigen::Index>(t.size()) != cols) fail("wrong number of values in row");
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = number(t[static_cast<std::size_t>(j)]);
    }
    return m;
  }

  double number(const std::string& s) {
    try {
      return parse_double(s);
    } catch (const InputError&) {
      fail("malformed number '" + s + "'");
    }
  }

  std::size_t count(const std::string& s) {
    const double v = number(s);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) fail("expected a count");
    return static_cast<std::size_t>(v);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("model file line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

void write_model(std::ostream& out, const KfdaModel& model) {
  const auto& kernel = *model.kernel;
  const auto& comb = kernel.combination();
  out << "mfml-model " << kModelFormatVersion << '\n';
  out << "dims " << model.basis_size() << ' ' << model.dims() << ' ' << model.input_dim() << '\n';
  out << "classes " << model.num_classes << '\n';
  out << "regularizer " << format_double(model.regularizer) << '\n';
  out << "combination " << to_string(comb.mode) << ' ' << comb.specs.size() << '\n';
  for (const auto& s : comb.specs) {
    out << "spec " << to_string(s.kind) << ' ' << format_double(s.width) << ' ' << s.degree << ' '
        << format_double(s.offset) << '\n';
  }
  if (comb.mode == KernelCombination::Mode::convex) {
    out << "weights";
    for (double w : comb.weights) out << ' ' << format_double(w);
    out << '\n';
  }
  if (comb.mode == KernelCombination::Mode::squared_matrix) {
    out << "pair " << comb.pair[0] << ' ' << comb.pair[1] << ' ' << format_double(comb.tau) << '\n';
  }
  out << "eigenvalues";
  for (Eigen::Index k = 0; k < model.eigenvalues.size(); ++k) {
    out << ' ' << format_double(model.eigenvalues[k]);
  }
  out << '\n';
  out << "coefficients\n";
  for (Eigen::Index i = 0; i < model.coefficients.rows(); ++i) write_row(out, model.coefficients.row(i));
  out << "basis\n";
  for (Eigen::Index i = 0; i < kernel.basis().rows(); ++i) write_row(out, kernel.basis().row(i));
  out << "end\n";
}

KfdaModel read_model(std::istream& in) {
  Reader r(in);
  auto header = r.record("mfml-model", 1);
  if (header[1] != std::to_string(kModelFormatVersion)) r.fail("unsupported model version " + header[1]);

  auto dims = r.record("dims", 3);
  const auto n = static_cast<Eigen::Index>(r.count(dims[1]));
  const auto p = static_cast<Eigen::Index>(r.count(dims[2]));
  const auto d = static_cast<Eigen::Index>(r.count(dims[3]));
  if (n < 1 || p < 1 || d < 1) r.fail("dimensions must be positive");

  KfdaModel model;
  model.num_classes = r.count(r.record("classes", 1)[1]);
  model.regularizer = r.number(r.record("regularizer", 1)[1]);

  auto comb_line = r.record("combination", 2);
  KernelCombination comb;
  try {
    comb.mode = parse_combination_mode(comb_line[1]);
  } catch (const InputError& e) {
    r.fail(e.what());
  }
  const auto q = r.count(comb_line[2]);
  for (std::size_t t = 0; t < q; ++t) {
    auto s = r.record("spec", 4);
    KernelSpec spec;
    try {
      spec.kind = parse_kernel_kind(s[1]);
    } catch (const InputError& e) {
      r.fail(e.what());
    }
    spec.width = r.number(s[2]);
    spec.degree = static_cast<int>(r.count(s[3]));
    spec.offset = r.number(s[4]);
    comb.specs.push_back(spec);
  }
  if (comb.mode == KernelCombination::Mode::convex) {
    auto w = r.record("weights", q);
    for (std::size_t t = 0; t < q; ++t) comb.weights.push_back(r.number(w[t + 1]));
  }
  if (comb.mode == KernelCombination::Mode::squared_matrix) {
    auto pr = r.record("pair", 3);
    comb.pair = {r.count(pr[1]), r.count(pr[2])};
    comb.tau = r.number(pr[3]);
  }

  auto ev = r.record("eigenvalues", static_cast<std::size_t>(p));
  model.eigenvalues.resize(p);
  for (Eigen::Index k = 0; k < p; ++k) model.eigenvalues[k] = r.number(ev[static_cast<std::size_t>(k) + 1]);
  model.coefficients = r.matrix("coefficients", n, p);
  Eigen::MatrixXd basis = r.matrix("basis", n, d);
  r.record("end", 0);

  try {
    model.kernel = std::make_shared<const BoundKernel>(std::move(comb), std::move(basis));
  } catch (const InputError& e) {
    r.fail(e.what());
  }
  return model;
}

void save_model(const std::filesystem::path& path, const KfdaModel& model) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file: " + path.string());
  write_model(out, model);
  if (!out) throw InputError("write failed: " + path.string());
}

KfdaModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file: " + path.string());
  return read_model(in);
}

}  // namespace mfml
