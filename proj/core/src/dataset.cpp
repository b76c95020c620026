#include "mfml/dataset.hpp"

#include "mfml/digest.hpp"
#include "mfml/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace mfml {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail_at(std::string_view source, std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << source << ": line " << line << ": " << what;
  throw InputError(msg.str());
}

}  // namespace

Dataset make_dataset(Eigen::MatrixXd features, std::vector<std::string> identities,
                     std::vector<int> cameras) {
  const auto n = identities.size();
  if (n < 2) throw InputError("dataset needs at least 2 samples, got " + std::to_string(n));
  if (features.cols() < 1) throw InputError("dataset needs at least 1 feature column");
  if (static_cast<std::size_t>(features.rows()) != n || cameras.size() != n) {
    throw InputError("features, identities and cameras must have the same length");
  }
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    if (!features.row(i).allFinite()) {
      throw InputError("non-finite feature value in sample " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (identities[i].empty()) throw InputError("empty identity label in sample " + std::to_string(i));
    if (cameras[i] < 0) throw InputError("negative camera label in sample " + std::to_string(i));
  }
  return Dataset{std::move(features), std::move(identities), std::move(cameras)};
}

Dataset read_features(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;

  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto header = split_fields(line);
    if (header.size() < 3 || trim(header[0]) != "id" || trim(header[1]) != "cam") {
      fail_at(source, line_no, "header must be id,cam,f1,...,fd");
    }
    dim = header.size() - 2;
    break;
  }
  if (dim == 0) fail_at(source, line_no, "missing header row");

  std::vector<std::string> ids;
  std::vector<int> cams;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != dim + 2) {
      fail_at(source, line_no,
              "expected " + std::to_string(dim + 2) + " columns, found " + std::to_string(fields.size()));
    }
    const auto id = trim(fields[0]);
    if (id.empty()) fail_at(source, line_no, "empty id");
    const auto cam_text = trim(fields[1]);
    int cam = -1;
    const auto [ptr, ec] = std::from_chars(cam_text.data(), cam_text.data() + cam_text.size(), cam);
    if (ec != std::errc{} || ptr != cam_text.data() + cam_text.size() || cam < 0) {
      fail_at(source, line_no, "camera must be a non-negative integer, found '" + std::string(cam_text) + "'");
    }
    for (std::size_t j = 0; j < dim; ++j) {
      double v = 0.0;
      try {
        v = parse_double(fields[j + 2]);
      } catch (const InputError&) {
        fail_at(source, line_no, "malformed value in column " + std::to_string(j + 3));
      }
      if (!std::isfinite(v)) {
        fail_at(source, line_no, "non-finite value in column " + std::to_string(j + 3));
      }
      values.push_back(v);
    }
    ids.emplace_back(id);
    cams.push_back(cam);
  }
  if (ids.size() < 2) {
    fail_at(source, line_no, "need at least 2 samples, found " + std::to_string(ids.size()));
  }

  Eigen::MatrixXd features(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * dim + j];
    }
  }
  return make_dataset(std::move(features), std::move(ids), std::move(cams));
}

Dataset load_features(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open feature file: " + path.string());
  return read_features(in, path.string());
}

void write_features(std::ostream& out, const Dataset& ds) {
  out << "id,cam";
  for (std::size_t j = 1; j <= ds.dim(); ++j) out << ",f" << j;
  out << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.identities[i] << ',' << ds.cameras[i];
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
      out << ',' << format_double(ds.features(static_cast<Eigen::Index>(i), j));
    }
    out << '\n';
  }
}

void save_features(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write feature file: " + path.string());
  write_features(out, ds);
  if (!out) throw InputError("write failed: " + path.string());
}

Eigen::MatrixXd select_rows(const Dataset& ds, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), ds.features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= ds.size()) throw InputError("sample index out of range: " + std::to_string(rows[i]));
    out.row(static_cast<Eigen::Index>(i)) = ds.features.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

std::vector<std::size_t> all_indices(const Dataset& ds) {
  std::vector<std::size_t> idx(ds.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return idx;
}

ClassIndex index_labels(std::span<const std::string> labels) {
  if (labels.empty()) throw InputError("cannot index an empty subset");
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t pos = 0; pos < labels.size(); ++pos) groups[labels[pos]].push_back(pos);

  ClassIndex idx;
  idx.subset.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) idx.subset[i] = i;
  for (auto& [label, positions] : groups) {
    idx.classes.push_back(label);
    idx.counts.push_back(positions.size());
    idx.members.push_back(positions);
    idx.positions.push_back(std::move(positions));
  }
  return idx;
}

ClassIndex index_classes(const Dataset& ds, std::span<const std::size_t> subset) {
  if (subset.empty()) throw InputError("cannot index an empty subset");
  std::unordered_set<std::size_t> seen;
  std::vector<std::string> labels;
  labels.reserve(subset.size());
  for (auto row : subset) {
    if (row >= ds.size()) throw InputError("sample index out of range: " + std::to_string(row));
    if (!seen.insert(row).second) throw InputError("duplicate sample index: " + std::to_string(row));
    labels.push_back(ds.identities[row]);
  }
  auto idx = index_labels(labels);
  idx.subset.assign(subset.begin(), subset.end());
  for (auto& members : idx.members) {
    for (auto& m : members) m = subset[m];
  }
  return idx;
}

}  // namespace mfml
