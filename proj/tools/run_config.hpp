#pragma once

#include "mfml/eval.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mfml::cli {

/// Everything a command needs. Key names in config files match the field names.
struct RunConfig {
  Method method = Method::kfda;
  std::filesystem::path features;
  double train_fraction = 0.5;
  std::size_t trials = 10;
  std::uint64_t base_seed = 0;
  int q = 20;
  double width_lo = 0.1;
  double width_hi = 10.0;
  KernelKind kernel = KernelKind::rbf;
  double eps = kDefaultRegularizer;
  std::size_t p = 0;  // 0: full (c - 1)
  std::vector<std::size_t> n_grid;
  std::vector<double> tau_grid{0.0, 1e-3, 1e-2, 1e-1, 1.0};
  std::size_t folds = 10;
  std::filesystem::path out = ".";
  unsigned threads = 1;
  std::optional<std::filesystem::path> model;
  std::vector<std::size_t> p_values;

  EvalConfig eval_config() const;
};

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines; '#' starts a comment. Throws InputError.
KeyValues read_config_file(const std::filesystem::path& path);

/// Applies known keys over the defaults and validates ranges. Unknown keys are
/// an InputError.
RunConfig make_run_config(const KeyValues& values);

std::vector<std::size_t> parse_count_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

}  // namespace mfml::cli
