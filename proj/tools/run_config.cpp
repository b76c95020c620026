#include "run_config.hpp"

#include "mfml/digest.hpp"
#include "mfml/errors.hpp"

#include <charconv>
#include <fstream>
#include <functional>

namespace mfml::cli {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const InputError&) {
    throw InputError(key + ": expected a number, got '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

}  // namespace

std::vector<std::size_t> parse_count_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) out.push_back(parse_unsigned("list", item));
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_real("list", item));
  return out;
}

EvalConfig RunConfig::eval_config() const {
  EvalConfig c;
  c.method = method;
  c.train_fraction = train_fraction;
  c.trials = trials;
  c.base_seed = base_seed;
  c.q = q;
  c.width_lo = width_lo;
  c.width_hi = width_hi;
  c.eps = eps;
  c.p = p;
  c.folds = folds;
  c.grids.n_grid = n_grid;
  c.grids.tau_grid = tau_grid;
  c.threads = threads;
  return c;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path.string());
  KeyValues values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(path.string() + ": line " + std::to_string(line_no) + ": expected key=value");
    }
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

RunConfig make_run_config(const KeyValues& values) {
  RunConfig c;
  const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
      {"method", [&](auto&, auto& v) { c.method = parse_method(v); }},
      {"features", [&](auto&, auto& v) { c.features = v; }},
      {"train_fraction", [&](auto& k, auto& v) { c.train_fraction = parse_real(k, v); }},
      {"trials", [&](auto& k, auto& v) { c.trials = parse_unsigned(k, v); }},
      {"base_seed", [&](auto& k, auto& v) { c.base_seed = parse_unsigned(k, v); }},
      {"q", [&](auto& k, auto& v) { c.q = static_cast<int>(parse_unsigned(k, v)); }},
      {"width_lo", [&](auto& k, auto& v) { c.width_lo = parse_real(k, v); }},
      {"width_hi", [&](auto& k, auto& v) { c.width_hi = parse_real(k, v); }},
      {"kernel", [&](auto&, auto& v) { c.kernel = parse_kernel_kind(v); }},
      {"eps", [&](auto& k, auto& v) { c.eps = parse_real(k, v); }},
      {"p", [&](auto& k, auto& v) { c.p = (v == "full") ? 0 : parse_unsigned(k, v); }},
      {"n_grid", [&](auto&, auto& v) { c.n_grid = parse_count_list(v); }},
      {"tau_grid", [&](auto&, auto& v) { c.tau_grid = parse_real_list(v); }},
      {"folds", [&](auto& k, auto& v) { c.folds = parse_unsigned(k, v); }},
      {"out", [&](auto&, auto& v) { c.out = v; }},
      {"threads", [&](auto& k, auto& v) { c.threads = static_cast<unsigned>(parse_unsigned(k, v)); }},
      {"model", [&](auto&, auto& v) { c.model = std::filesystem::path(v); }},
      {"p_values", [&](auto&, auto& v) { c.p_values = parse_count_list(v); }},
  };
  for (const auto& [key, value] : values) {
    auto it = setters.find(key);
    if (it == setters.end()) throw InputError("unknown config key: " + key);
    it->second(key, value);
  }

  if (!(c.eps > 0.0)) throw InputError("eps must be positive");
  if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) throw InputError("train_fraction must lie in (0, 1)");
  if (c.q < 1) throw InputError("q must be at least 1");
  if (c.trials < 1) throw InputError("trials must be at least 1");
  if (c.folds < 1) throw InputError("folds must be at least 1");
  if (c.kernel != KernelKind::rbf) throw InputError("only the rbf kernel is supported by the pipeline");
  if (!(c.width_lo > 0.0 && c.width_lo < c.width_hi)) throw InputError("need 0 < width_lo < width_hi");
  if (c.tau_grid.empty()) throw InputError("tau_grid must not be empty");
  return c;
}

}  // namespace mfml::cli
