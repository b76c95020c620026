#pragma once

#include "run_config.hpp"

#include "mfml/synth.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mfml::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kNumericError = 3 };

// Each command writes its files under config.out and results to `out`.
void cmd_train(const RunConfig& config, std::ostream& out);
void cmd_evaluate(const RunConfig& config, std::ostream& out);
void cmd_cv(const RunConfig& config, std::ostream& out);
void cmd_sweep(const RunConfig& config, std::ostream& out);
void cmd_synth(const SynthParams& params, const std::filesystem::path& path, std::ostream& out);

/// Full command line (args[0] is the program name). Returns the exit code;
/// causes of failure go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mfml::cli
