#pragma once

#include "mfml/kfda.hpp"

#include <filesystem>
#include <iosfwd>

namespace mfml {

inline constexpr int kModelFormatVersion = 1;

// Text format, one record per line:
//
//   mfml-model 1
//   dims <n> <p> <d>
//   classes <c>
//   regularizer <eps>
//   combination <single|convex|squared_matrix> <q>
//   spec <kind> <width> <degree> <offset>          (q lines)
//   weights <w_1> ... <w_q>                          (convex only)
//   pair <i> <j> <tau>                               (squared_matrix only)
//   eigenvalues <l_1> ... <l_p>
//   coefficients                                     (n rows of p values)
//   basis                                            (n rows of d values)
//   end
//
// Reals use shortest round-trip formatting, so loading reproduces every
// double bit for bit.
void write_model(std::ostream& out, const KfdaModel& model);
KfdaModel read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const KfdaModel& model);
KfdaModel load_model(const std::filesystem::path& path);

}  // namespace mfml
