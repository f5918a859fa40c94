#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spm/learner.hpp"

namespace spm::cli {

enum class OutputFormat { Text, Json };

struct Options {
  SearchParams search;
  CostModel cost_model = CostModel::Frequency;
  double literal_factor = 8.0;
  std::size_t top_k = 3;
  OutputFormat format = OutputFormat::Text;
  /// Throws std::invalid_argument on bad search params, top_k == 0 or a
  /// non-positive literal factor.
  void validate() const;
};

/// args excludes the program name. Returns the exit status: 0 success,
/// 1 usage error, 2 data error, 3 file error. Diagnostics go to err as a
/// single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spm::cli
