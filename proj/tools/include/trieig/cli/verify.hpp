#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trieig/cli/report.hpp"
#include "trieig/matgen.hpp"

namespace trieig::cli {

/// Names accepted by --suite, in execution order.
const std::vector<std::string>& verify_suite_names();

struct VerifyConfig {
  std::vector<std::string> suites;  // empty: all
  std::size_t max_m = 200;
  std::uint64_t seed = 1;
  /// Restricts the parameter-driven suites (growth, skeel_bound, robust_naive)
  /// to this single matrix.
  std::optional<MatrixParams> params;
};

struct VerifyResult {
  bool pass = true;
  Json report;
};

/// Runs the selected property suites. Each suite reports case counts and,
/// on failure, the first failing case after shrinking. The report carries
/// no timings, so equal configs give byte-identical output.
/// Throws std::invalid_argument for an unknown suite name.
VerifyResult run_verify(const VerifyConfig& config);

}  // namespace trieig::cli
