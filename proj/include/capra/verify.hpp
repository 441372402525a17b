#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace capra::verify {

// Tolerances used by the suites; all are printed in the report header.
inline constexpr double kExactTolerance = 0.0;
inline constexpr double kRoundoffTolerance = 1e-12;
inline constexpr double kIdentityTolerance = 1e-9;
inline constexpr double kGridConjugateTolerance = 2e-2;
inline constexpr double kOracleTolerance = 1e-2;
inline constexpr double kGeneralTolerance = 1e-3;
inline constexpr double kEpigraphTolerance = 6e-2;

struct Config {
  std::uint64_t seed = 20191024;
  double scale = 1.0;         // multiplies every sample count
  bool inject_fault = false;  // swaps in the Capra coupling with the broken origin convention
  std::vector<std::string> suites;  // empty means all
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  double max_deviation = 0;
  std::size_t checks = 0;
  std::string detail;  // first failure, if any
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
SuiteResult run_suite(std::string_view name, const Config& config);

/// Runs the selected suites and prints the report. Returns 0 when every suite
/// passes and 2 otherwise.
int run(const Config& config, std::ostream& os);

}  // namespace capra::verify
