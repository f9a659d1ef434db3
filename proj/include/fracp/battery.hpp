#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fracp {

struct BatterySummary {
  std::string check;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  /// Smallest normalized slack seen; negative below -1e-12 means a violation.
  double worst_slack = 0.0;
  /// Arguments of the first violation, empty when none.
  std::string counterexample;
};

/// Names of the checks in battery order.
std::vector<std::string> battery_checks();

/// Runs every pointwise check on `samples` random tuples plus the deterministic corner
/// battery. Samples are split into fixed partitions with their own seeds, so results
/// do not depend on the thread count.
std::vector<BatterySummary> run_property_battery(std::uint64_t samples, std::uint64_t seed);

/// Same, restricted to one named check.
BatterySummary run_check(const std::string& check, std::uint64_t samples, std::uint64_t seed);

}  // namespace fracp
