#pragma once

// Fast self-checks of the library against independent closed forms and
// finite differences. Backs the `validate` subcommand.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace sgnet {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct PropertyCheck {
  std::string name;
  /// Returns true on success and fills `detail` with the measured quantity.
  std::function<bool(std::string& detail)> run;
};

std::vector<PropertyCheck> property_checks();

/// Runs every check whose name contains `filter` (all when empty); an
/// exception inside a check counts as a failure.
std::vector<CheckResult> run_property_checks(const std::string& filter = {});

/// Prints one "PASS|FAIL name (detail)" line per check and returns the
/// number of failures.
int report_property_checks(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace sgnet
