#pragma once

#include <string>
#include <vector>

#include "quasiwork/types.hpp"

namespace quasiwork {

enum class VerifyLevel { Quick, Full };

struct CheckResult {
  std::string name;
  bool pass = false;
  double max_err = 0.0;
  double bound = 0.0;
  std::string detail;  // worst-offender parameters
};

struct VerifyReport {
  VerifyLevel level = VerifyLevel::Quick;
  bool passed = false;
  double seconds = 0.0;
  std::vector<CheckResult> checks;
  std::string to_json() const;
};

// Oracle-equivalence and invariant suites; `Quick` stays under half a minute,
// `Full` adds larger sizes and the Pfaffian/Grassmann identity checks.
VerifyReport run_verification(VerifyLevel level);

}  // namespace quasiwork
