#pragma once

#include <string>
#include <vector>

namespace pomcpe {

struct ValidationCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  std::string to_text() const;
};

/// Faults the validation suite can be asked to inject, to prove that the
/// corresponding checks actually fire.
struct ValidationFaults {
  bool delete_room = false;
  bool corrupt_entropy = false;
};

/// Incremental-entropy property suite, Tiger oracle checks, and layout
/// validation for k1 = k2 in {0, 1, 2}. Never throws; failures are reported.
ValidationReport run_validation(const ValidationFaults& faults = {});

}  // namespace pomcpe
