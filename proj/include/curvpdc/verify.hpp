#pragma once

#include <string>
#include <vector>

#include "curvpdc/pdc.hpp"
#include "curvpdc/scs.hpp"

namespace curvpdc::sweep {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Informational checks report a number and never fail the suite.
  bool informational = false;
  std::string detail;
};

struct VerifyOptions {
  pdc::TruncationPolicy policy;
  /// Deformation used on the analytic side only; the oracle side builds its
  /// seed independently. Swapping this is how suite sensitivity is tested.
  scs::DeformationFn deformation = scs::g_deform;
  /// Run only these checks (all when empty).
  std::vector<std::string> only;
  /// Shrinks the oracle and doubling grids for quick runs.
  bool reduced_grid = false;
  int threads = 1;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  std::string to_json() const;
};

const std::vector<std::string>& verify_check_names();

VerifyReport verify_suite(const VerifyOptions& options = {});

}  // namespace curvpdc::sweep
