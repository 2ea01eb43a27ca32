#pragma once

#include <string>
#include <vector>

#include "cachelab/analysis.hpp"

namespace cachelab {

enum class VerifyLevel {
  /// Case studies, tight points and small grids; a few seconds.
  Quick,
  /// The complete grids: simulation up to N, K = 6, bounds up to 12, gaps up to 20.
  Full,
};

struct NamedCheck {
  std::string name;  // e.g. "case_study:D2D_N3K3:2R+M>=3"
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<NamedCheck> checks;

  bool all_pass() const;
  /// First failing check in run order, or nullptr.
  const NamedCheck* first_failure() const;
};

/// Runs the built-in checks in a fixed order. `evaluator` feeds the case
/// studies only.
VerifyReport run_verify(VerifyLevel level, const TermEvaluator& evaluator = default_term_evaluator,
                        int jobs = 1);

}  // namespace cachelab
