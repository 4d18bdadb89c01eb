#pragma once

// Probability-bound verification suites. Each sub-check compares a statistic with a bound
// plus a slack (3 standard errors for Monte Carlo checks, 0 for deterministic
// ones); a suite passes iff every sub-check passes.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "twopt/kernels.hpp"

namespace twopt {

struct SubCheck {
  std::string name;
  double statistic = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  /// "<=": statistic <= bound + slack. ">": statistic > bound + slack.
  std::string relation = "<=";
  bool passed = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<SubCheck> checks;

  bool passed() const;
  std::string to_text() const;
};

/// ball, line, dominance, chi, integral, tail, linked. Monte Carlo sub-checks
/// are skipped when samples == 0; chi and integral keep their quadrature checks.
SuiteReport verify_suite(std::string_view name, std::uint64_t samples, std::uint64_t seed,
                         kernels::Exec exec = kernels::Exec::parallel);

const std::vector<std::string_view>& suite_names();

}  // namespace twopt
