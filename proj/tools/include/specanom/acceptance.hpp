#pragma once

#include <functional>
#include <string>
#include <vector>

#include "specanom/cli.hpp"

namespace specanom::acceptance {

/// One acceptance criterion: a set of dual-path or closed-form checks.
struct Criterion {
  int number = 0;
  std::string title;
  std::function<std::vector<AnomalyReport>()> checks;
  double budget_seconds = 0.0;  // wall-clock limit; 0 for none
};

/// Criteria 1 to 11; criterion 12 exercises the CLI around them.
const std::vector<Criterion>& criteria();

/// Runs one criterion as a task of kind "acceptance"; errors are captured.
cli::TaskResult run_criterion(const Criterion& c);

/// The built-in catalog, run through the same scheduler as configs.
cli::ReportDocument selftest(const cli::RunOptions& options);

}  // namespace specanom::acceptance
