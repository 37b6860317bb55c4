#pragma once

// Named end-to-end checks of the library against frozen reference values
// and cross-route identities. Each check belongs to one acceptance criterion.

#include <iosfwd>
#include <string>
#include <vector>

#include "qheat/dynamics.hpp"

namespace qheat::verify {

struct Check {
  std::string id;
  int criterion = 0;
  std::string description;
  /// Human-readable pass condition on `observed`, e.g. "<= 1e-08".
  std::string bound;
  double observed = 0.0;
  bool pass = false;
  /// Exception text when the check could not run.
  std::string error;
};

struct Options {
  /// Run only these check ids; empty runs everything.
  std::vector<std::string> only;
  /// Analytic pair solver under test.
  dynamics::AnalyticSolver analytic_solver = dynamics::default_analytic_solver();
};

/// Every check id in run order.
std::vector<std::string> check_ids();

/// Throws InvalidInput for an unknown id in `opts.only`.
std::vector<Check> run(const Options& opts = {});

bool all_pass(const std::vector<Check>& checks);

/// Checks of one criterion pass; false when none of them ran.
bool criterion_pass(const std::vector<Check>& checks, int criterion);

void print_table(std::ostream& os, const std::vector<Check>& checks);

}  // namespace qheat::verify
