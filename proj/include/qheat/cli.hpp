#pragma once

// Command-line front end. Exit codes: 0 ok, 1 I/O failure, 2 invalid
// physics input or usage, 3 verification failure.

#include <iosfwd>
#include <string>
#include <vector>

#include "qheat/dynamics.hpp"

namespace qheat::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kInvalidInput = 2, kVerificationFailed = 3 };

struct Hooks {
  /// Analytic pair solver used by `verify`.
  dynamics::AnalyticSolver analytic_solver = dynamics::default_analytic_solver();
};

/// `args` excludes the program name. Data goes to `out` (or --output),
/// summaries and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks = {});

}  // namespace qheat::cli
