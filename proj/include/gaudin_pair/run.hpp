#ifndef GAUDIN_PAIR_RUN_HPP
#define GAUDIN_PAIR_RUN_HPP

#include <iosfwd>

#include "gaudin_pair/config.hpp"

namespace gaudin_pair {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitSolverExhausted = 2,
  kExitInvalidConfig = 3,
};

/// Largest relative eigen-equation residual a Bethe record may carry.
inline constexpr double kRecordResidualGate = 1e-8;

/// Runs the configured workflow, writing the report to `out` and
/// diagnostics to `diag`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& diag);

}  // namespace gaudin_pair

#endif  // GAUDIN_PAIR_RUN_HPP
