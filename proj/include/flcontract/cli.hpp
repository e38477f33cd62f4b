#pragma once

namespace flcontract {

enum ExitCode : int {
    kExitOk = 0,
    kExitInfeasible = 1, ///< ran to completion but some feasibility verdict failed
    kExitUsage = 2,      ///< bad flags, unknown command, unreadable or invalid config
    kExitRuntime = 3,    ///< solver or I/O failure
};

/// Entry point shared by the executable and the test suites.
int run_cli(int argc, const char* const* argv);

} // namespace flcontract
