#ifndef EDPDCS_CLI_HPP
#define EDPDCS_CLI_HPP

#include <iosfwd>

namespace edpdcs {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

// Entry point of the `edpdcs` tool: plan | run | compare | bench.
// Output files default to $EDPDCS_OUTPUT_DIR (or the working directory).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace edpdcs

#endif  // EDPDCS_CLI_HPP
