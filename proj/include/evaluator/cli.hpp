#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evaluator {

namespace exit_code {
inline constexpr int accept = 0;
inline constexpr int failure = 1;
inline constexpr int usage = 2;
inline constexpr int reject = 3;
inline constexpr int insufficient_calibration = 4;
}  // namespace exit_code

// Runs one command line (args excludes the program name). Diagnostics go to
// err as a single "error code=<Code>: <message>" line.
int cli_dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace evaluator
