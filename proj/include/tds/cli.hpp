#pragma once

#include <iosfwd>

namespace tds::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kNumerical = 3,
    kTuneExhausted = 4,
};

/// Entry point of the `tds` tool. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tds::cli
