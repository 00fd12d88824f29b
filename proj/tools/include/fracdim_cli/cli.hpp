#pragma once

#include <string>
#include <vector>

namespace fracdim::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_checks_failed = 1,
    exit_usage = 2,
    exit_runtime = 3,
};

struct Result {
    int exit_code = exit_ok;
    std::string out;  // report text (empty when written to --out)
    std::string err;  // warnings and diagnostics
};

// Runs one command line (without the program name). No output is written to
// the process streams; callers print Result::out and Result::err.
Result run(const std::vector<std::string>& args);

// Arguments echoed into reports: everything except --threads, --out and
// --timing, which do not change report content.
std::vector<std::string> echo_args(const std::vector<std::string>& args);

}  // namespace fracdim::cli
