#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace lvlm {

// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitInputError = 1,
    kExitNumericError = 2,
};

// Runs one `lvlm` invocation. `args` excludes the program name. Results go
// to `out`, diagnostics and usage text to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace lvlm
