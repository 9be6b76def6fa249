#pragma once

namespace qwork::cli {

/// Entry point of the command-line tool; returns the process exit code
/// (0 success, 1 domain error, 2 argument/file error).
int run(int argc, const char* const* argv);

}  // namespace qwork::cli
