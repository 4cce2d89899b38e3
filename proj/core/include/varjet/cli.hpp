#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace varjet {

/// Runs one command-line invocation (arguments without the program name).
/// Output is deterministic: identical inputs produce byte-identical streams.
/// Exit codes: 0 success; 1 mathematical verdict false; 2 input/parse error;
/// 3 could not decide (extraction failure, invariant violation, order bound,
/// timeout).
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

} // namespace varjet
