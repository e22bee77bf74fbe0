#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bcs {

/// Runs the tool on `args` (without the program name). Data goes to `out` or
/// to --out files, diagnostics to `err`, the REPL reads `in`.
/// Exit codes: 0 ok, 1 runtime error, 2 usage or query syntax error,
/// 3 semantic or configuration error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace bcs
