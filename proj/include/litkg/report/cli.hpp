#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace litkg::report {

enum ExitCode : int { kExitOk = 0, kExitUserError = 1, kExitInternalError = 2 };

/// Runs one subcommand (ingest, build, validate, analyze, report, pipeline).
/// `args` excludes the program name. Usage and summaries go to `out`, errors to
/// `err`; structured logs go to stderr.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_dispatch(int argc, char** argv);

} // namespace litkg::report
