#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace membrana::cli {

enum ExitCode : int { kOk = 0, kSolverError = 1, kConfigError = 2, kCheckFailed = 3 };

// Entry point shared by the executable and the tests. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Column documentation for every CSV the tool writes.
void print_schema(std::ostream& os);

}  // namespace membrana::cli
