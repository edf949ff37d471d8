#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace normkam::cli {

// Entry point shared by the executable and the tests. Returns the process
// exit code: 0 success (obstructions are results), 1 usage error, 2 failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace normkam::cli
