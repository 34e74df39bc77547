#pragma once

#include <string>
#include <vector>

namespace qspi {

// Entry point shared by the binary and the tests. Exit codes: 0 success,
// 1 usage error, 2 numerical-invariant failure.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

}  // namespace qspi
