#pragma once

#include <string>
#include <vector>

namespace swreg {

// Command-line front end. Exit codes: 0 success, 1 mathematical failure
// (infeasible, uncertified, failed criteria), 2 input error (parse errors,
// dimension mismatches, bad flags).
int run_cli(const std::vector<std::string>& args);

}  // namespace swreg
