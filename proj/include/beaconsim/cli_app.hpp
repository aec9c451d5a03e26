#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace beaconsim {

/// Command-line entry point (simulate | detect | metrics | sweep), testable
/// in-process. Returns the process exit code: 0 success, 2 config/input
/// error, 3 divergence (simulate; outputs still written).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace beaconsim
