#pragma once

#include <string>
#include <vector>

namespace raman::cli {

// Entry point shared by the binary and the tests. Exit codes: 0 success,
// 1 runtime/data error, 2 usage error.
int run(const std::vector<std::string>& args);

}  // namespace raman::cli
