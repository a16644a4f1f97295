#pragma once

#include <string>
#include <vector>

namespace medalqa::cli {

// Exit codes: 0 success, 1 usage/config, 2 data error, 3 endpoint failure.
int run(const std::vector<std::string>& args);

}  // namespace medalqa::cli
