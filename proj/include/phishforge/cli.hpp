#pragma once

#include <string>
#include <vector>

namespace phishforge::cli {

// Exit codes: 0 ok, 1 usage, 2 network, 3 generation/processing,
// 4 verification violations.
int run(const std::vector<std::string>& args);

}  // namespace phishforge::cli
