#pragma once

#include <ostream>

namespace eightv::cli {

// Exit codes: 0 success, 1 runtime failure, 2 usage or weight constraint,
// 3 parameter outside an operation's domain.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eightv::cli
