#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tpg::cli {

// Exit codes: 0 ok, 2 usage/validation, 3 domain error, 4 no solution,
// 5 non-convergence.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tpg::cli
