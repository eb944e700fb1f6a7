#pragma once

// Command-line front end. Returns 0 on success, 1 on usage errors (no
// artifacts are written in that case), 2 on runtime failures.

#include <string>
#include <vector>

namespace subreg {

int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args without the program name

}  // namespace subreg
