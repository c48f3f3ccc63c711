// cli.hpp: command-line front end. Kept as a library entry point so tests
// can drive it in-process with captured streams.
#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace intergrams {

// Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 internal
// error or failed assertion.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace intergrams
