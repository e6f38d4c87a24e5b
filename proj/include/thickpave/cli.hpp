#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace thickpave::cli {

/**
 * Runs the command-line front end on an argv-style argument list (without
 * the program name). Exit codes are the machine contract:
 *   0  success
 *   1  parse or validation failure (diagnostic on err)
 *   2  `check` found oracle points inside OUT boxes
 *   3  paver resource budget exhausted
 */
int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

} // namespace thickpave::cli
