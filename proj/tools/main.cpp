#include <string>
#include <vector>

#include "thickpave/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return thickpave::cli::run(args);
}
