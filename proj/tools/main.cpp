#include <iostream>
#include <string>
#include <vector>

#include "pdecon/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pdecon::cli::run(args, std::cout, std::cerr);
}
