#include <iostream>
#include <string>
#include <vector>

#include "mpt/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return mpt::cli::run(args, std::cout, std::cerr);
}
