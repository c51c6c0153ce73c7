#include <iostream>
#include <vector>

#include "cja/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cja::cli::run(args, std::cout, std::cerr);
}
