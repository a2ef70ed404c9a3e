#include <iostream>
#include <vector>

#include "sixv/cli.hpp"

int main(int argc, char** argv) {
    return sixv::cli::run(std::vector<std::string>(argv + 1, argv + argc),
                          std::cout, std::cerr);
}
