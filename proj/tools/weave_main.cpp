#include <iostream>

#include "weave/cli.hpp"

int main(int argc, char** argv) {
    return weave::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
