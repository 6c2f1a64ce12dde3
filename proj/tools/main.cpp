#include <iostream>

#include "chainnet/cli.hpp"

int main(int argc, char** argv) {
    return chainnet::run(argc, argv, std::cout, std::cerr);
}
