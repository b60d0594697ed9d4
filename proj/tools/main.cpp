#include "cli.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    const char* caps = std::getenv("ORDERSCOPE_CAPS");
    return orderscope::cli::run(args, std::cout, std::cerr, caps ? caps : "");
}
