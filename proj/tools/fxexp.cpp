#include <iostream>
#include <string>
#include <vector>

#include "fxexp/cli.hpp"

int main(int argc, char** argv)
{
    return fxexp::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
