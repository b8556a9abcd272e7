#include <iostream>

#include "skelpair/cli.hpp"

int main(int argc, char** argv) { return skelpair::dispatch(argc, argv, std::cout, std::cerr); }
