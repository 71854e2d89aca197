#include "barron/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return barron::dispatch({argv, argv + argc}, std::cout, std::cerr); }
