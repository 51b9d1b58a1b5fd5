#include "chromaharmony/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return chromaharmony::run_cli(argc, argv, std::cout, std::cerr); }
