#include "toelanczos/cli.hpp"

int main(int argc, char** argv) { return toel::cli::main(argc, argv); }
