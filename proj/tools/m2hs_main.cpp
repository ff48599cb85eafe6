#include "m2hs/cli.hpp"

int main(int argc, char** argv) { return m2hs::cli::run(argc, argv); }
