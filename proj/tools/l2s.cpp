#include "l2s/cli.hpp"

int main(int argc, char** argv) { return l2s::cli::run(argc, argv); }
