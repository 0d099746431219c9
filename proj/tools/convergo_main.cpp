#include "convergo/cli.hpp"

int main(int argc, char** argv) { return convergo::cli::run(argc, argv); }
